#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "asepqh/ansatz.hpp"
#include "asepqh/errors.hpp"
#include "asepqh/oracle.hpp"
#include "asepqh/params.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace asepqh;

namespace {

const AsepParams kSym{1.0, 1.0, 0.0, 0.0, 0.0};

std::vector<std::vector<double>> dense(const Tridiagonal& t) {
    const int m = t.dim();
    std::vector<std::vector<double>> out(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) out[i][j] = t.entry(i, j);
    }
    return out;
}

std::vector<std::vector<double>> matmul(const std::vector<std::vector<double>>& a,
                                        const std::vector<std::vector<double>>& b) {
    const int m = static_cast<int>(a.size());
    std::vector<std::vector<double>> out(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < m; ++k) {
            if (a[i][k] == 0.0) continue;
            for (int j = 0; j < m; ++j) out[i][j] += a[i][k] * b[k][j];
        }
    }
    return out;
}

// <W| prod_j (E + t_j D) |V> / <W| (E + D)^N |V> at an explicit truncation.
double manual_gf(const AwParams& w, const std::vector<double>& t, int m) {
    const MatrixAnsatz a = matrix_ansatz(w, m);
    auto product_head = [&](const std::vector<double>& ts) {
        std::vector<double> row(m, 0.0), next(m, 0.0);
        row[0] = 1.0;
        for (double tj : ts) {
            const Tridiagonal factor = band_combine(1.0, a.e, tj, a.d);
            factor.row_apply(row, next);
            row.swap(next);
        }
        return row[0];
    };
    const std::vector<double> ones(t.size(), 1.0);
    return product_head(t) / product_head(ones);
}

} // namespace

TEST_CASE("ansatz: recurrence coefficients at the origin") {
    const RecurrenceCoeffs c0 = aw_recurrence_coeffs(0, 0, 0, 0, 0, 0.5);
    CHECK(c0.abar == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c0.b == doctest::Approx(0.0));
    CHECK(c0.cbar == 0.0);
    const RecurrenceCoeffs c2 = aw_recurrence_coeffs(2, 0, 0, 0, 0, 0.5);
    CHECK(c2.abar == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::fabs(c2.b) <= 1e-14);
    CHECK(c2.cbar == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("ansatz: complex and real coefficient paths agree") {
    const double a = 0.5, b = -0.2, c = 0.8, d = -0.1, q = 0.3;
    const std::array<std::complex<double>, 4> p = {
        std::complex<double>(a, 0.0), std::complex<double>(b, 0.0),
        std::complex<double>(c, 0.0), std::complex<double>(d, 0.0)};
    for (int n = 0; n <= 5; ++n) {
        const RecurrenceCoeffs rc = aw_recurrence_coeffs(n, a, b, c, d, q);
        const auto cc = aw_recurrence_coeffs(n, p, q);
        CHECK(std::fabs(cc[0].real() - rc.abar) <= 1e-13);
        CHECK(std::fabs(cc[1].real() - rc.b) <= 1e-13);
        CHECK(std::fabs(cc[2].real() - rc.cbar) <= 1e-13);
        for (const auto& v : cc) CHECK(std::fabs(v.imag()) <= 1e-13);
    }
}

TEST_CASE("ansatz: degenerate denominators are reported") {
    CHECK_THROWS_AS(aw_recurrence_coeffs(0, 2.0, 0.5, 1.0, 1.0, 0.5),
                    DegenerateDenominator);
}

TEST_CASE("ansatz: tridiagonal storage and actions") {
    Tridiagonal t;
    t.sub = {2.0, 3.0, 0.0};
    t.diag = {1.0, 4.0, 6.0};
    t.sup = {0.0, 5.0, 7.0};
    CHECK(t.dim() == 3);
    CHECK(t.entry(0, 0) == 1.0);
    CHECK(t.entry(1, 0) == 2.0);
    CHECK(t.entry(0, 1) == 5.0);
    CHECK(t.entry(2, 1) == 3.0);
    CHECK(t.entry(1, 2) == 7.0);
    CHECK(t.entry(0, 2) == 0.0);
    CHECK_THROWS_AS(t.entry(0, 3), IndexOutOfRange);
    CHECK_THROWS_AS(t.entry(-1, 0), IndexOutOfRange);

    const std::vector<double> w = {1.0, 2.0, 3.0};
    std::vector<double> out(3);
    t.row_apply(w, out);
    // (w T)_j = w_j diag_j + w_{j+1} sub_j + w_{j-1} sup_j.
    CHECK(out[0] == doctest::Approx(1.0 * 1.0 + 2.0 * 2.0));
    CHECK(out[1] == doctest::Approx(2.0 * 4.0 + 3.0 * 3.0 + 1.0 * 5.0));
    CHECK(out[2] == doctest::Approx(3.0 * 6.0 + 2.0 * 7.0));

    t.col_apply(w, out);
    CHECK(out[0] == doctest::Approx(1.0 * 1.0 + 2.0 * 5.0));
    CHECK(out[1] == doctest::Approx(1.0 * 2.0 + 2.0 * 4.0 + 3.0 * 7.0));
    CHECK(out[2] == doctest::Approx(2.0 * 3.0 + 3.0 * 6.0));

    const Tridiagonal s = band_combine(2.0, t, -1.0, t);
    CHECK(s.entry(1, 0) == doctest::Approx(2.0));
    Tridiagonal small;
    small.sub = {0.0};
    small.diag = {1.0};
    small.sup = {0.0};
    CHECK_THROWS_AS(band_combine(1.0, t, 1.0, small), LengthMismatch);
}

TEST_CASE("ansatz: zero-parameter bands of the split pair") {
    const double q = 0.5;
    AwParams w;
    w.q = q;
    const int m = 8;
    const double root = std::sqrt(1.0 - q);
    const TridiagonalPair pair = jacobi_pair(w, m);
    for (int n = 0; n < m; ++n) {
        if (n >= 1) {
            CHECK(pair.x.sup[n] ==
                  doctest::Approx((1.0 - std::pow(q, n)) / root).epsilon(1e-12));
        }
        if (n < m - 1) {
            CHECK(std::fabs(pair.x.sub[n]) <= 1e-12);
            CHECK(pair.y.sub[n] == doctest::Approx(1.0 / root).epsilon(1e-12));
        }
        CHECK(std::fabs(pair.x.diag[n]) <= 1e-12);
        CHECK(std::fabs(pair.y.diag[n]) <= 1e-12);
        if (n >= 1) CHECK(std::fabs(pair.y.sup[n]) <= 1e-12);
    }
    // J(t) = t x + y entrywise.
    const Tridiagonal j3 = jacobi_matrix(w, 3.0, m);
    const Tridiagonal combo = band_combine(3.0, pair.x, 1.0, pair.y);
    for (int n = 0; n < m; ++n) {
        CHECK(std::fabs(j3.diag[n] - combo.diag[n]) <= 1e-11);
        CHECK(std::fabs(j3.sub[n] - combo.sub[n]) <= 1e-11);
        CHECK(std::fabs(j3.sup[n] - combo.sup[n]) <= 1e-11);
    }
    // xy - q yx = I away from the truncation boundary.
    const auto xy = matmul(dense(pair.x), dense(pair.y));
    const auto yx = matmul(dense(pair.y), dense(pair.x));
    for (int i = 0; i <= m - 3; ++i) {
        for (int j = 0; j <= m - 3; ++j) {
            const double want = (i == j) ? 1.0 : 0.0;
            CHECK(std::fabs(xy[i][j] - q * yx[i][j] - want) <= 1e-11);
        }
    }
}

TEST_CASE("ansatz: representation identities with all rates active") {
    const AsepParams p{1.2, 1.1, 0.4, 0.3, 0.6};
    const AwParams w = derive_aw(p);
    const int m = 12;
    const MatrixAnsatz a = matrix_ansatz(w, m);
    CHECK(a.q == doctest::Approx(p.q));
    const auto e = dense(a.e);
    const auto d = dense(a.d);
    const auto de = matmul(d, e);
    const auto ed = matmul(e, d);
    for (int i = 0; i <= m - 3; ++i) {
        for (int j = 0; j <= m - 3; ++j) {
            CHECK(std::fabs(de[i][j] - p.q * ed[i][j] - (d[i][j] + e[i][j])) <=
                  1e-11);
        }
    }
    // <W| (alpha E - gamma D) = <W| as the first row; the mirrored identity
    // (beta D - delta E) |V> = |V> as the first column.
    CHECK(std::fabs(p.alpha * e[0][0] - p.gamma * d[0][0] - 1.0) <= 1e-11);
    CHECK(std::fabs(p.alpha * e[0][1] - p.gamma * d[0][1]) <= 1e-11);
    CHECK(std::fabs(p.beta * d[0][0] - p.delta * e[0][0] - 1.0) <= 1e-11);
    CHECK(std::fabs(p.beta * d[1][0] - p.delta * e[1][0]) <= 1e-11);
}

TEST_CASE("ansatz: profiles at the symmetric point") {
    const std::vector<double> p2 = profile_exact(kSym, 2);
    REQUIRE(p2.size() == 2);
    CHECK(p2[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(p2[1] == doctest::Approx(0.4).epsilon(1e-12));
    const std::vector<double> p3 = profile_exact(kSym, 3);
    REQUIRE(p3.size() == 3);
    CHECK(p3[0] == doctest::Approx(9.0 / 14.0).epsilon(1e-12));
    CHECK(p3[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p3[2] == doctest::Approx(5.0 / 14.0).epsilon(1e-12));
}

TEST_CASE("ansatz: partitions count Catalan paths") {
    for (int n = 1; n <= 10; ++n) {
        CHECK(testutil::rel_gap(partition(kSym, n), catalan(n + 1)) <= 1e-12);
    }
    CHECK(log_partition(kSym, 10) ==
          doctest::Approx(std::log(58786.0)).epsilon(1e-12));
    const double cats[] = {1.0, 1.0, 2.0, 5.0, 14.0, 42.0};
    for (int n = 0; n <= 5; ++n) CHECK(catalan(n) == cats[n]);
    CHECK(catalan_diff(3, 1) == doctest::Approx(1.0 / 7.0).epsilon(1e-14));
    CHECK_THROWS_AS(catalan(-1), IndexOutOfRange);
    CHECK_THROWS_AS(catalan_diff(2, 0), IndexOutOfRange);
    CHECK_THROWS_AS(catalan_diff(2, 2), IndexOutOfRange);
}

TEST_CASE("ansatz: truncation at N+2 is already exact") {
    const AsepParams p{0.6, 0.9, 0.3, 0.2, 0.3};
    const AwParams w = derive_aw(p);
    const std::vector<double> t = {0.7, 1.3, 0.2, 1.0};
    const double exact = joint_gf_exact(p, t);
    CHECK(testutil::rel_gap(exact, manual_gf(w, t, 6)) <= 1e-13);
    CHECK(testutil::rel_gap(exact, manual_gf(w, t, 16)) <= 1e-13);
    CHECK(joint_gf_exact(p, {}) == doctest::Approx(1.0));
}

TEST_CASE("ansatz: oracle agreement spot check") {
    const AsepParams p{1.2, 1.1, 0.4, 0.3, 0.6};
    const StationaryTable table = stationary(build_generator(p, 3));
    const std::vector<double> t = {0.5, 1.5, 0.8};
    CHECK(testutil::rel_gap(joint_gf_exact(p, t), joint_gf(table, t)) <= 1e-10);
}

TEST_CASE("ansatz: particle-hole symmetry of profiles") {
    const int n = 5;
    const std::vector<double> fwd =
        profile_exact(AsepParams{0.7, 0.9, 0.0, 0.0, 0.0}, n);
    const std::vector<double> rev =
        profile_exact(AsepParams{0.9, 0.7, 0.0, 0.0, 0.0}, n);
    for (int j = 0; j < n; ++j) {
        CHECK(std::fabs(fwd[j] - (1.0 - rev[n - 1 - j])) <= 1e-10);
    }
}

TEST_CASE("ansatz: count polynomial matches the oracle law") {
    const AsepParams p{0.8, 0.7, 0.1, 0.1, 0.0};
    const int n = 6;
    const CountGf cg = count_gf_poly(p, n);
    const std::vector<double> probs = cg.probabilities();
    REQUIRE(static_cast<int>(probs.size()) == n + 1);
    double sum = 0.0;
    for (double v : probs) sum += v;
    CHECK(std::fabs(sum - 1.0) <= 1e-12);
    const std::vector<double> law =
        count_distribution(stationary(build_generator(p, n)));
    for (int k = 0; k <= n; ++k) CHECK(std::fabs(probs[k] - law[k]) <= 1e-10);
    CHECK(testutil::rel_gap(std::exp(cg.log_sum()), partition(p, n)) <= 1e-12);
    CHECK(cg.coefficient(0) ==
          doctest::Approx(cg.scaled[0] * std::exp(cg.logscale)));
    CHECK_THROWS_AS(cg.coefficient(n + 1), IndexOutOfRange);
    CHECK_THROWS_AS(cg.coefficient(-1), IndexOutOfRange);
}

TEST_CASE("ansatz: partition routes agree") {
    for (const AsepParams& p :
         {kSym, AsepParams{0.6, 0.9, 0.3, 0.2, 0.3}}) {
        CHECK(testutil::rel_gap(partition(p, 8), partition_via_moments(p, 8)) <=
              1e-8);
    }
    CHECK(testutil::rel_gap(partition_via_semicircle(kSym, 10), catalan(11)) <=
          1e-10);
    const AsepParams mixed{0.8, 0.7, 0.1, 0.1, 0.0};
    CHECK(testutil::rel_gap(partition_via_semicircle(mixed, 9),
                            partition(mixed, 9)) <= 1e-9);
    CHECK_THROWS_AS(partition_via_semicircle(AsepParams{1.0, 1.0, 0.0, 0.0, 0.3}, 4),
                    DomainError);
    CHECK_THROWS_AS(partition_via_semicircle(AsepParams{0.4, 1.0, 0.0, 0.0, 0.0}, 4),
                    DomainError);
}

TEST_CASE("ansatz: factorized profile differences") {
    CHECK(std::fabs(schutz_factors(1.0, 1.0, 3, 1).difference -
                    catalan_diff(3, 1)) <= 1e-10);
    const double alpha = 0.8, beta = 0.6;
    const std::vector<double> prof =
        profile_exact(AsepParams{alpha, beta, 0.0, 0.0, 0.0}, 5);
    for (int j = 1; j <= 4; ++j) {
        const double diff = prof[j - 1] - prof[j];
        CHECK(std::fabs(schutz_factors(alpha, beta, 5, j).difference - diff) <=
              1e-8);
    }
    CHECK_THROWS_AS(schutz_factors(0.5, 1.0, 5, 2), ParameterOutOfRange);
    CHECK_THROWS_AS(schutz_factors(1.0, 1.0, 5, 0), IndexOutOfRange);
    CHECK_THROWS_AS(schutz_factors(1.0, 1.0, 5, 5), IndexOutOfRange);
}

TEST_CASE("ansatz: semicircle integral normalization") {
    const double two_pi = 2.0 * 3.14159265358979323846;
    CHECK(testutil::rel_gap(semicircle_integral([](double) { return 1.0; }),
                            two_pi) <= 1e-12);
    CHECK(testutil::rel_gap(semicircle_integral([](double z) { return z * z; }),
                            two_pi) <= 1e-12);
}

TEST_CASE("ansatz: boundary occupancies anchor partition ratios") {
    const AsepParams p{0.9, 0.8, 0.0, 0.0, 0.3};
    const int n = 5;
    const std::vector<double> prof = profile_exact(p, n);
    const double ratio = partition(p, n - 1) / partition(p, n);
    CHECK(testutil::rel_gap(prof[n - 1], ratio / p.beta) <= 1e-10);
    CHECK(testutil::rel_gap(prof[0], 1.0 - ratio / p.alpha) <= 1e-10);
}

TEST_CASE("ansatz: size limits") {
    CHECK_THROWS_AS(joint_gf_exact(kSym, std::vector<double>(401, 1.0)),
                    SizeLimitExceeded);
    CHECK_THROWS_AS(partition(kSym, 401), SizeLimitExceeded);
    CHECK_NOTHROW(log_partition(kSym, 400));
}
