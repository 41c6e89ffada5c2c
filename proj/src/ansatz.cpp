#include "asepqh/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "asepqh/awdist.hpp"
#include "asepqh/errors.hpp"
#include "asepqh/quadrature.hpp"

namespace asepqh {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxSites = 400;

using cplx = std::complex<double>;

void check_factor(const cplx& f, const char* name) {
    if (std::abs(f) < 1e-14) {
        std::ostringstream oss;
        oss << "recurrence denominator factor " << name << " vanished";
        throw DegenerateDenominator(oss.str());
    }
}

std::array<cplx, 3> coeffs_impl(int n, cplx a, cplx b, cplx c, cplx d,
                                double q) {
    if (n < 0) throw IndexOutOfRange("recurrence index must be >= 0");
    const cplx abcd = a * b * c * d;
    if (n == 0) {
        const cplx den = 1.0 - abcd;
        check_factor(den, "1-abcd");
        const cplx abar = (1.0 - a * b) / den;
        const cplx b0 =
            a + ((b + c + d) - b * c * d - a * (b * c + b * d + c * d) +
                 a * a * b * c * d) /
                    den;
        return {abar, b0, cplx(0.0, 0.0)};
    }
    const double qn1 = std::pow(q, n - 1);
    const double qn = qn1 * q;
    const cplx e1a = 1.0 - abcd * qn1 * qn1; // 1 - abcd q^{2n-2}
    const cplx e1b = 1.0 - abcd * qn1 * qn;  // 1 - abcd q^{2n-1}
    const cplx e2b = 1.0 - abcd * qn * qn;   // 1 - abcd q^{2n}
    check_factor(e1a, "1-abcd q^{2n-2}");
    check_factor(e1b, "1-abcd q^{2n-1}");
    check_factor(e2b, "1-abcd q^{2n}");
    const cplx e1 = e1a * e1b;
    const cplx e2 = e1b * e2b;

    const cplx abar = (1.0 - abcd * qn1) * (1.0 - a * b * qn) / e2;

    // b_n = a + (e2 - P)/(a e2) - a R/e1 with the leading division by a
    // carried out symbolically: (e2 - P)/a is the displayed polynomial.
    const cplx x0 = b * c * d * qn1;
    const cplx x1 = b * qn;
    const cplx x2 = c * qn;
    const cplx x3 = d * qn;
    const cplx s1 = x0 + x1 + x2 + x3;
    const cplx s2 = x0 * x1 + x0 * x2 + x0 * x3 + x1 * x2 + x1 * x3 + x2 * x3;
    const cplx s3 = x0 * x1 * x2 + x0 * x1 * x3 + x0 * x2 * x3 + x1 * x2 * x3;
    const cplx s4 = x0 * x1 * x2 * x3;
    const cplx y1 = b * c * d * qn1 * qn;
    const cplx y2 = y1 * q;
    const cplx poly = (s1 - (y1 + y2)) + a * (y1 * y2 - s2) + a * a * s3 -
                      a * a * a * s4;
    const cplx big_r = (1.0 - qn) * (1.0 - b * c * qn1) * (1.0 - b * d * qn1) *
                       (1.0 - c * d * qn1);
    const cplx bn = a + poly / e2 - a * big_r / e1;

    const cplx cbar = (1.0 - qn) * (1.0 - a * c * qn1) * (1.0 - a * d * qn1) *
                      (1.0 - b * c * qn1) * (1.0 - b * d * qn1) *
                      (1.0 - c * d * qn1) / e1;
    return {abar, bn, cbar};
}

} // namespace

RecurrenceCoeffs aw_recurrence_coeffs(int n, double a, double b, double c,
                                      double d, double q) {
    const auto v = coeffs_impl(n, a, b, c, d, q);
    return {v[0].real(), v[1].real(), v[2].real()};
}

std::array<cplx, 3> aw_recurrence_coeffs(int n, const std::array<cplx, 4>& p,
                                         double q) {
    return coeffs_impl(n, p[0], p[1], p[2], p[3], q);
}

double Tridiagonal::entry(int i, int j) const {
    const int m = dim();
    if (i < 0 || j < 0 || i >= m || j >= m)
        throw IndexOutOfRange("tridiagonal entry index out of range");
    if (i == j + 1) return sub[j];
    if (i == j) return diag[j];
    if (i + 1 == j) return sup[j];
    return 0.0;
}

void Tridiagonal::row_apply(const std::vector<double>& w,
                            std::vector<double>& out) const {
    const int m = dim();
    out.assign(m, 0.0);
    for (int j = 0; j < m; ++j) {
        double s = w[j] * diag[j];
        if (j + 1 < m) s += w[j + 1] * sub[j];
        if (j > 0) s += w[j - 1] * sup[j];
        out[j] = s;
    }
}

void Tridiagonal::col_apply(const std::vector<double>& v,
                            std::vector<double>& out) const {
    const int m = dim();
    out.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        double s = v[i] * diag[i];
        if (i > 0) s += v[i - 1] * sub[i - 1];
        if (i + 1 < m) s += v[i + 1] * sup[i + 1];
        out[i] = s;
    }
}

Tridiagonal band_combine(double a, const Tridiagonal& x, double b,
                         const Tridiagonal& y) {
    const int m = x.dim();
    if (m != y.dim()) throw LengthMismatch("band sizes differ");
    Tridiagonal out;
    out.sub.resize(m);
    out.diag.resize(m);
    out.sup.resize(m);
    for (int i = 0; i < m; ++i) {
        out.sub[i] = a * x.sub[i] + b * y.sub[i];
        out.diag[i] = a * x.diag[i] + b * y.diag[i];
        out.sup[i] = a * x.sup[i] + b * y.sup[i];
    }
    return out;
}

Tridiagonal jacobi_matrix(const AwParams& w, double t, int m) {
    if (m < 2) throw IndexOutOfRange("jacobi matrix needs size >= 2");
    const double rt = std::sqrt(t);
    const double s1q = std::sqrt(1.0 - w.q);
    Tridiagonal out;
    out.sub.assign(m, 0.0);
    out.diag.assign(m, 0.0);
    out.sup.assign(m, 0.0);
    for (int n = 0; n < m; ++n) {
        const RecurrenceCoeffs rc = aw_recurrence_coeffs(
            n, w.a * rt, w.b * rt, w.c / rt, w.d / rt, w.q);
        if (n + 1 < m) out.sub[n] = rc.abar / s1q;
        out.diag[n] = rc.b * rt / s1q;
        out.sup[n] = rc.cbar * t / s1q;
    }
    return out;
}

TridiagonalPair jacobi_pair(const AwParams& w, int m) {
    const Tridiagonal j1 = jacobi_matrix(w, 1.0, m);
    const Tridiagonal j2 = jacobi_matrix(w, 2.0, m);
    const Tridiagonal j3 = jacobi_matrix(w, 3.0, m);
    TridiagonalPair p;
    p.x = band_combine(1.0, j2, -1.0, j1);
    p.y = band_combine(2.0, j1, -1.0, j2);
    const Tridiagonal probe = band_combine(3.0, p.x, 1.0, p.y);
    for (int i = 0; i < m; ++i) {
        const double r =
            std::max({std::abs(probe.sub[i] - j3.sub[i]),
                      std::abs(probe.diag[i] - j3.diag[i]),
                      std::abs(probe.sup[i] - j3.sup[i])});
        const double scale = std::max(
            1.0, std::max({std::abs(j3.sub[i]), std::abs(j3.diag[i]),
                           std::abs(j3.sup[i])}));
        if (r > 1e-10 * scale) {
            throw LinearityViolation(
                "jacobi bands are not affine in t; third-point check failed");
        }
    }
    return p;
}

MatrixAnsatz matrix_ansatz(const AwParams& w, int m) {
    const TridiagonalPair p = jacobi_pair(w, m);
    const double s1q = std::sqrt(1.0 - w.q);
    const double r = 1.0 / (1.0 - w.q);
    MatrixAnsatz a;
    a.q = w.q;
    a.e = band_combine(1.0 / s1q, p.y, 0.0, p.y);
    a.d = band_combine(1.0 / s1q, p.x, 0.0, p.x);
    for (int i = 0; i < m; ++i) {
        a.e.diag[i] += r;
        a.d.diag[i] += r;
    }
    return a;
}

namespace {

// Row vector held with a running log scale so products of many factors stay
// in range.
struct ScaledRow {
    std::vector<double> v;
    double logscale = 0.0;

    void rescale() {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        if (m > 0.0 && (m > 1e100 || m < 1e-100)) {
            for (double& x : v) x /= m;
            logscale += std::log(m);
        }
    }
};

// One factor w <- w (E + t D).
void apply_factor(const MatrixAnsatz& a, double t, ScaledRow& w,
                  std::vector<double>& scratch) {
    const int m = a.e.dim();
    scratch.assign(m, 0.0);
    for (int j = 0; j < m; ++j) {
        double s = w.v[j] * (a.e.diag[j] + t * a.d.diag[j]);
        if (j + 1 < m) s += w.v[j + 1] * (a.e.sub[j] + t * a.d.sub[j]);
        if (j > 0) s += w.v[j - 1] * (a.e.sup[j] + t * a.d.sup[j]);
        scratch[j] = s;
    }
    w.v.swap(scratch);
    w.rescale();
}

void check_sites(int n) {
    if (n < 0 || n > kMaxSites) {
        std::ostringstream oss;
        oss << "site count " << n << " outside supported range [0, "
            << kMaxSites << "]";
        throw SizeLimitExceeded(oss.str());
    }
}

} // namespace

double joint_gf_exact(const AwParams& w, const std::vector<double>& t) {
    const int n = static_cast<int>(t.size());
    check_sites(n);
    if (n == 0) return 1.0;
    const MatrixAnsatz a = matrix_ansatz(w, n + 2);
    std::vector<double> scratch;
    ScaledRow num;
    num.v.assign(n + 2, 0.0);
    num.v[0] = 1.0;
    ScaledRow den = num;
    for (int j = 0; j < n; ++j) {
        apply_factor(a, t[j], num, scratch);
        apply_factor(a, 1.0, den, scratch);
    }
    return num.v[0] / den.v[0] * std::exp(num.logscale - den.logscale);
}

double joint_gf_exact(const AsepParams& asep, const std::vector<double>& t) {
    return joint_gf_exact(derive_aw(asep), t);
}

double log_partition(const AsepParams& asep, int n) {
    check_sites(n);
    if (n == 0) return 0.0;
    const AwParams w = derive_aw(asep);
    const MatrixAnsatz a = matrix_ansatz(w, n + 2);
    std::vector<double> scratch;
    ScaledRow row;
    row.v.assign(n + 2, 0.0);
    row.v[0] = 1.0;
    for (int j = 0; j < n; ++j) apply_factor(a, 1.0, row, scratch);
    return std::log(row.v[0]) + row.logscale;
}

double partition(const AsepParams& asep, int n) {
    return std::exp(log_partition(asep, n));
}

std::vector<double> profile_exact(const AsepParams& asep, int n) {
    check_sites(n);
    if (n == 0) return {};
    const AwParams w = derive_aw(asep);
    const int m = n + 2;
    const MatrixAnsatz a = matrix_ansatz(w, m);
    const Tridiagonal ed = band_combine(1.0, a.e, 1.0, a.d);

    // prefix[j] = W (E+D)^j as a scaled row, suffix[j] = (E+D)^j V as a
    // scaled column.
    std::vector<std::vector<double>> pre(n), suf(n);
    std::vector<double> pre_ls(n, 0.0), suf_ls(n, 0.0);
    ScaledRow row;
    row.v.assign(m, 0.0);
    row.v[0] = 1.0;
    std::vector<double> scratch;
    for (int j = 0; j < n; ++j) {
        pre[j] = row.v;
        pre_ls[j] = row.logscale;
        ed.row_apply(row.v, scratch);
        row.v.swap(scratch);
        row.rescale();
    }
    const double log_k = std::log(row.v[0]) + row.logscale;

    ScaledRow col;
    col.v.assign(m, 0.0);
    col.v[0] = 1.0;
    for (int j = 0; j < n; ++j) {
        suf[j] = col.v;
        suf_ls[j] = col.logscale;
        ed.col_apply(col.v, scratch);
        col.v.swap(scratch);
        col.rescale();
    }

    std::vector<double> out(n);
    std::vector<double> dv;
    for (int j = 1; j <= n; ++j) {
        // <tau_j> = W (E+D)^{j-1} D (E+D)^{N-j} V / K_N
        const std::vector<double>& p = pre[j - 1];
        const std::vector<double>& s = suf[n - j];
        a.d.col_apply(s, dv);
        double dot = 0.0;
        for (int i = 0; i < m; ++i) dot += p[i] * dv[i];
        out[j - 1] =
            dot * std::exp(pre_ls[j - 1] + suf_ls[n - j] - log_k);
    }
    return out;
}

std::vector<double> CountGf::probabilities() const {
    double s = 0.0;
    for (double c : scaled) s += c;
    std::vector<double> out(scaled.size());
    for (size_t k = 0; k < scaled.size(); ++k) out[k] = scaled[k] / s;
    return out;
}

double CountGf::coefficient(int k) const {
    if (k < 0 || k >= static_cast<int>(scaled.size()))
        throw IndexOutOfRange("count coefficient index out of range");
    return scaled[k] * std::exp(logscale);
}

double CountGf::log_sum() const {
    double s = 0.0;
    for (double c : scaled) s += c;
    return std::log(s) + logscale;
}

CountGf count_gf_poly(const AsepParams& asep, int n) {
    check_sites(n);
    const AwParams w = derive_aw(asep);
    if (n == 0) return {{1.0}, 0.0};
    const int m = n + 2;
    const MatrixAnsatz a = matrix_ansatz(w, m);

    // State entry j holds the polynomial coefficient vector of the row
    // component j; the factor (E + tD) is linear in t, so each step raises
    // every degree by at most one.
    std::vector<std::vector<double>> cur(m), nxt(m);
    cur[0] = {1.0};
    double logscale = 0.0;
    const bool parallel = default_exec_mode() == ExecMode::Parallel;
    for (int step = 0; step < n; ++step) {
        const int active = std::min(step + 2, m);
#pragma omp parallel for schedule(static) if (parallel && active > 8)
        for (int j = 0; j < active; ++j) {
            std::vector<double> acc(step + 2, 0.0);
            auto add = [&](const std::vector<double>& src, double ecoef,
                           double dcoef) {
                for (size_t k = 0; k < src.size(); ++k) {
                    acc[k] += ecoef * src[k];
                    acc[k + 1] += dcoef * src[k];
                }
            };
            add(cur[j], a.e.diag[j], a.d.diag[j]);
            if (j + 1 < m && !cur[j + 1].empty())
                add(cur[j + 1], a.e.sub[j], a.d.sub[j]);
            if (j > 0 && !cur[j - 1].empty())
                add(cur[j - 1], a.e.sup[j], a.d.sup[j]);
            nxt[j] = std::move(acc);
        }
        for (int j = active; j < m; ++j) nxt[j].clear();
        cur.swap(nxt);

        double big = 0.0;
        for (const auto& p : cur)
            for (double c : p) big = std::max(big, std::abs(c));
        if (big > 1e100 || (big > 0.0 && big < 1e-100)) {
            for (auto& p : cur)
                for (double& c : p) c /= big;
            logscale += std::log(big);
        }
    }
    CountGf out;
    out.scaled = cur[0];
    out.scaled.resize(n + 1, 0.0);
    out.logscale = logscale;
    return out;
}

double catalan(int n) {
    if (n < 0) throw IndexOutOfRange("catalan index must be >= 0");
    double c = 1.0;
    for (int k = 0; k < n; ++k) c = c * 2.0 * (2.0 * k + 1.0) / (k + 2.0);
    return c;
}

double catalan_diff(int n, int j) {
    if (n < 2 || j < 1 || j > n - 1)
        throw IndexOutOfRange("catalan_diff requires 1 <= j <= N-1");
    return catalan(j) * catalan(n - j) / catalan(n + 1);
}

double semicircle_integral(const std::function<double(double)>& f,
                           double tol) {
    // z = 2 cos(theta): sqrt(4-z^2) dz -> 4 sin^2(theta) d(theta) on (0, pi).
    double prev = 0.0;
    for (int n = 200; n <= 25600; n *= 2) {
        const GLRule rule = gauss_legendre(n, 0.0, kPi);
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double sn = std::sin(rule.x[i]);
            s += rule.w[i] * 4.0 * sn * sn * f(2.0 * std::cos(rule.x[i]));
        }
        if (n > 200 && std::abs(s - prev) <= tol * std::max(1.0, std::abs(s)))
            return s;
        prev = s;
    }
    throw QuadratureFailure("semicircle integral did not stabilize");
}

double partition_via_moments(const AsepParams& asep, int n) {
    check_sites(n);
    const AwParams w = derive_aw(asep);
    QuadSpec spec;
    spec.n0 = 800;
    spec.max_n = 102400;
    spec.tol = 1e-13;
    const MixedMeasure m = marginal_z(w, 1.0, spec);
    const double val =
        m.expect([&](double z) { return std::pow(2.0 + z, n); });
    return val / std::pow(1.0 - asep.q, n);
}

double partition_via_semicircle(const AsepParams& asep, int n) {
    check_sites(n);
    if (asep.q != 0.0)
        throw DomainError("semicircle partition requires q = 0");
    const AwParams w = derive_aw(asep);
    const double p[4] = {w.a, w.b, w.c, w.d};
    for (double v : p)
        if (!(std::abs(v) < 1.0))
            throw DomainError(
                "semicircle partition requires |A|,|B|,|C|,|D| < 1");
    double con = 1.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) con *= 1.0 - p[i] * p[j];
    con /= 2.0 * kPi * (1.0 - w.a * w.b * w.c * w.d);
    const double integral = semicircle_integral([&](double x) {
        double den = 1.0;
        for (double v : p) den *= 1.0 + v * v - v * x;
        return std::pow(2.0 + x, n) / den;
    });
    return con * integral;
}

SchutzFactors schutz_factors(double alpha, double beta, int n, int j) {
    if (!(alpha > 0.5) || !(beta > 0.5))
        throw ParameterOutOfRange(
            "factorized profile requires alpha > 1/2 and beta > 1/2 (the "
            "pure-integral form is invalid once atoms appear)");
    if (n < 2 || j < 1 || j > n - 1)
        throw IndexOutOfRange("factorized profile requires 1 <= j <= N-1");
    const double abar = (1.0 - beta) / beta;
    const double cbar = (1.0 - alpha) / alpha;
    auto kernel = [](double p, double z) { return 1.0 + p * p - p * z; };
    auto f_factor = [&](int m2, double p) {
        return semicircle_integral([&](double z) {
            return std::pow(2.0 + z, m2 - 1) / kernel(p, z);
        });
    };
    SchutzFactors out{};
    out.f_left = f_factor(j, cbar);
    out.f_right = f_factor(n - j, abar);
    out.khat = semicircle_integral([&](double z) {
        return std::pow(2.0 + z, n) / (kernel(abar, z) * kernel(cbar, z));
    });
    out.difference = out.f_left * out.f_right / (2.0 * kPi * out.khat);
    return out;
}

} // namespace asepqh
