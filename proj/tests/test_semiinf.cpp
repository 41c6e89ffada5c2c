#include <cmath>
#include <vector>

#include "asepqh/ansatz.hpp"
#include "asepqh/awdist.hpp"
#include "asepqh/errors.hpp"
#include "asepqh/params.hpp"
#include "asepqh/semiinf.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace asepqh;

namespace {

const AsepParams kSym{1.0, 1.0, 0.0, 0.0, 0.0};
const AsepParams kLow{0.4, 1.0, 0.0, 0.0, 0.0};  // C = 1.5
const AsepParams kHigh{1.0, 0.4, 0.0, 0.0, 0.0}; // A = 1.5

} // namespace

TEST_CASE("semiinf: tilde parameters by regime") {
    const AwParams sym = derive_aw(kSym);
    TildeParams tp = tilde_params(sym, 1.0);
    CHECK(tp.aw.a == doctest::Approx(1.0));
    CHECK(tp.aw.b == doctest::Approx(1.0));
    CHECK_FALSE(tp.deterministic);
    tp = tilde_params(sym, 4.0);
    CHECK(tp.aw.a == doctest::Approx(0.5));
    CHECK(tp.aw.b == doctest::Approx(0.5));

    const AwParams low = derive_aw(kLow);
    tp = tilde_params(low, 1.0);
    CHECK(tp.deterministic);
    CHECK(tp.aw.a == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(tp.aw.b == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    tp = tilde_params(low, 2.0); // still below C^2 = 2.25
    CHECK(tp.deterministic);
    CHECK(tp.aw.a == doctest::Approx(0.75).epsilon(1e-14));
    tp = tilde_params(low, 3.0); // above C^2, A = 0: square-root regime
    CHECK_FALSE(tp.deterministic);
    CHECK(tp.aw.a == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));

    const AwParams high = derive_aw(kHigh);
    tp = tilde_params(high, 2.0);
    CHECK_FALSE(tp.deterministic);
    CHECK(tp.aw.a == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(tp.aw.b == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    // A~ B~ = 1/u and (C~, D~) = (C, D) in every regime.
    const AwParams gen = derive_aw(AsepParams{0.6, 0.9, 0.3, 0.2, 0.3});
    for (double u : {1.0, 2.5, 40.0}) {
        for (const AwParams& w : {sym, low, high, gen}) {
            const TildeParams t = tilde_params(w, u);
            CHECK(t.aw.a * t.aw.b == doctest::Approx(1.0 / u).epsilon(1e-13));
            CHECK(t.aw.c == w.c);
            CHECK(t.aw.d == w.d);
            CHECK(t.aw.q == w.q);
        }
    }
}

TEST_CASE("semiinf: weights below one are rejected") {
    const AwParams sym = derive_aw(kSym);
    CHECK_THROWS_AS(tilde_params(sym, 0.5), DomainError);
    CHECK_THROWS_AS(zeta(sym, 0.99), DomainError);
    CHECK_THROWS_AS(mu_gf(sym, 0.5, {0.5}), DomainError);
}

TEST_CASE("semiinf: zeta closed forms and envelope identity") {
    const AwParams sym = derive_aw(kSym);
    CHECK(zeta(sym, 1.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(zeta(sym, 4.0) == doctest::Approx(2.25).epsilon(1e-14));
    const AwParams low = derive_aw(kLow);
    CHECK(zeta(low, 1.0) == doctest::Approx(25.0 / 6.0).epsilon(1e-14));
    const AwParams high = derive_aw(kHigh);
    CHECK(zeta(high, 2.0) == doctest::Approx(2.5 * 4.0 / 3.0).epsilon(1e-14));
    for (const AwParams& w : {sym, low, high}) {
        for (double u : {1.0, 2.0, 10.0}) {
            const double env = support_envelope(w, u).hi;
            CHECK(zeta(w, u) ==
                  doctest::Approx((1.0 + u + env) / u).epsilon(1e-13));
        }
    }
}

TEST_CASE("semiinf: stationary current") {
    CHECK(current(derive_aw(kSym)) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(current(derive_aw(kLow)) == doctest::Approx(0.24).epsilon(1e-14));
    CHECK(current(derive_aw(kHigh)) == doctest::Approx(0.24).epsilon(1e-14));
    // q > 0 with A = C = 0: J = (1-q)/4.
    CHECK(current(derive_aw(AsepParams{1.0, 1.0, 0.0, 0.0, 0.5})) ==
          doctest::Approx(0.125).epsilon(1e-14));
    CHECK(bernoulli_site_density(derive_aw(kLow)) ==
          doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("semiinf: deterministic regime has a product generating function") {
    const AwParams low = derive_aw(kLow);
    const std::vector<double> t = {0.3, 0.8, 1.0};
    double prod = 1.0;
    for (double v : t) prod *= (1.5 + v) / 2.5;
    CHECK(mu_gf(low, 1.0, t) == doctest::Approx(prod).epsilon(1e-14));

    // The tridiagonal route with tilde parameters reproduces the product.
    for (double u : {1.0, 1.5}) {
        const TildeParams tp = tilde_params(low, u);
        REQUIRE(tp.deterministic);
        const std::vector<double> ts = {0.5, 1.0, u};
        CHECK(testutil::rel_gap(mu_gf(low, u, ts),
                                joint_gf_exact(tp.aw, ts)) <= 1e-12);
    }
}

TEST_CASE("semiinf: appending a unit time preserves the law") {
    const AwParams w = derive_aw(AsepParams{1.2, 1.1, 0.4, 0.3, 0.6});
    std::vector<double> t = {0.4, 0.9};
    const double base = mu_gf(w, 1.0, t);
    t.push_back(1.0);
    CHECK(std::fabs(mu_gf(w, 1.0, t) - base) <= 1e-10);
    CHECK(mu_gf(w, 1.0, {}) == 1.0);
}

TEST_CASE("semiinf: time validation") {
    const AwParams w = derive_aw(kSym);
    CHECK_THROWS_AS(mu_gf(w, 1.0, {0.5, 0.3}), NonMonotoneTimes);
    CHECK_THROWS_AS(mu_gf(w, 1.0, {0.5, 1.2}), NonMonotoneTimes);
    CHECK_THROWS_AS(mu_gf(w, 1.0, {0.0, 0.5}), NonMonotoneTimes);
    CHECK_THROWS_AS(mu_gf(w, 1.0, {-0.5}), NonMonotoneTimes);
}

TEST_CASE("semiinf: effective right boundary") {
    // delta = 0 keeps beta until it saturates at 1 - q.
    AsepParams p{1.0, 0.3, 0.0, 0.0, 0.0};
    CHECK(effective_beta(p).beta == doctest::Approx(0.3).epsilon(1e-14));
    p.beta = 1.4;
    CHECK(effective_beta(p).beta == doctest::Approx(1.0).epsilon(1e-14));
    p.q = 0.3;
    p.beta = 0.5;
    CHECK(effective_beta(p).beta == doctest::Approx(0.5).epsilon(1e-14));
    p.beta = 0.9;
    CHECK(effective_beta(p).beta == doctest::Approx(0.7).epsilon(1e-14));

    // With delta > 0 the replacement keeps A and kills B.
    const AsepParams full{0.9, 0.6, 0.2, 0.3, 0.3};
    const AsepParams eff = effective_beta(full);
    CHECK(eff.delta == 0.0);
    CHECK(eff.alpha == full.alpha);
    CHECK(eff.gamma == full.gamma);
    CHECK(eff.q == full.q);
    const AwParams before = derive_aw(full);
    const AwParams after = derive_aw(eff);
    CHECK(testutil::rel_gap(after.a, before.a) <= 1e-12);
    CHECK(std::fabs(after.b) <= 1e-12);
    CHECK(after.c == before.c);
    CHECK(after.d == before.d);
}

TEST_CASE("semiinf: large weights converge to the replaced chain") {
    const AsepParams p{0.6, 0.9, 0.3, 0.2, 0.3};
    const AwParams w = derive_aw(p);
    const AwParams wlim{w.a, 0.0, w.c, w.d, w.q};
    const std::vector<double> t = {0.5, 1.0};
    const double lim = joint_gf_exact(wlim, t);
    double prev = 1e300;
    for (double u : {10.0, 100.0, 1000.0}) {
        const double gap = std::fabs(mu_gf(w, u, t) - lim);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev <= 1e-2);
}

TEST_CASE("semiinf: ratio limit extracts the top of the support") {
    const MixedMeasure atom = marginal_z(derive_aw(kLow), 1.0).affine(1.0, 2.0);
    CHECK(ratio_limit_check(atom, {1.0}, 37) == doctest::Approx(1.0));
    // The continuous part tops out at 4 while the atom sits at 25/6, so the
    // ratio converges like (24/25)^n.
    const double top = 2.0 + 1.5 + 1.0 / 1.5;
    const double at60 = std::fabs(ratio_limit_check(atom, {0.0, 1.0}, 60) - top);
    const double at300 =
        std::fabs(ratio_limit_check(atom, {0.0, 1.0}, 300) - top);
    CHECK(at60 <= 1e-2);
    CHECK(at300 < at60);
    CHECK(at300 <= 1e-6);

    const MixedMeasure edge = marginal_z(derive_aw(kSym), 1.0).affine(1.0, 2.0);
    const double r100 = ratio_limit_check(edge, {0.0, 1.0}, 100);
    const double r400 = ratio_limit_check(edge, {0.0, 1.0}, 400);
    CHECK(std::fabs(r400 - 4.0) <= 0.05);
    CHECK(std::fabs(r400 - 4.0) < std::fabs(r100 - 4.0));

    CHECK_THROWS_AS(ratio_limit_check(marginal_z(derive_aw(kSym), 1.0),
                                      {0.0, 1.0}, 10),
                    DomainError);
}

TEST_CASE("semiinf: tilde marginal variance") {
    const AwParams low = derive_aw(kLow);
    CHECK(tilde_marginal_variance(low, 1.0, 1.0) == 0.0);
    // At u = t = 1 the marginal degenerates for every admissible parameter set.
    const AwParams sym5 = derive_aw(AsepParams{1.0, 1.0, 0.0, 0.0, 0.5});
    CHECK(std::fabs(tilde_marginal_variance(sym5, 1.0, 1.0)) <= 1e-8);

    // Away from degeneracy the band moments match quadrature moments.
    const AwParams sym = derive_aw(kSym);
    const double band = tilde_marginal_variance(sym, 4.0, 2.0);
    CHECK(band > 0.0);
    const TildeParams tp = tilde_params(sym, 4.0);
    const MixedMeasure m = marginal_z(tp.aw, 2.0);
    const double quad = m.moment(2) - m.moment(1) * m.moment(1);
    CHECK(testutil::rel_gap(band, quad) <= 1e-8);
}
