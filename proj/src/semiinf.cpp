#include "asepqh/semiinf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "asepqh/ansatz.hpp"
#include "asepqh/errors.hpp"
#include "asepqh/qfun.hpp"

namespace asepqh {

namespace {

void require_weight(double u) {
    if (!(u >= 1.0)) {
        throw DomainError("weight u = " + std::to_string(u) + " must be >= 1");
    }
}

void require_times(const std::vector<double>& t, double u) {
    double prev = 0.0;
    for (double v : t) {
        if (!(v > 0.0 && v <= u)) {
            throw NonMonotoneTimes("time " + std::to_string(v) +
                                   " outside (0, " + std::to_string(u) + "]");
        }
        if (v < prev) {
            throw NonMonotoneTimes("times must be nondecreasing");
        }
        prev = v;
    }
}

} // namespace

TildeParams tilde_params(const AwParams& w, double u) {
    phase_info(w);
    require_weight(u);
    TildeParams tp;
    tp.u = u;
    tp.aw.q = w.q;
    tp.aw.c = w.c;
    tp.aw.d = w.d;
    if (w.c > 0.0 && u <= w.c * w.c) {
        tp.aw.a = w.c / u;
        tp.aw.b = 1.0 / w.c;
        tp.deterministic = true;
    } else if (w.a > 0.0 && u * w.a * w.a >= 1.0) {
        tp.aw.a = w.a;
        tp.aw.b = 1.0 / (w.a * u);
    } else {
        tp.aw.a = 1.0 / std::sqrt(u);
        tp.aw.b = tp.aw.a;
    }
    return tp;
}

double zeta(const AwParams& w, double u) {
    phase_info(w);
    require_weight(u);
    if (w.c > 0.0 && u <= w.c * w.c) {
        return (1.0 + w.c) * (w.c + u) / (w.c * u);
    }
    if (w.a > 0.0 && u * w.a * w.a >= 1.0) {
        return (1.0 + w.a) * (1.0 + w.a * u) / (w.a * u);
    }
    const double r = 1.0 / std::sqrt(u);
    return (1.0 + r) * (1.0 + r);
}

double current(const AwParams& w) {
    const SupportEnvelope env = support_envelope(w, 1.0);
    return (1.0 - w.q) / (2.0 + env.hi);
}

double bernoulli_site_density(const AwParams& w) {
    phase_info(w);
    return 1.0 / (1.0 + w.c);
}

double mu_gf(const AwParams& w, double u, const std::vector<double>& t) {
    const TildeParams tp = tilde_params(w, u);
    require_times(t, u);
    if (t.empty()) return 1.0;
    if (tp.deterministic) {
        // Degenerate path sqrt(1-q) Z~_s = s/C + C: each site is an
        // independent Bernoulli with success probability 1/(1+C).
        double acc = 1.0;
        for (double v : t) acc *= (w.c + v) / (1.0 + w.c);
        return acc;
    }
    return joint_gf_exact(tp.aw, t);
}

AsepParams effective_beta(const AsepParams& p) {
    phase_info(p);
    AsepParams out = p;
    const double s = p.beta - p.delta + p.q - 1.0;
    const double root = std::sqrt(4.0 * p.beta * p.delta + s * s);
    out.beta = 2.0 * p.beta * (1.0 - p.q) /
               (1.0 - p.q + p.beta + p.delta + root);
    out.delta = 0.0;
    return out;
}

double ratio_limit_check(const MixedMeasure& z, const std::vector<double>& poly,
                         int n) {
    if (n < 0) throw DomainError("moment order must be nonnegative");
    double zmax = 0.0;
    for (const Atom& a : z.atoms) {
        if (a.x < -1e-12) {
            throw DomainError("measure has an atom at " + std::to_string(a.x) +
                              " below zero");
        }
        zmax = std::max(zmax, a.x);
    }
    if (!z.nodes.empty()) {
        if (z.lo < -1e-12) {
            throw DomainError("measure support extends to " +
                              std::to_string(z.lo) + " below zero");
        }
        zmax = std::max(zmax, z.hi);
    }
    if (!(zmax > 0.0)) throw DomainError("measure has no positive support");
    // Powers are normalized by zmax so the integrands stay in [0,1] range.
    const double num = z.expect([&](double x) {
        const double w = std::max(x, 0.0) / zmax;
        return polyval(poly, x) * std::pow(w, n);
    });
    const double den = z.expect([&](double x) {
        const double w = std::max(x, 0.0) / zmax;
        return std::pow(w, n);
    });
    return num / den;
}

double tilde_marginal_variance(const AwParams& w, double u, double t) {
    const TildeParams tp = tilde_params(w, u);
    require_times({t}, u);
    if (tp.deterministic) return 0.0;
    const Tridiagonal j = jacobi_matrix(tp.aw, t, 4);
    std::vector<double> e0(j.dim(), 0.0), j1(j.dim()), j2(j.dim());
    e0[0] = 1.0;
    j.col_apply(e0, j1);
    j.col_apply(j1, j2);
    // The band matrix acts as multiplication by sqrt(1-q) Z~_t, so the
    // resolvent moments (J^k e0)[0] are the raw moments of that variable.
    const double m1 = j1[0];
    const double m2 = j2[0];
    return m2 - m1 * m1;
}

} // namespace asepqh
