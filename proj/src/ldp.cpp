#include "asepqh/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "asepqh/ansatz.hpp"
#include "asepqh/errors.hpp"

namespace asepqh {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double branch_low(double c, double t) { return std::log((1.0 + c) * (c + t) / c); }
double branch_mid(double t) { return 2.0 * std::log1p(std::sqrt(t)); }
double branch_high(double a, double t) { return std::log((1.0 + a) * (1.0 + a * t) / a); }

void check_boundary(double lhs, double rhs) {
    if (std::fabs(lhs - rhs) > 1e-12) {
        throw DomainError("branch values disagree at a boundary: " +
                          std::to_string(lhs) + " vs " + std::to_string(rhs));
    }
}

// log sum_k c_k e^{lambda k} over nonnegative scaled coefficients, up to the
// common scale (which cancels in every difference we form).
double lse_weighted(const std::vector<double>& coef, double lambda, int lo, int hi) {
    double peak = -kInf;
    for (int k = lo; k <= hi; ++k) {
        if (coef[k] <= 0.0) continue;
        peak = std::max(peak, std::log(coef[k]) + lambda * k);
    }
    if (peak == -kInf) return -kInf;
    double acc = 0.0;
    for (int k = lo; k <= hi; ++k) {
        if (coef[k] <= 0.0) continue;
        acc += std::exp(std::log(coef[k]) + lambda * k - peak);
    }
    return peak + std::log(acc);
}

} // namespace

double bernoulli_entropy(double x, double p) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("entropy argument x = " + std::to_string(x) +
                          " outside [0,1]");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("entropy reference p = " + std::to_string(p) +
                          " outside (0,1)");
    }
    double acc = 0.0;
    if (x > 0.0) acc += x * std::log(x / p);
    if (x < 1.0) acc += (1.0 - x) * std::log((1.0 - x) / (1.0 - p));
    return acc;
}

double script_L(double lambda, const AwParams& aw) {
    phase_info(aw);
    const double a = aw.a;
    const double c = aw.c;
    const double t = std::exp(lambda);
    if (c > 0.0 && t <= c * c) {
        const double v = branch_low(c, t);
        if (t >= c * c * (1.0 - 1e-13)) check_boundary(v, branch_mid(t));
        return v;
    }
    if (a > 0.0 && t * a * a >= 1.0) {
        const double v = branch_high(a, t);
        if (t * a * a <= 1.0 + 1e-13) check_boundary(v, branch_mid(t));
        return v;
    }
    return branch_mid(t);
}

double script_L0(const AwParams& aw) { return script_L(0.0, aw); }

double Lambda(double lambda, const AwParams& aw) {
    return script_L(lambda, aw) - script_L0(aw);
}

double rate_I(double x, const AwParams& aw) {
    const PhaseInfo info = phase_info(aw);
    if (x < 0.0 || x > 1.0) return kInf;
    const double l0 = script_L0(aw);
    const double rho0 = info.rho0;
    const double rho1 = info.rho1;
    if (x < 1.0 - rho0) {
        return bernoulli_entropy(x, rho0) + l0 + std::log(rho0 * (1.0 - rho0));
    }
    if (x > 1.0 - rho1) {
        return bernoulli_entropy(x, rho1) + l0 + std::log(rho1 * (1.0 - rho1));
    }
    return 2.0 * bernoulli_entropy(x, 0.5) + l0 - std::log(4.0);
}

RateFunctionSample rate_table(const AwParams& aw, const std::vector<double>& grid) {
    RateFunctionSample out;
    out.info = phase_info(aw);
    out.zero = out.info.bulk_density;
    out.x = grid;
    out.value.reserve(grid.size());
    for (double x : grid) out.value.push_back(rate_I(x, aw));
    return out;
}

double legendre_dual(double x, const AwParams& aw) {
    const double l0 = script_L0(aw);
    auto objective = [&](double lam) {
        return lam * x - (script_L(lam, aw) - l0);
    };
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = -40.0, hi = 40.0;
    double m1 = hi - inv_phi * (hi - lo);
    double m2 = lo + inv_phi * (hi - lo);
    double f1 = objective(m1);
    double f2 = objective(m2);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + inv_phi * (hi - lo);
            f2 = objective(m2);
        } else {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - inv_phi * (hi - lo);
            f1 = objective(m1);
        }
    }
    return objective(0.5 * (lo + hi));
}

double empirical_Lambda(const AsepParams& p, int n, double lambda) {
    const CountGf cg = count_gf_poly(p, n);
    const double tilted = lse_weighted(cg.scaled, lambda, 0, n);
    const double total = lse_weighted(cg.scaled, 0.0, 0, n);
    return (tilted - total) / double(n);
}

double ldp_window(const AsepParams& p, int n, double a, double b) {
    if (!(a < b)) {
        throw DomainError("window bounds must satisfy a < b");
    }
    const CountGf cg = count_gf_poly(p, n);
    int lo = n + 1, hi = -1;
    for (int k = 0; k <= n; ++k) {
        const double frac = double(k) / double(n);
        if (frac > a && frac < b) {
            lo = std::min(lo, k);
            hi = std::max(hi, k);
        }
    }
    if (hi < lo) {
        throw DomainError("window (" + std::to_string(a) + ", " + std::to_string(b) +
                          ") contains no lattice fraction k/" + std::to_string(n));
    }
    const double part = lse_weighted(cg.scaled, 0.0, lo, hi);
    const double total = lse_weighted(cg.scaled, 0.0, 0, n);
    return (part - total) / double(n);
}

} // namespace asepqh
