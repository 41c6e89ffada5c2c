#pragma once

#include <vector>

#include "asepqh/params.hpp"

namespace asepqh {

// Relative entropy of Bernoulli(x) with respect to Bernoulli(p), with the
// 0 log 0 = 0 convention at x in {0,1}.
double bernoulli_entropy(double x, double p);

// Piecewise limit of (1/N) log K_N, keyed on t = e^lambda against C^2 and
// 1/A^2. At a branch boundary both adjacent branches are evaluated and must
// agree to 1e-12.
double script_L(double lambda, const AwParams& aw);
double script_L0(const AwParams& aw);

// Normalized cumulant generating function Lambda(lambda) = L(lambda) - L(0).
double Lambda(double lambda, const AwParams& aw);

// Closed-form rate function for the particle density; +infinity outside
// [0,1]. Vanishes exactly at the bulk density.
double rate_I(double x, const AwParams& aw);

struct RateFunctionSample {
    std::vector<double> x;
    std::vector<double> value;
    PhaseInfo info;
    double zero = 0.0;
};

RateFunctionSample rate_table(const AwParams& aw, const std::vector<double>& grid);

// sup_lambda (lambda x - Lambda(lambda)) over lambda in [-40, 40] by golden
// section; Lambda is convex so the objective is concave.
double legendre_dual(double x, const AwParams& aw);

// (1/N) log E[e^{lambda * count}] under the exact stationary law, computed
// from the count generating polynomial.
double empirical_Lambda(const AsepParams& p, int n, double lambda);

// (1/N) log P(count/N in (a,b)); tends to -inf_{(a,b)} I as N grows.
double ldp_window(const AsepParams& p, int n, double a, double b);

} // namespace asepqh
