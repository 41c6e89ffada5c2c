#pragma once

#include <vector>

#include "asepqh/awdist.hpp"
#include "asepqh/params.hpp"

namespace asepqh {

// Boundary parameters of the semi-infinite limit taken with weight u on the
// removed sites. The pair (A~, B~) depends on where u falls relative to C^2
// and 1/A^2; always A~ B~ = 1/u, C~ = C, D~ = D.
struct TildeParams {
    double u = 1.0;
    AwParams aw;
    bool deterministic = false; // u <= C^2, degenerate path regime
};

TildeParams tilde_params(const AwParams& w, double u);

// Largest point 1 + u + sqrt(1-q) z over the support of the limiting height
// variable, divided by u. Equals (1 + u + U(u))/u with U the upper support
// envelope of the time-u marginal.
double zeta(const AwParams& w, double u);

// Stationary current J = (1-q)/(2 + U(1)).
double current(const AwParams& w);

// Site density of the product-Bernoulli limit in the deterministic regime.
double bernoulli_site_density(const AwParams& w);

// E[prod_j t_j^{tau_j}] under the K-site limit measure with weight u; t must
// be nondecreasing with entries in (0, u] (NonMonotoneTimes otherwise). Uses
// the closed degenerate path when u <= C^2 and the tridiagonal representation
// with TildeParams otherwise.
double mu_gf(const AwParams& w, double u, const std::vector<double>& t);

// The u -> infinity limit seen from the leftmost K sites is a finite ASEP
// with the right boundary replaced: alpha, gamma kept, delta = 0 and
// beta~ = 2 beta (1-q) / (1-q + beta + delta + sqrt(4 beta delta +
// (beta - delta + q - 1)^2)).
AsepParams effective_beta(const AsepParams& p);

// E[p(Z) Z^n] / E[Z^n] for a nonnegative bounded variable Z given as a
// MixedMeasure and a polynomial p by coefficients (constant term first).
// Converges to p(max support) as n grows. Throws DomainError if the measure
// has support below zero.
double ratio_limit_check(const MixedMeasure& z, const std::vector<double>& poly,
                         int n);

// Variance of sqrt(1-q) Z~_t under the tilde-parameter marginal, computed
// from the first two Jacobi moments. Near zero at t = u = 1, where the
// marginal is deterministic.
double tilde_marginal_variance(const AwParams& w, double u, double t);

} // namespace asepqh
