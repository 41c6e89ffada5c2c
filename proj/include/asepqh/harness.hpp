#pragma once

#include <vector>

#include "asepqh/awdist.hpp"
#include "asepqh/params.hpp"

namespace asepqh {

// Parameters of the quadratic-harness description of the boundary process
// when gamma = delta = 0. Requires alpha + beta > 1 - q; then 1 + eta theta
// > q holds automatically. The generating rates are kept so that transition
// measures can be built by affine conjugation.
struct BiPoissonParams {
    double eta = 0.0;
    double theta = 0.0;
    double q = 0.0;
    double alpha = 1.0;
    double beta = 1.0;
};

BiPoissonParams eta_theta(double alpha, double beta, double q);

// Dense polynomial with coefficients in increasing degree order; monic for
// the recurrence families below.
struct QPolynomial {
    std::vector<double> coef;

    int degree() const { return static_cast<int>(coef.size()) - 1; }
    double operator()(double v) const;
};

// Martingale polynomials M_n(x;t):
//   x M_n = M_{n+1} + (theta + t eta)[n]_q M_n + t(1 + eta theta [n-1]_q)[n]_q M_{n-1}.
QPolynomial m_poly(int n, double t, const BiPoissonParams& bp);

// Coefficientwise t-derivative of M_n(x;t).
QPolynomial m_poly_dt(int n, double t, const BiPoissonParams& bp);

// Orthogonal polynomials Q_n(y; x, t, s) of the transition measure from
// state x at time s to time t; Q_0 = 1, Q_1 = y - x, and
//   Q_{n+1} = (y - A_n) Q_n - B_n Q_{n-1}
// with the displayed coefficient sequences. M_n(x;t) = Q_n(x; 0, t, 0).
QPolynomial q_poly(int n, double x, double t, double s, const BiPoissonParams& bp);

// Action of the difference-quotient operator H_t on M_n in closed form:
//   eta [n]_q M_n(x;t) + (1 + eta theta [n-1]_q) [n]_q M_{n-1}(x;t).
double h_closed(int n, double x, double t, const BiPoissonParams& bp);

// Same operator applied to an arbitrary polynomial p by quadrature:
//   (1 + eta x) Int (p(y) - p(x))/(y - x) P_{q^2 t, t}(q(x - t eta) + theta, dy).
double h_integral(const std::vector<double>& p, double x, double t,
                  const BiPoissonParams& bp);

// Infinitesimal generator on polynomials:
//   (1 + eta x) Int d/dx[(p(y) - p(x))/(y - x)] P_{q^2 t, t}(q(x - t eta) + theta, dy);
// equals -d/dt M_n(x;t) when p = M_n.
double generator_a(const std::vector<double>& p, double x, double t,
                   const BiPoissonParams& bp);

// Time-t marginal and transition measures of the X process, built from the
// Z-process kernels through the affine map
//   1 + t + sqrt(1-q) Z_t = (1-q)(k X_t + t/beta + 1/alpha),
// k = sqrt(alpha+beta+q-1)/sqrt(alpha beta).
MixedMeasure x_marginal(const BiPoissonParams& bp, double t);
MixedMeasure x_transition(const BiPoissonParams& bp, double s, double t, double x);

// Atomless law of X_1 at q = 0 (needs alpha, beta > 1/2):
//   sqrt(4(1+eta theta) - (x - eta - theta)^2) / (2 pi (1+eta x)(1+theta x)).
MixedMeasure pi1_density(const BiPoissonParams& bp);

// Stationary profile differences <tau_j> - <tau_{j+1}> for j = 1..N-1 from
// the two-fold transition integral; gamma = delta = 0 throughout.
std::vector<double> tau_diff_profile(double alpha, double beta, double q, int n);
double tau_diff_integral(double alpha, double beta, double q, int n, int j);

} // namespace asepqh
