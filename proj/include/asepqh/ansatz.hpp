#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "asepqh/params.hpp"

namespace asepqh {

// Coefficients of the three-term recurrence
//   2x w_n(x) = abar_n w_{n+1}(x) + b_n w_n(x) + cbar_n w_{n-1}(x)
// for the orthogonal family attached to the parameter quadruple (a,b,c,d;q).
struct RecurrenceCoeffs {
    double abar;
    double b;
    double cbar;
};

// Real-parameter form. The b_n value is computed in a grouped form in which
// the a + 1/a singularity at a = 0 has been cancelled symbolically, so a = 0
// is admissible. Throws DegenerateDenominator naming the vanished factor.
RecurrenceCoeffs aw_recurrence_coeffs(int n, double a, double b, double c,
                                      double d, double q);

// General form for parameter sets closed under conjugation (each parameter
// real or part of a conjugate pair).
std::array<std::complex<double>, 3> aw_recurrence_coeffs(
    int n, const std::array<std::complex<double>, 4>& p, double q);

// Banded storage of a tridiagonal matrix T:
//   sub[n]  = T[n+1][n]  (n = 0..dim-2; the last slot is unused and zero)
//   diag[n] = T[n][n]
//   sup[n]  = T[n-1][n]  (n = 1..dim-1; sup[0] is unused and zero)
struct Tridiagonal {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> sup;

    int dim() const { return static_cast<int>(diag.size()); }
    double entry(int i, int j) const;
    // Row action out = w T with w a row vector of length dim.
    void row_apply(const std::vector<double>& w, std::vector<double>& out) const;
    // Column action out = T v.
    void col_apply(const std::vector<double>& v, std::vector<double>& out) const;
};

// a*X + b*Y entrywise for equal-size band triples.
Tridiagonal band_combine(double a, const Tridiagonal& x, double b,
                         const Tridiagonal& y);

// Jacobi matrix of the time-t marginal: the tridiagonal operator J(t) with
//   x r_n(x;t) = sub[n] r_{n+1}(x;t) + diag[n] r_n(x;t) + sup'[n] r_{n-1}(x;t)
// read columnwise, built from the recurrence at parameters
// (A sqrt t, B sqrt t, C / sqrt t, D / sqrt t).
Tridiagonal jacobi_matrix(const AwParams& w, double t, int m);

// The time-independent pair (x, y) with J(t) = t x + y, extracted from J(1)
// and J(2) and certified against J(3); the certification failing throws
// LinearityViolation.
struct TridiagonalPair {
    Tridiagonal x;
    Tridiagonal y;
};
TridiagonalPair jacobi_pair(const AwParams& w, int m);

// The matrices E = I/(1-q) + y/sqrt(1-q) and D = I/(1-q) + x/sqrt(1-q),
// acting against the unit row vector W = e0^T on the left and the unit
// column vector V = e0 on the right.
struct MatrixAnsatz {
    Tridiagonal e;
    Tridiagonal d;
    double q;
};
MatrixAnsatz matrix_ansatz(const AwParams& w, int m);

// <W| prod_j (E + t_j D) |V> / <W| (E+D)^N |V> with truncation M = N+2,
// which is exact. Site j corresponds to the j-th factor from the left.
// Accepts any positive t_j. Throws FanRegionViolation via derive_aw and
// SizeLimitExceeded for N > 400.
double joint_gf_exact(const AsepParams& asep, const std::vector<double>& t);
double joint_gf_exact(const AwParams& w, const std::vector<double>& t);

// K_N = <W|(E+D)^N|V> and its logarithm (the latter usable up to N = 400).
double partition(const AsepParams& asep, int n);
double log_partition(const AsepParams& asep, int n);

// Occupation profile <tau_j> for j = 1..N via prefix rows and suffix columns.
std::vector<double> profile_exact(const AsepParams& asep, int n);

// Coefficients of <W|(E + t D)^N|V> as a polynomial in t, held in a scaled
// form: coefficient k equals scaled[k] * exp(logscale). Coefficient k divided
// by K_N is the stationary probability of seeing k particles.
struct CountGf {
    std::vector<double> scaled;
    double logscale = 0.0;

    std::vector<double> probabilities() const;
    double coefficient(int k) const;
    double log_sum() const; // log K_N
};
CountGf count_gf_poly(const AsepParams& asep, int n);

// Catalan numbers Cat(n) = binom(2n,n)/(n+1) and the profile difference
// <tau_j> - <tau_{j+1}> = Cat(j)Cat(N-j)/Cat(N+1) for alpha=beta=1, q=0.
double catalan(int n);
double catalan_diff(int n, int j);

// K_N by quadrature of E[(2 + sqrt(1-q) Z_1)^N] / (1-q)^N against the time-1
// marginal law.
double partition_via_moments(const AsepParams& asep, int n);

// K_N for q = 0 and |A|,|B|,|C|,|D| < 1 by the semicircle integral
//   K_N = M * int (2+x)^N sqrt(4-x^2) / prod_p (1+p^2-px) dx,
//   M = prod_{i<j} (1 - p_i p_j) / (2 pi (1 - ABCD)).
double partition_via_semicircle(const AsepParams& asep, int n);

// Factorized form of the profile difference for q = 0, gamma = delta = 0,
// alpha, beta > 1/2, with signed kernel parameters abar = (1-beta)/beta and
// cbar = (1-alpha)/alpha:
//   F_m(p)  = int (2+z)^{m-1} sqrt(4-z^2) / (1+p^2-pz) dz,
//   Khat_N  = int (2+z)^N sqrt(4-z^2) / ((1+abar^2-abar z)(1+cbar^2-cbar z)) dz,
//   difference = F_j(cbar) F_{N-j}(abar) / (2 pi Khat_N).
struct SchutzFactors {
    double f_left;   // F_j with the alpha-derived kernel cbar
    double f_right;  // F_{N-j} with the beta-derived kernel abar
    double khat;
    double difference;
};
SchutzFactors schutz_factors(double alpha, double beta, int n, int j);

// Adaptive Gauss-Legendre integral of f against the Wigner weight
// sqrt(4-z^2) dz on (-2,2), via the substitution z = 2 cos(theta).
double semicircle_integral(const std::function<double(double)>& f,
                           double tol = 1e-12);

} // namespace asepqh
