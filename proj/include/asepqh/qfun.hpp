#pragma once

#include <complex>
#include <vector>

namespace asepqh {

// Number of factors after which further terms of an infinite q-product differ
// from 1 by less than machine precision: ceil(log(1e-17)/log(q)), at least 1.
int qproduct_terms(double q);

// Finite q-Pochhammer (z; q)_n = prod_{k=0}^{n-1} (1 - z q^k).
double qpoch(double z, double q, int n);
std::complex<double> qpoch(std::complex<double> z, double q, int n);

// Infinite q-Pochhammer (z; q)_infinity, truncated at qproduct_terms(q).
double qpoch_inf(double z, double q);

// (z; q)_inf * (conj(z); q)_inf for a conjugate pair, in real arithmetic:
// prod_k (1 - 2 Re(z) q^k + |z|^2 q^{2k}).
double qpoch_pair_inf(double re, double abs2, double q);

// q-number [n]_q = 1 + q + ... + q^{n-1}.
double qnum(int n, double q);

// Evaluate a polynomial given by coefficients c[0] + c[1] x + ... at x.
double polyval(const std::vector<double>& c, double x);

// Derivative coefficients of a coefficient vector.
std::vector<double> polyder(const std::vector<double>& c);

} // namespace asepqh
