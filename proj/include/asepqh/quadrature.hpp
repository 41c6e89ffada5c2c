#pragma once

#include <functional>
#include <vector>

namespace asepqh {

// Execution mode for node-parallel kernels. Parallel uses OpenMP when the
// library was built with it and falls back to serial otherwise; Serial is the
// reference path used by equivalence tests.
enum class ExecMode { Serial, Parallel };

ExecMode default_exec_mode();
void set_default_exec_mode(ExecMode m);

// Gauss-Legendre nodes and weights on [lo, hi]; cached per node count.
struct GLRule {
    std::vector<double> x;
    std::vector<double> w;
};
GLRule gauss_legendre(int n, double lo, double hi);

// sum_i w[i] * f(x[i]) over a rule, parallelized over nodes in Parallel mode.
double quad_sum(const GLRule& rule, const std::function<double(double)>& f,
                ExecMode mode);

} // namespace asepqh
