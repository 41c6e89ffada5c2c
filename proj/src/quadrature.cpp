#include "asepqh/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <map>
#include <memory>
#include <mutex>

namespace asepqh {

namespace {
ExecMode g_mode = ExecMode::Parallel;

// Unit-interval [-1, 1] tables cached per node count; GSL recomputes
// non-precomputed sizes in O(n^2), so each size is built once.
std::map<int, GLRule>& rule_cache() {
    static std::map<int, GLRule> cache;
    return cache;
}
std::mutex g_cache_mutex;
} // namespace

ExecMode default_exec_mode() { return g_mode; }
void set_default_exec_mode(ExecMode m) { g_mode = m; }

GLRule gauss_legendre(int n, double lo, double hi) {
    GLRule base;
    {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        auto it = rule_cache().find(n);
        if (it == rule_cache().end()) {
            gsl_integration_glfixed_table* tbl =
                gsl_integration_glfixed_table_alloc(static_cast<size_t>(n));
            GLRule r;
            r.x.resize(n);
            r.w.resize(n);
            for (int i = 0; i < n; ++i) {
                double xi, wi;
                gsl_integration_glfixed_point(-1.0, 1.0, static_cast<size_t>(i),
                                              &xi, &wi, tbl);
                r.x[i] = xi;
                r.w[i] = wi;
            }
            gsl_integration_glfixed_table_free(tbl);
            it = rule_cache().emplace(n, std::move(r)).first;
        }
        base = it->second;
    }
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    GLRule out;
    out.x.resize(base.x.size());
    out.w.resize(base.w.size());
    for (size_t i = 0; i < base.x.size(); ++i) {
        out.x[i] = mid + half * base.x[i];
        out.w[i] = half * base.w[i];
    }
    return out;
}

double quad_sum(const GLRule& rule, const std::function<double(double)>& f,
                ExecMode mode) {
    const int n = static_cast<int>(rule.x.size());
    double s = 0.0;
    if (mode == ExecMode::Parallel) {
#pragma omp parallel for reduction(+ : s) schedule(static)
        for (int i = 0; i < n; ++i) s += rule.w[i] * f(rule.x[i]);
    } else {
        for (int i = 0; i < n; ++i) s += rule.w[i] * f(rule.x[i]);
    }
    return s;
}

} // namespace asepqh
