#include "asepqh/harness.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "asepqh/errors.hpp"
#include "asepqh/qfun.hpp"
#include "asepqh/quadrature.hpp"

namespace asepqh {

namespace {

// p <- (x - a) * p for a monic recurrence step.
std::vector<double> shift_multiply(const std::vector<double>& p, double a) {
    std::vector<double> out(p.size() + 1, 0.0);
    for (size_t i = 0; i < p.size(); ++i) {
        out[i + 1] += p[i];
        out[i] -= a * p[i];
    }
    return out;
}

void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
    if (y.size() < x.size()) y.resize(x.size(), 0.0);
    for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

double affine_scale(const BiPoissonParams& bp) {
    const double k = std::sqrt(bp.alpha + bp.beta + bp.q - 1.0) /
                     std::sqrt(bp.alpha * bp.beta);
    return 1.0 / ((1.0 - bp.q) * k);
}

// X = scale * v + shift(t) where v = sqrt(1-q) Z_t.
double affine_shift(const BiPoissonParams& bp, double t) {
    const double k = std::sqrt(bp.alpha + bp.beta + bp.q - 1.0) /
                     std::sqrt(bp.alpha * bp.beta);
    return (1.0 + t - (1.0 - bp.q) * (t / bp.beta + 1.0 / bp.alpha)) /
           ((1.0 - bp.q) * k);
}

double z_from_x(const BiPoissonParams& bp, double t, double x) {
    const double k = std::sqrt(bp.alpha + bp.beta + bp.q - 1.0) /
                     std::sqrt(bp.alpha * bp.beta);
    return (1.0 - bp.q) * (k * x + t / bp.beta + 1.0 / bp.alpha) - (1.0 + t);
}

AwParams harness_aw(const BiPoissonParams& bp) {
    return derive_aw(AsepParams{bp.alpha, bp.beta, 0.0, 0.0, bp.q});
}

// Divided difference (p(y) - p(x))/(y - x) as a polynomial in y at fixed x.
std::vector<double> divided_difference(const std::vector<double>& p, double x) {
    if (p.size() < 2) return {};
    std::vector<double> b(p.size() - 1, 0.0);
    for (size_t m = 1; m < p.size(); ++m) {
        double xpow = 1.0;
        for (size_t i = m; i-- > 0;) {
            b[i] += p[m] * xpow;
            xpow *= x;
        }
    }
    return b;
}

// x-derivative of the divided difference, again as a polynomial in y.
std::vector<double> divided_difference_dx(const std::vector<double>& p, double x) {
    if (p.size() < 3) return {};
    std::vector<double> c(p.size() - 2, 0.0);
    for (size_t m = 2; m < p.size(); ++m) {
        double xpow = 1.0;
        for (size_t i = m - 1; i-- > 0;) {
            c[i] += p[m] * double(m - 1 - i) * xpow;
            xpow *= x;
        }
    }
    return c;
}

// Transition kernel used by the difference-quotient operators. The integrands
// are polynomials of moderate degree, so the node-doubling control is run
// well past the default that plain moment evaluations use.
MixedMeasure operator_kernel(const BiPoissonParams& bp, double x, double t) {
    const double s = bp.q * bp.q * t;
    const double xk = bp.q * (x - t * bp.eta) + bp.theta;
    QuadSpec spec;
    spec.n0 = 800;
    spec.max_n = 102400;
    spec.tol = 1e-13;
    const MixedMeasure z =
        transition_z(harness_aw(bp), s, t, z_from_x(bp, s, xk), spec);
    return z.affine(affine_scale(bp), affine_shift(bp, t));
}

} // namespace

BiPoissonParams eta_theta(double alpha, double beta, double q) {
    if (!(alpha > 0.0 && beta > 0.0 && q >= 0.0 && q < 1.0)) {
        throw ParameterOutOfRange("need alpha, beta > 0 and q in [0,1)");
    }
    if (!(alpha + beta > 1.0 - q)) {
        throw ParameterOutOfRange("need alpha + beta > 1 - q, got " +
                                  std::to_string(alpha) + " + " +
                                  std::to_string(beta) + " with q = " +
                                  std::to_string(q));
    }
    BiPoissonParams bp;
    bp.q = q;
    bp.alpha = alpha;
    bp.beta = beta;
    const double root = std::sqrt(alpha + beta + q - 1.0);
    bp.eta = (beta + q - 1.0) * std::sqrt(alpha / beta) / root;
    bp.theta = (alpha + q - 1.0) * std::sqrt(beta / alpha) / root;
    return bp;
}

double QPolynomial::operator()(double v) const { return polyval(coef, v); }

QPolynomial m_poly(int n, double t, const BiPoissonParams& bp) {
    if (n < 0) throw ParameterOutOfRange("polynomial index must be >= 0");
    std::vector<double> prev = {1.0};
    if (n == 0) return {std::move(prev)};
    std::vector<double> cur = {0.0, 1.0};
    for (int m = 1; m < n; ++m) {
        const double qm = qnum(m, bp.q);
        const double qm1 = qnum(m - 1, bp.q);
        std::vector<double> next =
            shift_multiply(cur, (bp.theta + t * bp.eta) * qm);
        axpy(next, -t * (1.0 + bp.eta * bp.theta * qm1) * qm, prev);
        prev = std::move(cur);
        cur = std::move(next);
    }
    return {std::move(cur)};
}

QPolynomial m_poly_dt(int n, double t, const BiPoissonParams& bp) {
    if (n < 0) throw ParameterOutOfRange("polynomial index must be >= 0");
    std::vector<double> prev = {1.0}, dprev = {0.0};
    if (n == 0) return {std::move(dprev)};
    std::vector<double> cur = {0.0, 1.0}, dcur = {0.0};
    for (int m = 1; m < n; ++m) {
        const double qm = qnum(m, bp.q);
        const double qm1 = qnum(m - 1, bp.q);
        const double at = (bp.theta + t * bp.eta) * qm;
        const double bt = t * (1.0 + bp.eta * bp.theta * qm1) * qm;
        std::vector<double> dnext = shift_multiply(dcur, at);
        axpy(dnext, -bp.eta * qm, cur);
        axpy(dnext, -(1.0 + bp.eta * bp.theta * qm1) * qm, prev);
        axpy(dnext, -bt, dprev);
        std::vector<double> next = shift_multiply(cur, at);
        axpy(next, -bt, prev);
        prev = std::move(cur);
        cur = std::move(next);
        dprev = std::move(dcur);
        dcur = std::move(dnext);
    }
    return {std::move(dcur)};
}

QPolynomial q_poly(int n, double x, double t, double s,
                   const BiPoissonParams& bp) {
    if (n < 0) throw ParameterOutOfRange("polynomial index must be >= 0");
    std::vector<double> prev = {1.0};
    if (n == 0) return {std::move(prev)};
    std::vector<double> cur = {-x, 1.0};
    double qpow1 = 1.0; // q^{m-1} inside the loop
    for (int m = 1; m < n; ++m) {
        const double qm = qnum(m, bp.q);
        const double qm1 = qnum(m - 1, bp.q);
        const double am = bp.q * qpow1 * x +
                          qm * (t * bp.eta + bp.theta -
                                (1.0 + bp.q) * qpow1 * s * bp.eta);
        const double bm = qm * (t - s * qpow1) *
                          (1.0 + bp.eta * x * qpow1 +
                           qm1 * bp.eta * (bp.theta - s * bp.eta * qpow1));
        std::vector<double> next = shift_multiply(cur, am);
        axpy(next, -bm, prev);
        prev = std::move(cur);
        cur = std::move(next);
        qpow1 *= bp.q;
    }
    return {std::move(cur)};
}

double h_closed(int n, double x, double t, const BiPoissonParams& bp) {
    if (n < 0) throw ParameterOutOfRange("polynomial index must be >= 0");
    if (n == 0) return 0.0;
    const double qn = qnum(n, bp.q);
    const double qn1 = qnum(n - 1, bp.q);
    return bp.eta * qn * m_poly(n, t, bp)(x) +
           (1.0 + bp.eta * bp.theta * qn1) * qn * m_poly(n - 1, t, bp)(x);
}

double h_integral(const std::vector<double>& p, double x, double t,
                  const BiPoissonParams& bp) {
    const std::vector<double> dd = divided_difference(p, x);
    if (dd.empty()) return 0.0;
    const MixedMeasure kernel = operator_kernel(bp, x, t);
    return (1.0 + bp.eta * x) *
           kernel.expect([&](double y) { return polyval(dd, y); });
}

double generator_a(const std::vector<double>& p, double x, double t,
                   const BiPoissonParams& bp) {
    const std::vector<double> dd = divided_difference_dx(p, x);
    if (dd.empty()) return 0.0;
    const MixedMeasure kernel = operator_kernel(bp, x, t);
    return (1.0 + bp.eta * x) *
           kernel.expect([&](double y) { return polyval(dd, y); });
}

MixedMeasure x_marginal(const BiPoissonParams& bp, double t) {
    const MixedMeasure z = marginal_z(harness_aw(bp), t);
    return z.affine(affine_scale(bp), affine_shift(bp, t));
}

MixedMeasure x_transition(const BiPoissonParams& bp, double s, double t,
                          double x) {
    const MixedMeasure z =
        transition_z(harness_aw(bp), s, t, z_from_x(bp, s, x));
    return z.affine(affine_scale(bp), affine_shift(bp, t));
}

MixedMeasure pi1_density(const BiPoissonParams& bp) {
    if (bp.q != 0.0) {
        throw ParameterOutOfRange("closed-form density requires q = 0");
    }
    if (!(bp.alpha > 0.5 && bp.beta > 0.5)) {
        throw ParameterOutOfRange("atomless regime requires alpha, beta > 1/2");
    }
    const double center = bp.eta + bp.theta;
    const double half = 2.0 * std::sqrt(1.0 + bp.eta * bp.theta);
    // Substituting x = center + half cos(phi) makes the integrand smooth:
    //   density * dx = half^2 sin^2(phi) / (2 pi (1+eta x)(1+theta x)) dphi.
    auto build = [&](int m) {
        const GLRule rule = gauss_legendre(m, 0.0, M_PI);
        MixedMeasure out;
        out.lo = center - half;
        out.hi = center + half;
        out.nodes.resize(m);
        out.weights.resize(m);
        for (int i = 0; i < m; ++i) {
            const double phi = rule.x[i];
            const double xv = center + half * std::cos(phi);
            const double sn = std::sin(phi);
            out.nodes[i] = xv;
            out.weights[i] = rule.w[i] * half * half * sn * sn /
                             (2.0 * M_PI * (1.0 + bp.eta * xv) *
                              (1.0 + bp.theta * xv));
        }
        return out;
    };
    MixedMeasure cur = build(200);
    for (int m = 400; m <= 25600; m *= 2) {
        MixedMeasure next = build(m);
        const double dm = std::fabs(next.mass() - cur.mass());
        const double d1 = std::fabs(next.moment(1) - cur.moment(1));
        const double d2 = std::fabs(next.moment(2) - cur.moment(2));
        cur = std::move(next);
        if (dm < 1e-12 && d1 < 1e-12 && d2 < 1e-12) return cur;
    }
    throw QuadratureFailure("closed-form density quadrature did not settle");
}

std::vector<double> tau_diff_profile(double alpha, double beta, double q,
                                     int n) {
    if (n < 2) {
        throw ParameterOutOfRange("profile differences need at least 2 sites");
    }
    const BiPoissonParams bp = eta_theta(alpha, beta, q);
    const double k = std::sqrt(alpha + beta + q - 1.0) / std::sqrt(alpha * beta);
    auto L = [&](double x) { return k * x + 1.0 / beta + 1.0 / alpha; };
    const MixedMeasure pi1 = x_marginal(bp, 1.0);
    const double den =
        pi1.expect([&](double x) { return std::pow(L(x), n); });

    std::vector<std::pair<double, double>> pts;
    pts.reserve(pi1.nodes.size() + pi1.atoms.size());
    for (size_t i = 0; i < pi1.nodes.size(); ++i) {
        pts.emplace_back(pi1.nodes[i], pi1.weights[i]);
    }
    for (const Atom& a : pi1.atoms) pts.emplace_back(a.x, a.mass);

    // Moments E[L(y)^m] of the inner kernel for m = 0..n-2. At q = 0 the
    // kernel P_{0,1}(theta, dy) = (1 + theta y) pi1(dy) does not depend on
    // the outer point.
    std::vector<double> shared;
    if (q == 0.0) {
        shared.resize(n - 1);
        for (int m = 0; m <= n - 2; ++m) {
            shared[m] = pi1.expect([&](double y) {
                return (1.0 + bp.theta * y) * std::pow(L(y), m);
            });
        }
    }
    std::vector<double> acc(n - 1, 0.0);
    for (const auto& [x, w] : pts) {
        std::vector<double> inner;
        if (q == 0.0) {
            inner = shared;
        } else {
            const MixedMeasure kernel = x_transition(
                bp, q * q, 1.0, q * (x - bp.eta) + bp.theta);
            inner.resize(n - 1);
            for (int m = 0; m <= n - 2; ++m) {
                inner[m] =
                    kernel.expect([&](double y) { return std::pow(L(y), m); });
            }
        }
        const double lx = L(x);
        const double base = w * (1.0 + bp.eta * x);
        double powj = 1.0;
        for (int j = 1; j <= n - 1; ++j) {
            acc[j - 1] += base * powj * inner[n - j - 1];
            powj *= lx;
        }
    }
    const double pref = (alpha + beta + q - 1.0) / (alpha * beta);
    std::vector<double> out(n - 1);
    for (int j = 1; j <= n - 1; ++j) out[j - 1] = pref * acc[j - 1] / den;
    return out;
}

double tau_diff_integral(double alpha, double beta, double q, int n, int j) {
    if (j < 1 || j > n - 1) {
        throw ParameterOutOfRange("profile difference index " +
                                  std::to_string(j) + " outside [1, " +
                                  std::to_string(n - 1) + "]");
    }
    return tau_diff_profile(alpha, beta, q, n)[j - 1];
}

} // namespace asepqh
