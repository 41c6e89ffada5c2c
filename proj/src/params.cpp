#include "asepqh/params.hpp"

#include <cmath>
#include <sstream>

#include "asepqh/errors.hpp"

namespace asepqh {

// Roots of u x^2 - (1-q-u+v) x - v = 0. With b = 1-q-u+v and
// s = sqrt(b^2 + 4uv) >= |b|, the numerically safe forms are
//   kappa_+ = (b + s) / (2u),  kappa_- = -2v / (b + s)   when b >= 0,
//   kappa_+ = 2v / (s - b),    kappa_- = (b - s) / (2u)  when b <  0,
// so the subtracted pair is never formed.
double kappa_plus(double u, double v, double q) {
    const double b = 1.0 - q - u + v;
    const double s = std::sqrt(b * b + 4.0 * u * v);
    if (b >= 0.0) return (b + s) / (2.0 * u);
    if (s - b == 0.0) return 0.0; // v == 0, b < 0
    return 2.0 * v / (s - b);
}

double kappa_minus(double u, double v, double q) {
    const double b = 1.0 - q - u + v;
    const double s = std::sqrt(b * b + 4.0 * u * v);
    if (b < 0.0) return (b - s) / (2.0 * u);
    if (b + s == 0.0) return 0.0; // v == 0, b == 0
    return -2.0 * v / (b + s);
}

void validate(const AsepParams& p) {
    std::ostringstream oss;
    if (!(p.alpha > 0.0)) oss << "alpha must be > 0 (got " << p.alpha << "); ";
    if (!(p.beta > 0.0)) oss << "beta must be > 0 (got " << p.beta << "); ";
    if (!(p.gamma >= 0.0)) oss << "gamma must be >= 0 (got " << p.gamma << "); ";
    if (!(p.delta >= 0.0)) oss << "delta must be >= 0 (got " << p.delta << "); ";
    if (!(p.q >= 0.0 && p.q < 1.0)) oss << "q must lie in [0,1) (got " << p.q << "); ";
    const std::string msg = oss.str();
    if (!msg.empty()) throw DomainError(msg);
}

AwParams derive_aw(const AsepParams& p) {
    validate(p);
    AwParams w;
    w.q = p.q;
    w.a = kappa_plus(p.beta, p.delta, p.q);
    w.b = kappa_minus(p.beta, p.delta, p.q);
    w.c = kappa_plus(p.alpha, p.gamma, p.q);
    w.d = kappa_minus(p.alpha, p.gamma, p.q);
    if (!(w.a * w.c < 1.0)) {
        std::ostringstream oss;
        oss << "boundary rates map to A = " << w.a << ", C = " << w.c
            << " with AC = " << w.a * w.c
            << " >= 1; the stationary representation requires AC < 1";
        throw FanRegionViolation(oss.str());
    }
    return w;
}

AsepParams invert_aw(const AwParams& w) {
    const double pa = (1.0 + w.a) * (1.0 + w.b);
    const double pc = (1.0 + w.c) * (1.0 + w.d);
    if (!(pa > 0.0) || !(pc > 0.0) || !(w.a * w.b <= 0.0) ||
        !(w.c * w.d <= 0.0) || !(w.q >= 0.0 && w.q < 1.0)) {
        throw InvalidAwParams(
            "invert_aw requires (1+A)(1+B) > 0, (1+C)(1+D) > 0, AB <= 0, "
            "CD <= 0, q in [0,1)");
    }
    AsepParams p;
    p.q = w.q;
    p.alpha = (1.0 - w.q) / pc;
    p.beta = (1.0 - w.q) / pa;
    p.gamma = -(1.0 - w.q) * w.c * w.d / pc;
    p.delta = -(1.0 - w.q) * w.a * w.b / pa;
    return p;
}

PhaseInfo phase_info(const AwParams& w) {
    if (!(w.a * w.c < 1.0)) {
        throw FanRegionViolation("phase_info requires AC < 1");
    }
    PhaseInfo info;
    info.rho0 = 1.0 / (1.0 + w.c);
    info.rho1 = w.a / (1.0 + w.a);
    if (w.c > 1.0) {
        info.phase = Phase::LowDensity;
        info.bulk_density = info.rho0;
    } else if (w.a > 1.0) {
        info.phase = Phase::HighDensity;
        info.bulk_density = info.rho1;
    } else {
        info.phase = Phase::MaximalCurrent;
        info.bulk_density = 0.5;
    }
    return info;
}

PhaseInfo phase_info(const AsepParams& p) { return phase_info(derive_aw(p)); }

std::string phase_name(Phase ph) {
    switch (ph) {
        case Phase::MaximalCurrent: return "MaximalCurrent";
        case Phase::LowDensity: return "LowDensity";
        case Phase::HighDensity: return "HighDensity";
    }
    return "?";
}

} // namespace asepqh
