#pragma once

#include <string>

namespace asepqh {

// Open-boundary ASEP rates. Particles enter at site 1 with rate alpha and
// leave there with rate gamma; they leave at site N with rate beta and enter
// there with rate delta. Right hops have rate 1, left hops rate q.
struct AsepParams {
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 0.0;
    double delta = 0.0;
    double q = 0.0;
};

// Boundary parameters in the (A, B, C, D) coordinates used by the stationary
// representation: A, C >= 0 and B, D in (-1, 0] when derived from rates, with
// the convergence condition AC < 1.
struct AwParams {
    double a = 0.0; // A
    double b = 0.0; // B
    double c = 0.0; // C
    double d = 0.0; // D
    double q = 0.0;
};

enum class Phase { MaximalCurrent, LowDensity, HighDensity };

// Boundary reservoir densities and the resulting phase. rho0 > rho1 holds
// whenever AC < 1; bulk_density is the unique zero of the rate function.
struct PhaseInfo {
    Phase phase = Phase::MaximalCurrent;
    double rho0 = 1.0;         // 1/(1+C)
    double rho1 = 0.0;         // A/(1+A)
    double bulk_density = 0.5; // rho0, rho1, or 1/2 per phase
};

// Largest and smallest root of u x^2 - (1-q-u+v) x - v = 0, evaluated in a
// cancellation-stable form (the subtractive root is computed as a quotient).
// kappa_plus >= 0 and kappa_minus in (-1, 0] for u > 0, v >= 0, q in [0,1).
double kappa_plus(double u, double v, double q);
double kappa_minus(double u, double v, double q);

// Throws DomainError unless alpha > 0, beta > 0, gamma >= 0, delta >= 0 and
// 0 <= q < 1.
void validate(const AsepParams& p);

// Maps boundary rates to (A, B, C, D): A = kappa_+(beta, delta),
// B = kappa_-(beta, delta), C = kappa_+(alpha, gamma), D = kappa_-(alpha, gamma).
// Throws FanRegionViolation if AC >= 1.
AwParams derive_aw(const AsepParams& p);

// Inverse map: alpha = (1-q)/((1+C)(1+D)), beta = (1-q)/((1+A)(1+B)),
// gamma = -(1-q)CD/((1+C)(1+D)), delta = -(1-q)AB/((1+A)(1+B)).
// Requires (1+A)(1+B) > 0, (1+C)(1+D) > 0, AB <= 0, CD <= 0, q in [0,1);
// throws InvalidAwParams otherwise.
AsepParams invert_aw(const AwParams& w);

// Phase classification on the fan region: C > 1 low density, A > 1 high
// density, otherwise maximal current. (A > 1 and C > 1 cannot hold jointly
// when AC < 1.)
PhaseInfo phase_info(const AwParams& w);
PhaseInfo phase_info(const AsepParams& p);

std::string phase_name(Phase ph);

} // namespace asepqh
