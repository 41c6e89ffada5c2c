#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "asepqh/params.hpp"
#include "asepqh/quadrature.hpp"

namespace asepqh {

struct Atom {
    double x;
    double mass;
};

// A probability measure with an absolutely continuous part, held as quadrature
// nodes and weights (weights include the density factor, so they sum to the
// continuous mass), plus finitely many atoms.
struct MixedMeasure {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<Atom> atoms;
    double lo = 0.0; // continuous support interval
    double hi = 0.0;

    double mass() const;
    // E[(x / scale)^n]; scale guards against overflow for large n.
    double moment_scaled(int n, double scale) const;
    double moment(int n) const { return moment_scaled(n, 1.0); }
    double expect(const std::function<double(double)>& f,
                  ExecMode mode = default_exec_mode()) const;
    // Image under x -> scale * x + shift (scale > 0).
    MixedMeasure affine(double scale, double shift) const;
    // Throws MeasureValidationError if total mass deviates from 1 by more than tol or
    // any weight or atom mass is negative beyond rounding dust.
    void validate(double tol = 1e-8) const;
};

// Askey-Wilson parameter quadruple, closed under complex conjugation
// (parameters are real or come in conjugate pairs).
struct AWLaw {
    std::array<std::complex<double>, 4> p;
    double q;
};

// Quadrature controls. When spike_width > 0 the angular variable is remapped
// through a tangent substitution centered at spike_phi, which resolves the
// near-diagonal transition kernels whose density concentrates in a band of
// that angular width.
struct QuadSpec {
    int n0 = 200;
    int max_n = 25600;
    double tol = 1e-10;
    double spike_phi = 0.0;
    double spike_width = 0.0;
};

// Orthogonality measure of the Askey-Wilson polynomials on x = cos(theta),
// with atoms generated by every real parameter of modulus > 1. Node count is
// doubled until mass and first two moments change by less than spec.tol.
MixedMeasure aw_measure(const AWLaw& law, const QuadSpec& spec = {},
                        ExecMode mode = default_exec_mode());

// Support interval [lower(t), upper(t)] of the time-t marginal in the
// sqrt(1-q) Z coordinate. The edges follow the atom curves C + t/C (t < C^2),
// A t + 1/A (t > 1/A^2), D + t/D (t < D^2), B t + 1/B (t > 1/B^2), and
// +-2 sqrt(t) in between.
struct SupportEnvelope {
    double lo;
    double hi;
};
SupportEnvelope support_envelope(const AwParams& w, double t);

// Marginal law of sqrt(1-q) Z_t: Askey-Wilson law with parameters
// (A sqrt t, B sqrt t, C / sqrt t, D / sqrt t) scaled by 2 sqrt t.
MixedMeasure marginal_z(const AwParams& w, double t, const QuadSpec& spec = {},
                        ExecMode mode = default_exec_mode());

// Transition law from sqrt(1-q) Z_s = ztilde to time t > s, in the same
// coordinate. At s = 0 the third parameter pair degenerates to
// {ztilde / sqrt t, 0}.
MixedMeasure transition_z(const AwParams& w, double s, double t, double ztilde,
                          const QuadSpec& spec = {},
                          ExecMode mode = default_exec_mode());

// Running hygiene statistics over every measure built by marginal_z and
// transition_z since the last reset: worst |mass - 1|, worst overshoot of the
// support envelope, and the minimum of 1 + t + z over all support points.
struct MeasureHygiene {
    long long count = 0;
    double worst_mass_err = 0.0;
    double worst_support_excess = 0.0;
    double min_shifted = 1e300;
};
const MeasureHygiene& hygiene();
void hygiene_reset();

} // namespace asepqh
