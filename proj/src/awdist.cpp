#include "asepqh/awdist.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "asepqh/errors.hpp"
#include "asepqh/qfun.hpp"

namespace asepqh {

namespace {

constexpr double kPi = 3.14159265358979323846;

MeasureHygiene g_hygiene;

using cplx = std::complex<double>;

bool is_real(const cplx& z) { return std::abs(z.imag()) < 1e-14; }

// (z; q)_inf over the full parameter product set, complex-safe. The product
// set is closed under conjugation, so the imaginary dust is discarded.
double normalizing_constant(const AWLaw& law) {
    const int J = qproduct_terms(law.q);
    cplx num = qpoch(cplx(law.q, 0.0), law.q, J);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) num *= qpoch(law.p[i] * law.p[j], law.q, J);
    const cplx den = qpoch(law.p[0] * law.p[1] * law.p[2] * law.p[3], law.q, J);
    return (num / den).real();
}

// Density of the continuous part against d(theta): value at x = cos(theta)
// times sin(theta), so that integrating over theta in (0, pi) gives the
// continuous mass. All factors are evaluated in real arithmetic.
double theta_density(const AWLaw& law, double Kc, int J, double theta) {
    const double c1 = std::cos(theta);
    const double s1 = std::sin(theta);
    const double c2 = std::cos(2.0 * theta);

    double num = 4.0 * s1 * s1;
    double qk = law.q;
    for (int k = 1; k <= J; ++k) {
        num *= 1.0 - 2.0 * qk * c2 + qk * qk;
        qk *= law.q;
    }

    double den = 1.0;
    for (int i = 0; i < 4; ++i) {
        const double pr = law.p[i].real();
        const double pi = law.p[i].imag();
        // |1 - p q^k e^{i theta}|^2 accumulated over k.
        double f = 1.0;
        qk = 1.0;
        for (int k = 0; k <= J; ++k) {
            const double re = 1.0 - qk * (pr * c1 - pi * s1);
            const double im = qk * (pr * s1 + pi * c1);
            f *= re * re + im * im;
            qk *= law.q;
        }
        den *= f;
    }
    return Kc / (2.0 * kPi) * num / den;
}

// Grouped finite-product factor pairing (g p; q)_j against (g q / p; q)_j p^j,
// safe when p = 0 (each paired factor stays finite).
cplx atom_factor(const cplx& p, double g, double q, int j) {
    cplx f = 1.0;
    double qk = 1.0;
    for (int k = 0; k < j; ++k) {
        f *= (1.0 - g * p * qk) / (p - g * q * qk);
        qk *= q;
    }
    return f;
}

void append_atoms(const AWLaw& law, MixedMeasure& m) {
    const int J = qproduct_terms(law.q);
    for (int gi = 0; gi < 4; ++gi) {
        if (!is_real(law.p[gi])) continue;
        const double g = law.p[gi].real();
        if (!(std::abs(g) > 1.0)) continue;

        std::array<cplx, 3> others;
        int oi = 0;
        for (int i = 0; i < 4; ++i)
            if (i != gi) others[oi++] = law.p[i];

        // Mass at the outermost atom of this generator.
        cplx num = qpoch(cplx(1.0 / (g * g), 0.0), law.q, J);
        for (int i = 0; i < 3; ++i)
            for (int j2 = i + 1; j2 < 3; ++j2)
                num *= qpoch(others[i] * others[j2], law.q, J);
        cplx den = qpoch(law.p[0] * law.p[1] * law.p[2] * law.p[3], law.q, J);
        for (int i = 0; i < 3; ++i) den *= qpoch(others[i] / g, law.q, J);
        const double mass0 = (num / den).real();

        double gq = g; // g q^j
        for (int j = 0; std::abs(gq) >= 1.0 && j < 4096; ++j, gq *= law.q) {
            const double x = 0.5 * (gq + 1.0 / gq);
            double mass = mass0;
            if (j > 0) {
                const double g2 = g * g;
                double r = qpoch(g2, law.q, j) * (1.0 - g2 * std::pow(law.q, 2.0 * j)) /
                           (1.0 - g2) / qpoch(law.q, law.q, j) *
                           std::pow(law.q / g, static_cast<double>(j));
                cplx fo = 1.0;
                for (int i = 0; i < 3; ++i) fo *= atom_factor(others[i], g, law.q, j);
                mass = mass0 * r * fo.real();
            }
            m.atoms.push_back({x, mass});
            if (law.q == 0.0) break;
        }
    }
}

MixedMeasure build_fixed(const AWLaw& law, int n, const QuadSpec& spec,
                         ExecMode mode) {
    const int J = qproduct_terms(law.q);
    const double Kc = normalizing_constant(law);

    MixedMeasure m;
    m.lo = -1.0;
    m.hi = 1.0;
    m.nodes.resize(n);
    m.weights.resize(n);

    if (spec.spike_width > 0.0) {
        // theta = phi + width * tan(psi); Gauss-Legendre in psi resolves the
        // band of angular width around phi.
        const double phi = spec.spike_phi;
        const double w = spec.spike_width;
        const double plo = std::atan((0.0 - phi) / w);
        const double phi2 = std::atan((kPi - phi) / w);
        GLRule rule = gauss_legendre(n, plo, phi2);
#pragma omp parallel for schedule(static) if (mode == ExecMode::Parallel)
        for (int i = 0; i < n; ++i) {
            const double psi = rule.x[i];
            const double tp = std::tan(psi);
            const double theta = phi + w * tp;
            const double jac = w * (1.0 + tp * tp);
            m.nodes[i] = std::cos(theta);
            m.weights[i] = rule.w[i] * jac * theta_density(law, Kc, J, theta);
        }
    } else {
        GLRule rule = gauss_legendre(n, 0.0, kPi);
#pragma omp parallel for schedule(static) if (mode == ExecMode::Parallel)
        for (int i = 0; i < n; ++i) {
            m.nodes[i] = std::cos(rule.x[i]);
            m.weights[i] = rule.w[i] * theta_density(law, Kc, J, rule.x[i]);
        }
    }

    append_atoms(law, m);
    return m;
}

} // namespace

double MixedMeasure::mass() const {
    double s = 0.0;
    for (double w : weights) s += w;
    for (const Atom& a : atoms) s += a.mass;
    return s;
}

double MixedMeasure::moment_scaled(int n, double scale) const {
    double s = 0.0;
    for (size_t i = 0; i < nodes.size(); ++i)
        s += weights[i] * std::pow(nodes[i] / scale, n);
    for (const Atom& a : atoms) s += a.mass * std::pow(a.x / scale, n);
    return s;
}

double MixedMeasure::expect(const std::function<double(double)>& f,
                            ExecMode mode) const {
    const int n = static_cast<int>(nodes.size());
    double s = 0.0;
    if (mode == ExecMode::Parallel) {
#pragma omp parallel for reduction(+ : s) schedule(static)
        for (int i = 0; i < n; ++i) s += weights[i] * f(nodes[i]);
    } else {
        for (int i = 0; i < n; ++i) s += weights[i] * f(nodes[i]);
    }
    for (const Atom& a : atoms) s += a.mass * f(a.x);
    return s;
}

MixedMeasure MixedMeasure::affine(double scale, double shift) const {
    MixedMeasure out = *this;
    for (double& x : out.nodes) x = scale * x + shift;
    for (Atom& a : out.atoms) a.x = scale * a.x + shift;
    out.lo = scale * lo + shift;
    out.hi = scale * hi + shift;
    if (out.lo > out.hi) std::swap(out.lo, out.hi);
    return out;
}

void MixedMeasure::validate(double tol) const {
    const double m = mass();
    if (std::abs(m - 1.0) > tol) {
        std::ostringstream oss;
        oss << "measure mass " << m << " deviates from 1 beyond " << tol;
        throw MeasureValidationError(oss.str());
    }
    for (double w : weights)
        if (w < -1e-15) throw MeasureValidationError("negative quadrature weight");
    for (const Atom& a : atoms)
        if (a.mass < -1e-12) throw MeasureValidationError("negative atom mass");
}

MixedMeasure aw_measure(const AWLaw& law, const QuadSpec& spec, ExecMode mode) {
    int n = spec.n0;
    MixedMeasure prev = build_fixed(law, n, spec, mode);
    while (2 * n <= spec.max_n) {
        n *= 2;
        MixedMeasure next = build_fixed(law, n, spec, mode);
        double delta = std::abs(next.mass() - prev.mass());
        for (int k = 1; k <= 2; ++k)
            delta = std::max(delta, std::abs(next.moment(k) - prev.moment(k)));
        prev = std::move(next);
        if (delta <= spec.tol) return prev;
    }
    throw QuadratureFailure("quadrature did not converge within the node budget");
}

SupportEnvelope support_envelope(const AwParams& w, double t) {
    const double rt = std::sqrt(t);
    SupportEnvelope env{-2.0 * rt, 2.0 * rt};
    if (w.c > 0.0 && t < w.c * w.c) env.hi = w.c + t / w.c;
    if (w.a > 0.0 && w.a * rt > 1.0) env.hi = w.a * t + 1.0 / w.a;
    if (w.d < 0.0 && t < w.d * w.d) env.lo = w.d + t / w.d;
    if (w.b < 0.0 && -w.b * rt > 1.0) env.lo = w.b * t + 1.0 / w.b;
    return env;
}

namespace {

void record_hygiene(const MixedMeasure& m, const AwParams& w, double t) {
    const SupportEnvelope env = support_envelope(w, t);
    double excess = 0.0;
    double min_shift = 1e300;
    auto visit = [&](double x) {
        excess = std::max(excess, x - env.hi);
        excess = std::max(excess, env.lo - x);
        min_shift = std::min(min_shift, 1.0 + t + x);
    };
    for (double x : m.nodes) visit(x);
    for (const Atom& a : m.atoms) visit(a.x);
    g_hygiene.count += 1;
    g_hygiene.worst_mass_err = std::max(g_hygiene.worst_mass_err, std::abs(m.mass() - 1.0));
    g_hygiene.worst_support_excess = std::max(g_hygiene.worst_support_excess, excess);
    g_hygiene.min_shifted = std::min(g_hygiene.min_shifted, min_shift);
}

} // namespace

MixedMeasure marginal_z(const AwParams& w, double t, const QuadSpec& spec,
                        ExecMode mode) {
    if (!(t > 0.0)) throw DomainError("marginal_z requires t > 0");
    const double rt = std::sqrt(t);
    AWLaw law{{cplx(w.a * rt, 0.0), cplx(w.b * rt, 0.0), cplx(w.c / rt, 0.0),
               cplx(w.d / rt, 0.0)},
              w.q};
    MixedMeasure m = aw_measure(law, spec, mode).affine(2.0 * rt, 0.0);
    record_hygiene(m, w, t);
    return m;
}

MixedMeasure transition_z(const AwParams& w, double s, double t, double ztilde,
                          const QuadSpec& spec, ExecMode mode) {
    if (!(t > s && s >= 0.0)) throw DomainError("transition_z requires 0 <= s < t");
    const double rt = std::sqrt(t);
    cplx c3, c4;
    QuadSpec sp = spec;
    if (s == 0.0) {
        c3 = cplx(ztilde / rt, 0.0);
        c4 = cplx(0.0, 0.0);
    } else {
        const double r = std::sqrt(s / t);
        const double xt = ztilde / (2.0 * std::sqrt(s));
        if (std::abs(xt) <= 1.0) {
            // Conjugate pair r e^{+-i phi}; the kernel concentrates around
            // the angle phi as s approaches t.
            c3 = cplx(r * xt, r * std::sqrt(1.0 - xt * xt));
            c4 = std::conj(c3);
            sp.spike_phi = std::acos(std::clamp(r * xt, -1.0, 1.0));
            sp.spike_width = std::max(1.0 - r, 1e-8);
        } else {
            const double u = std::sqrt(xt * xt - 1.0);
            c3 = cplx(r * (xt + (xt > 0 ? u : -u)), 0.0);
            c4 = cplx(r * r / c3.real(), 0.0);
        }
    }
    AWLaw law{{cplx(w.a * rt, 0.0), cplx(w.b * rt, 0.0), c3, c4}, w.q};
    MixedMeasure m = aw_measure(law, sp, mode).affine(2.0 * rt, 0.0);
    record_hygiene(m, w, t);
    return m;
}

const MeasureHygiene& hygiene() { return g_hygiene; }

void hygiene_reset() { g_hygiene = MeasureHygiene{}; }

} // namespace asepqh
