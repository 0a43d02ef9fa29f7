#include "toa/scattering.hpp"

#include <cmath>
#include <string>

#include "toa/errors.hpp"

namespace toa {

namespace {

constexpr double kNormUnderflow = 1e-300;

double sinhc(double x) {
    if (std::abs(x) < 1e-4) return 1.0 + x * x / 6.0;
    return std::sinh(x) / x;
}

double sinc(double x) {
    if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

// Rectangular barrier [0, L] of height V0. Both branches share the analytic
// continuation cosh(kappa L) <-> cos(k2 L), sinhc <-> sinc, kappa^2 <-> -k2^2,
// which keeps T and R continuous through p^2/2m = V0.
struct RectangularAmplitudes {
    Complex T;
    Complex R;
};

RectangularAmplitudes rectangular_amplitudes(double p, double V0, double L,
                                             const PhysicalConstants& c) {
    const double k = p / c.hbar;
    const double E = p * p / (2.0 * c.mass);
    const double w = 2.0 * c.mass * (V0 - E) / (c.hbar * c.hbar);  // kappa^2, signed

    double ch;      // cosh(kappa L) or cos(k2 L)
    double shc;     // sinhc(kappa L) or sinc(k2 L)
    if (w >= 0.0) {
        const double kappa = std::sqrt(w);
        ch = std::cosh(kappa * L);
        shc = sinhc(kappa * L);
    } else {
        const double k2 = std::sqrt(-w);
        ch = std::cos(k2 * L);
        shc = sinc(k2 * L);
    }

    const Complex denom = Complex{ch, 0.5 * L * (w - k * k) / k * shc};
    const Complex crossing = Complex{std::cos(k * L), -std::sin(k * L)};
    RectangularAmplitudes out;
    out.T = crossing / denom;
    out.R = Complex{0.0, -0.5 * L * (w + k * k) / k * shc} / denom;
    return out;
}

}  // namespace

TransmissionModel TransmissionModel::free_particle() { return TransmissionModel{}; }

Complex TransmissionModel::transmission(double p) const {
    switch (kind_) {
        case Kind::free:
            return {1.0, 0.0};
        case Kind::delta_barrier: {
            const double kappa = constants_.mass * strength_ / constants_.hbar;
            return p / Complex{p, kappa};
        }
        case Kind::rectangular:
            return rectangular_amplitudes(p, height_, width_, constants_).T;
    }
    return {1.0, 0.0};
}

Complex TransmissionModel::reflection(double p) const {
    switch (kind_) {
        case Kind::free:
            return {0.0, 0.0};
        case Kind::delta_barrier: {
            const double kappa = constants_.mass * strength_ / constants_.hbar;
            return Complex{0.0, -kappa} / Complex{p, kappa};
        }
        case Kind::rectangular:
            return rectangular_amplitudes(p, height_, width_, constants_).R;
    }
    return {0.0, 0.0};
}

TransmissionModel delta_barrier(double strength, const PhysicalConstants& c) {
    if (!(strength >= 0.0)) throw error("delta barrier strength must be >= 0");
    TransmissionModel m;
    m.kind_ = TransmissionModel::Kind::delta_barrier;
    m.constants_ = c;
    m.strength_ = strength;
    return m;
}

TransmissionModel rectangular_barrier(double height, double width, const PhysicalConstants& c) {
    if (!(height > 0.0) || !(width > 0.0)) {
        throw error("rectangular barrier requires height > 0 and width > 0");
    }
    TransmissionModel m;
    m.kind_ = TransmissionModel::Kind::rectangular;
    m.constants_ = c;
    m.height_ = height;
    m.width_ = width;
    return m;
}

TransmitResult transmit(const MomentumAmplitude& a_in, const TransmissionModel& model) {
    if (a_in.direction != Direction::plus) {
        throw error("transmit handles left-incident states (direction plus) only");
    }

    TransmitResult out;
    out.state = a_in;
    for (std::size_t i = 0; i < out.state.values.size(); ++i) {
        out.state.values[i] *= model.transmission(a_in.grid.nodes[i]);
    }
    out.transmitted_norm = discrete_norm(out.state);
    if (out.transmitted_norm <= kNormUnderflow) {
        throw guard_error("transmitted norm underflow: the barrier is opaque for this packet");
    }
    normalize(out.state);
    return out;
}

}  // namespace toa
