#include "toa/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "toa/errors.hpp"
#include "toa/observables.hpp"
#include "toa/oscquad.hpp"

namespace toa {

namespace {

double prefactor(const TwoPacketParams& params) {
    return 2.0 * std::sqrt(2.0 * std::numbers::pi) * params.delta_p /
           (params.constants.mass * params.constants.h());
}

double interference_phase(const TwoPacketParams& params, double tau, double X) {
    const double m = params.constants.mass;
    return ((params.p2 * params.p2 - params.p1 * params.p1) * tau / (2.0 * m) +
            (params.p2 - params.p1) * (params.x0 - X)) /
           params.constants.hbar;
}

}  // namespace

void validate_params(const TwoPacketParams& params) {
    if (!(params.p1 > 0.0) || !(params.p2 > params.p1)) {
        throw error("two-packet params require p2 > p1 > 0");
    }
    if (!(params.delta_p > 0.0)) throw error("two-packet params require delta_p > 0");
    if (params.delta_p > (params.p2 - params.p1) / 10.0) {
        throw error("two-packet params require delta_p <= (p2 - p1)/10 so the packets do "
                    "not overlap");
    }
    const double norm = params.alpha1 * params.alpha1 + params.alpha2 * params.alpha2;
    if (std::abs(norm - 1.0) > 1e-12) {
        throw error("two-packet weights must satisfy alpha1^2 + alpha2^2 = 1, got " +
                    std::to_string(norm));
    }
}

WavePacketSpec to_spec(const TwoPacketParams& params) {
    validate_params(params);
    WavePacketSpec spec;
    spec.direction = Direction::plus;
    spec.components = {
        {params.alpha1, params.p1, params.delta_p, params.x0},
        {params.alpha2, params.p2, params.delta_p, params.x0},
    };
    return spec;
}

double interference_period(const TwoPacketParams& params) {
    const double m = params.constants.mass;
    return 4.0 * std::numbers::pi * params.constants.hbar * m /
           (params.p2 * params.p2 - params.p1 * params.p1);
}

double asym_current(const TwoPacketParams& params, double tau, double X) {
    validate_params(params);
    const double steady = params.alpha1 * params.alpha1 * params.p1 +
                          params.alpha2 * params.alpha2 * params.p2;
    const double cross = params.alpha1 * params.alpha2 * (params.p1 + params.p2);
    return prefactor(params) * (steady + cross * std::cos(interference_phase(params, tau, X)));
}

double asym_positive_current(const TwoPacketParams& params, double tau, double X) {
    validate_params(params);
    const double steady = params.alpha1 * params.alpha1 * params.p1 +
                          params.alpha2 * params.alpha2 * params.p2;
    // |a1 sqrt(p1) e^{-i th1} + a2 sqrt(p2) e^{-i th2}|^2: the interference
    // weight is 2 a1 a2 sqrt(p1 p2) <= steady by AM-GM, so this never goes
    // negative.
    const double cross =
        2.0 * params.alpha1 * params.alpha2 * std::sqrt(params.p1 * params.p2);
    return prefactor(params) * (steady + cross * std::cos(interference_phase(params, tau, X)));
}

NegativeFluxDiagnostics negative_flux_condition(const TwoPacketParams& params, double margin) {
    validate_params(params);
    if (params.alpha2 == 0.0) {
        throw error("negative-flux condition needs alpha2 != 0");
    }
    NegativeFluxDiagnostics d;
    d.ratio1 = params.alpha1 / params.alpha2;
    d.ratio2 = params.p2 / params.p1;
    d.satisfied = d.ratio1 >= margin && d.ratio2 / d.ratio1 >= margin;
    const double steady = params.alpha1 * params.alpha1 * params.p1 +
                          params.alpha2 * params.alpha2 * params.p2;
    const double cross = params.alpha1 * params.alpha2 * (params.p1 + params.p2);
    d.min_current_estimate = prefactor(params) * (steady - std::abs(cross));
    return d;
}

double asym_interference_current(const TwoPacketParams& params, double tau, double X,
                                 double margin) {
    const NegativeFluxDiagnostics d = negative_flux_condition(params, margin);
    if (!d.satisfied) {
        throw error("interference-dominated approximation requires the negative-flux "
                    "condition (ratios " +
                    std::to_string(d.ratio1) + ", " + std::to_string(d.ratio2) + ")");
    }
    const double m = params.constants.mass;
    const double theta = (params.p2 * params.p2 * tau / (2.0 * m) +
                          params.p2 * (params.x0 - X)) /
                         params.constants.hbar;
    return prefactor(params) * params.alpha1 * params.alpha2 * params.p2 * std::cos(theta);
}

std::vector<SemiclassicalPoint> semiclassical_scan(const MomentumAmplitude& a, double tau,
                                                   double X,
                                                   const std::vector<double>& scales) {
    if (scales.empty()) throw error("semiclassical scan needs at least one scale");
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (!(scales[i] > 0.0)) throw error("hbar scales must be positive");
        if (i > 0 && !(scales[i] < scales[i - 1])) {
            throw error("hbar scales must be strictly decreasing");
        }
    }

    // The stationary point and the limit density are scale-free: the envelope
    // and the action-valued phase stay fixed while 1/hbar grows.
    const PhaseContext ctx{tau, X, a.direction, a.constants};
    const StationaryPhaseResult sp = stationary_phase_value(a, WeightKind::sqrt_p, ctx);
    // |value|^2/(m h) collapses to (p0/m) |psi(p0)|^2 / |chi''(p0)|
    const double asym_density = std::norm(sp.value) / (a.constants.mass * a.constants.h());

    const PolarForm polar = polar_decompose(a);

    std::vector<SemiclassicalPoint> out;
    out.reserve(scales.size());
    for (double scale : scales) {
        SemiclassicalPoint row;
        row.scale = scale;
        row.asym_density = asym_density;

        MomentumAmplitude scaled = a;
        scaled.constants.hbar = a.constants.hbar * scale;
        const double inv_hbar = 1.0 / scaled.constants.hbar;
        for (std::size_t i = 0; i < scaled.values.size(); ++i) {
            const double theta = polar.phase[i] * inv_hbar;
            scaled.values[i] =
                polar.modulus[i] * Complex{std::cos(theta), std::sin(theta)};
        }

        try {
            const Complex amp = arrival_amplitude(scaled, tau, X);
            row.exact_density = std::norm(amp);
            row.abs_error = std::abs(row.exact_density - asym_density);
        } catch (const nyquist_error& e) {
            row.ok = false;
            row.note = e.what();
        }
        out.push_back(row);
    }
    return out;
}

}  // namespace toa
