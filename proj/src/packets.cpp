#include "toa/packets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "toa/errors.hpp"

namespace toa {

namespace {

constexpr double kNormUnderflow = 1e-300;

double component_tail(const GaussianComponent& g) {
    // weight of the component's momentum density on the wrong-sign half-line
    return 0.5 * std::erfc(g.center / (std::numbers::sqrt2 * g.spread));
}

}  // namespace

double wrong_sign_tail_weight(const WavePacketSpec& spec) {
    double num = 0.0;
    double den = 0.0;
    for (const GaussianComponent& g : spec.components) {
        const double w2 = g.weight * g.weight;
        num += w2 * component_tail(g);
        den += w2;
    }
    if (den <= 0.0) return 0.0;
    return num / den;
}

void validate_spec(const WavePacketSpec& spec, double tail_tol) {
    if (spec.components.empty()) {
        throw error("wave packet spec has no components");
    }
    for (std::size_t j = 0; j < spec.components.size(); ++j) {
        const GaussianComponent& g = spec.components[j];
        if (!(g.center > 0.0)) {
            throw error("component " + std::to_string(j) + ": center must be > 0");
        }
        if (!(g.spread > 0.0)) {
            throw error("component " + std::to_string(j) + ": spread must be > 0");
        }
    }
    const double tail = wrong_sign_tail_weight(spec);
    if (!(tail < tail_tol)) {
        throw error("wrong-sign momentum tail " + std::to_string(tail) +
                    " violates the directed-state bound " + std::to_string(tail_tol));
    }
}

void default_window(const WavePacketSpec& spec, double& p_lo, double& p_hi) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    double min_center = std::numeric_limits<double>::infinity();
    for (const GaussianComponent& g : spec.components) {
        lo = std::min(lo, g.center - defaults::window_sigmas * g.spread);
        hi = std::max(hi, g.center + defaults::window_sigmas * g.spread);
        min_center = std::min(min_center, g.center);
    }
    p_lo = std::max(lo, 1e-6 * min_center);
    p_hi = hi;
}

double discrete_norm(const MomentumAmplitude& a) {
    const std::size_t n = a.values.size();
    if (n < 2) return 0.0;
    double acc = 0.5 * std::norm(a.values.front()) + 0.5 * std::norm(a.values.back());
    for (std::size_t i = 1; i + 1 < n; ++i) acc += std::norm(a.values[i]);
    return acc * a.grid.spacing;
}

double max_abs2(const MomentumAmplitude& a) {
    double m = 0.0;
    for (const Complex& v : a.values) m = std::max(m, std::norm(v));
    return m;
}

void normalize(MomentumAmplitude& a) {
    const double n = discrete_norm(a);
    if (n <= kNormUnderflow) {
        throw guard_error("amplitude norm underflow; nothing to normalize");
    }
    if (std::abs(n - 1.0) <= defaults::norm_snap) return;  // idempotence snap
    const double scale = 1.0 / std::sqrt(n);
    for (Complex& v : a.values) v *= scale;
}

bool edge_decay_ok(const MomentumAmplitude& a, double edge_tol) {
    if (a.values.empty()) return false;
    const double peak = max_abs2(a);
    if (peak <= 0.0) return false;
    return std::norm(a.values.front()) <= edge_tol * peak &&
           std::norm(a.values.back()) <= edge_tol * peak;
}

MomentumAmplitude build_amplitude(const WavePacketSpec& spec, const MomentumGrid& grid,
                                  const PhysicalConstants& c) {
    validate_spec(spec);
    double want_lo = 0.0;
    double want_hi = 0.0;
    default_window(spec, want_lo, want_hi);
    if (grid.p_min > want_lo || grid.p_max < want_hi) {
        throw grid_error("grid [" + std::to_string(grid.p_min) + ", " +
                         std::to_string(grid.p_max) + "] does not cover the packet window [" +
                         std::to_string(want_lo) + ", " + std::to_string(want_hi) + "]");
    }

    MomentumAmplitude a;
    a.grid = grid;
    a.direction = spec.direction;
    a.constants = c;
    a.values.assign(grid.nodes.size(), Complex{0.0, 0.0});

    for (const GaussianComponent& g : spec.components) {
        const double norm_factor =
            std::pow(2.0 * std::numbers::pi * g.spread * g.spread, -0.25);
        const double phase_slope = -g.origin / c.hbar;
        for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
            const double q = grid.nodes[i];
            const double arg = (q - g.center) / (2.0 * g.spread);
            const double envelope = g.weight * norm_factor * std::exp(-arg * arg);
            const double theta = phase_slope * q;
            a.values[i] += envelope * Complex{std::cos(theta), std::sin(theta)};
        }
    }

    const double n = discrete_norm(a);
    if (n <= kNormUnderflow) {
        throw guard_error("synthesized packet norm underflow (all-zero or cancelling spec)");
    }
    normalize(a);
    return a;
}

PolarForm polar_decompose(const MomentumAmplitude& a) {
    const std::size_t n = a.values.size();
    if (n == 0) throw error("polar decomposition of an empty amplitude");

    PolarForm out;
    out.modulus.resize(n);
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out.modulus[i] = std::abs(a.values[i]);
        peak = std::max(peak, out.modulus[i]);
    }
    if (peak <= 0.0) throw phase_error("zero amplitude has no phase");

    const double floor = defaults::phase_floor_rel * peak;
    std::size_t lo = 0;
    while (lo < n && out.modulus[lo] < floor) ++lo;
    std::size_t hi = n;
    while (hi > lo && out.modulus[hi - 1] < floor) --hi;
    for (std::size_t i = lo; i < hi; ++i) {
        if (out.modulus[i] < floor) {
            throw phase_error("modulus underflow inside the support window at node " +
                              std::to_string(i) + "; phase undefined there");
        }
    }
    out.support_lo = static_cast<int>(lo);
    out.support_hi = static_cast<int>(hi) - 1;

    // Unwrap over the support; constant extension outside.
    out.phase.assign(n, 0.0);
    const double hbar = a.constants.hbar;
    const double two_pi_hbar = 2.0 * std::numbers::pi * hbar;
    double offset = 0.0;
    double prev = hbar * std::arg(a.values[lo]);
    out.phase[lo] = prev;
    for (std::size_t i = lo + 1; i < hi; ++i) {
        const double raw = hbar * std::arg(a.values[i]);
        double jump = raw + offset - prev;
        while (jump > std::numbers::pi * hbar) {
            offset -= two_pi_hbar;
            jump -= two_pi_hbar;
        }
        while (jump < -std::numbers::pi * hbar) {
            offset += two_pi_hbar;
            jump += two_pi_hbar;
        }
        prev = raw + offset;
        out.phase[i] = prev;
    }
    for (std::size_t i = 0; i < lo; ++i) out.phase[i] = out.phase[lo];
    for (std::size_t i = hi; i < n; ++i) out.phase[i] = out.phase[hi - 1];
    return out;
}

MomentumAmplitude free_evolve(const MomentumAmplitude& a, double dt) {
    MomentumAmplitude out = a;
    const double quad = dt / (2.0 * a.constants.mass * a.constants.hbar);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const double q = a.grid.nodes[i];
        const double theta = -quad * q * q;
        out.values[i] *= Complex{std::cos(theta), std::sin(theta)};
    }
    return out;
}

}  // namespace toa
