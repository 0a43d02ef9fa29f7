#include "toa/oscquad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "toa/errors.hpp"

namespace toa {

namespace {

kernels::Oscillation make_oscillation(const PhaseContext& ctx) {
    const double hbar = ctx.constants.hbar;
    const double mass = ctx.constants.mass;
    return {ctx.tau / (2.0 * mass * hbar), direction_sign(ctx.direction) * ctx.X / hbar};
}

std::vector<double> make_weights(const MomentumAmplitude& a, WeightKind f) {
    const std::size_t n = a.values.size();
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double q = a.grid.nodes[i];
        double fw = 1.0;
        switch (f) {
            case WeightKind::unity: fw = 1.0; break;
            case WeightKind::sqrt_p: fw = std::sqrt(q); break;
            case WeightKind::linear_p: fw = q; break;
        }
        w[i] = fw * a.grid.spacing;
    }
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

// Kinematic phase slope bound of the kernel plus the sampled slope of the
// state's own phase, in action units.
double total_phase_slope(const MomentumAmplitude& a, const PhaseContext& ctx) {
    const double kinematic =
        a.grid.p_max * std::abs(ctx.tau) / ctx.constants.mass + std::abs(ctx.X);
    return kinematic + envelope_phase_slope(a);
}

double interp_quadratic(const std::vector<double>& nodes, const std::vector<double>& y,
                        std::size_t center, double q) {
    // 3-point Lagrange interpolation around `center` (assumed interior).
    const double x0 = nodes[center - 1];
    const double x1 = nodes[center];
    const double x2 = nodes[center + 1];
    const double l0 = (q - x1) * (q - x2) / ((x0 - x1) * (x0 - x2));
    const double l1 = (q - x0) * (q - x2) / ((x1 - x0) * (x1 - x2));
    const double l2 = (q - x0) * (q - x1) / ((x2 - x0) * (x2 - x1));
    return l0 * y[center - 1] + l1 * y[center] + l2 * y[center + 1];
}

}  // namespace

double envelope_phase_slope(const MomentumAmplitude& a) {
    const std::size_t n = a.values.size();
    if (n < 2) return 0.0;
    double peak = 0.0;
    for (const Complex& v : a.values) peak = std::max(peak, std::abs(v));
    if (peak <= 0.0) return 0.0;
    const double floor = defaults::phase_floor_rel * peak;

    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(a.values[i]) < floor || std::abs(a.values[i + 1]) < floor) continue;
        const double dphi = std::arg(a.values[i + 1] * std::conj(a.values[i]));
        worst = std::max(worst, std::abs(dphi));
    }
    return worst * a.constants.hbar / a.grid.spacing;
}

void require_nyquist(const MomentumAmplitude& a, const PhaseContext& ctx) {
    const double slope = total_phase_slope(a, ctx);
    const double step = slope * a.grid.spacing / ctx.constants.hbar;
    if (step > defaults::max_phase_step) {
        throw nyquist_error("grid spacing " + std::to_string(a.grid.spacing) +
                            " gives a sampled phase step of " + std::to_string(step) +
                            " rad at tau=" + std::to_string(ctx.tau) +
                            ", X=" + std::to_string(ctx.X) + "; refusing to alias");
    }
}

Complex eval_functional(const MomentumAmplitude& a, WeightKind f, const PhaseContext& ctx) {
    if (ctx.direction != a.direction) {
        throw error("phase context direction does not match the amplitude direction");
    }
    require_nyquist(a, ctx);
    const std::vector<double> w = make_weights(a, f);
    return kernels::weighted_sum(a.values, a.grid.nodes, w, make_oscillation(ctx));
}

kernels::Triple eval_functional_triple(const MomentumAmplitude& a, const PhaseContext& ctx) {
    if (ctx.direction != a.direction) {
        throw error("phase context direction does not match the amplitude direction");
    }
    require_nyquist(a, ctx);
    const std::size_t n = a.values.size();
    std::vector<double> w(n, a.grid.spacing);
    w.front() *= 0.5;
    w.back() *= 0.5;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = std::sqrt(a.grid.nodes[i]);
    return kernels::triple_sum(a.values, a.grid.nodes, sq, w, make_oscillation(ctx));
}

MomentumGrid choose_grid(const WavePacketSpec& spec, double tau_max, double X,
                         const PhysicalConstants& c, const GridOptions& opts) {
    if (!(tau_max >= 0.0)) throw error("choose_grid requires tau_max >= 0");
    validate_spec(spec);

    double p_lo = 0.0;
    double p_hi = 0.0;
    default_window(spec, p_lo, p_hi);

    double max_origin = 0.0;
    for (const GaussianComponent& g : spec.components) {
        max_origin = std::max(max_origin, std::abs(g.origin));
    }
    const double slope = p_hi * tau_max / c.mass + std::abs(X) + max_origin;

    int n = opts.n_floor;
    if (slope > 0.0) {
        const double spacing_req = defaults::max_phase_step * c.hbar / slope;
        const double needed = std::ceil((p_hi - p_lo) / spacing_req) + 1.0;
        if (needed > static_cast<double>(opts.n_cap)) {
            throw grid_error("oscillation-safe grid needs " + std::to_string(needed) +
                             " nodes, beyond the cap of " + std::to_string(opts.n_cap) +
                             "; the scenario needs windowing instead");
        }
        n = std::max(n, static_cast<int>(needed));
    }
    return make_uniform_grid(p_lo, p_hi, n);
}

double find_stationary_point(const MomentumAmplitude& a, const PhaseContext& ctx) {
    if (ctx.tau == 0.0) {
        throw stationary_error("stationary point undefined at tau = 0");
    }
    if (ctx.direction != a.direction) {
        throw error("phase context direction does not match the amplitude direction");
    }

    const PolarForm polar = polar_decompose(a);
    const std::size_t lo = static_cast<std::size_t>(polar.support_lo);
    const std::size_t hi = static_cast<std::size_t>(polar.support_hi);
    if (hi - lo < 2) throw stationary_error("support too narrow for a derivative estimate");

    const std::vector<double>& q = a.grid.nodes;
    const double spacing = a.grid.spacing;
    const double mass = ctx.constants.mass;
    const double sx = direction_sign(ctx.direction) * ctx.X;

    // chi'(q) sampled on interior support nodes via centered differences.
    std::vector<double> qs;
    std::vector<double> dchi;
    qs.reserve(hi - lo - 1);
    dchi.reserve(hi - lo - 1);
    for (std::size_t i = lo + 1; i < hi; ++i) {
        const double dphi = (polar.phase[i + 1] - polar.phase[i - 1]) / (2.0 * spacing);
        qs.push_back(q[i]);
        dchi.push_back(dphi - q[i] * ctx.tau / mass + sx);
    }

    std::size_t seg = qs.size();
    for (std::size_t i = 0; i + 1 < qs.size(); ++i) {
        if (dchi[i] == 0.0 || dchi[i] * dchi[i + 1] < 0.0) {
            seg = i;
            break;
        }
    }
    if (seg == qs.size()) {
        throw stationary_error("chi' has no sign change on the support window: no classical "
                               "arrival at this (tau, X)");
    }

    // Piecewise-linear chi'; bisection bracket plus secant refinement.
    double qa = qs[seg];
    double qb = qs[seg + 1];
    double fa = dchi[seg];
    double fb = dchi[seg + 1];
    if (fa == 0.0) return qa;
    if (fb == 0.0) return qb;

    auto eval_dchi = [&](double x) {
        std::size_t k = std::min(
            qs.size() - 2,
            static_cast<std::size_t>(std::max(0.0, (x - qs.front()) / spacing)));
        const double t = (x - qs[k]) / (qs[k + 1] - qs[k]);
        return dchi[k] + t * (dchi[k + 1] - dchi[k]);
    };

    const double tol = ctx.constants.hbar * 1e-10 / spacing;
    double x = qb - fb * (qb - qa) / (fb - fa);
    for (int iter = 0; iter < 64; ++iter) {
        const double fx = eval_dchi(x);
        if (std::abs(fx) < tol) return x;
        if (fa * fx < 0.0) {
            qb = x;
            fb = fx;
        } else {
            qa = x;
            fa = fx;
        }
        const double secant = qb - fb * (qb - qa) / (fb - fa);
        x = (secant > qa && secant < qb) ? secant : 0.5 * (qa + qb);
    }
    return x;
}

StationaryPhaseResult stationary_phase_value(const MomentumAmplitude& a, WeightKind f,
                                             const PhaseContext& ctx) {
    const double q0 = find_stationary_point(a, ctx);
    const PolarForm polar = polar_decompose(a);
    const std::vector<double>& q = a.grid.nodes;
    const double spacing = a.grid.spacing;

    // Interior support node nearest to q0.
    std::size_t center = static_cast<std::size_t>(
        std::lround((q0 - a.grid.p_min) / spacing));
    const std::size_t lo = static_cast<std::size_t>(polar.support_lo);
    const std::size_t hi = static_cast<std::size_t>(polar.support_hi);
    center = std::clamp(center, lo + 1, hi - 1);

    const double phi2 = (polar.phase[center + 1] - 2.0 * polar.phase[center] +
                         polar.phase[center - 1]) /
                        (spacing * spacing);
    const double chi2 = phi2 - ctx.tau / ctx.constants.mass;

    double chi_scale = 0.0;
    const double sx = direction_sign(ctx.direction) * ctx.X;
    for (std::size_t i = lo; i <= hi; ++i) {
        const double chi =
            polar.phase[i] - q[i] * q[i] * ctx.tau / (2.0 * ctx.constants.mass) + q[i] * sx;
        chi_scale = std::max(chi_scale, std::abs(chi));
    }
    const double window = a.grid.p_max - a.grid.p_min;
    const double degeneracy =
        1e-12 * std::max(chi_scale, ctx.constants.hbar) / (window * window);
    if (std::abs(chi2) < degeneracy) {
        throw stationary_error("degenerate stationary point: |chi''| = " +
                               std::to_string(std::abs(chi2)) + " below threshold");
    }

    const double mod0 = interp_quadratic(q, polar.modulus, center, q0);
    const double phi0 = interp_quadratic(q, polar.phase, center, q0);
    const double chi0 =
        phi0 - q0 * q0 * ctx.tau / (2.0 * ctx.constants.mass) + q0 * sx;

    double f0 = 1.0;
    switch (f) {
        case WeightKind::unity: f0 = 1.0; break;
        case WeightKind::sqrt_p: f0 = std::sqrt(q0); break;
        case WeightKind::linear_p: f0 = q0; break;
    }

    const double hbar = ctx.constants.hbar;
    const double corner = std::numbers::pi / 4.0 * (chi2 > 0.0 ? 1.0 : -1.0);
    const double theta = corner + chi0 / hbar;
    const double magnitude = f0 * mod0 * std::sqrt(ctx.constants.h() / std::abs(chi2));

    StationaryPhaseResult out;
    out.p0 = q0;
    out.chi_at_p0 = chi0;
    out.chi_second = chi2;
    out.value = magnitude * Complex{std::cos(theta), std::sin(theta)};
    return out;
}

}  // namespace toa
