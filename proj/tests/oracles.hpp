#ifndef TOA_TESTS_ORACLES_HPP
#define TOA_TESTS_ORACLES_HPP

// Independent closed-form oracles used by the tests. Everything here is
// derived analytically and computed with std::complex arithmetic only; none
// of it shares code with the quadrature paths it checks.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "toa/common.hpp"
#include "toa/packets.hpp"

namespace oracles {

// Free propagation of a Gaussian superposition, evaluated in position space
// by completing the square in the momentum integral:
//   psi(x,t) = sum_j a_j (2 pi s^2)^(-1/4) h^(-1/2) sqrt(pi/A_j)
//              exp(B_j^2/(4 A_j) + C_j),
//   A_j = 1/(4 s^2) + i t/(2 m hbar),
//   B_j = c_j/(2 s^2) + i (sign*x - x0_j)/hbar,
//   C_j = -c_j^2/(4 s^2).
// The integral runs over the whole momentum line; for directed packets the
// wrong-sign tail this adds is below the packet's tail bound.
inline std::complex<double> gaussian_position_amplitude(const toa::WavePacketSpec& spec,
                                                        const toa::PhysicalConstants& c,
                                                        double x, double t) {
    using namespace std::complex_literals;
    const double sign = toa::direction_sign(spec.direction);
    std::complex<double> acc = 0.0;
    for (const toa::GaussianComponent& g : spec.components) {
        const double s2 = g.spread * g.spread;
        const std::complex<double> A = 1.0 / (4.0 * s2) + 1i * t / (2.0 * c.mass * c.hbar);
        const std::complex<double> B =
            g.center / (2.0 * s2) + 1i * (sign * x - g.origin) / c.hbar;
        const double C = -g.center * g.center / (4.0 * s2);
        const double norm = std::pow(2.0 * std::numbers::pi * s2, -0.25);
        acc += g.weight * norm * std::sqrt(std::numbers::pi / A) * std::exp(B * B / (4.0 * A) + C);
    }
    return acc / std::sqrt(c.h());
}

// Exact Wigner function of a single minimum-uncertainty Gaussian at t = 0:
// a positive 2-D Gaussian with sigma_x = hbar/(2 spread).
inline double gaussian_wigner(const toa::GaussianComponent& g, const toa::PhysicalConstants& c,
                              double x, double p) {
    const double sigma_p = g.spread;
    const double sigma_x = c.hbar / (2.0 * g.spread);
    const double dx = x - g.origin;
    const double dp = p - g.center;
    return std::exp(-dx * dx / (2.0 * sigma_x * sigma_x) -
                    dp * dp / (2.0 * sigma_p * sigma_p)) /
           (std::numbers::pi * c.hbar);
}

// Wrong-sign momentum weight of one Gaussian component.
inline double component_tail_weight(double center, double spread) {
    return 0.5 * std::erfc(center / (std::numbers::sqrt2 * spread));
}

inline double trapezoid(const std::vector<double>& y, double spacing) {
    double acc = 0.5 * (y.front() + y.back());
    for (std::size_t i = 1; i + 1 < y.size(); ++i) acc += y[i];
    return acc * spacing;
}

// <1/p> of the packet by direct quadrature of the sampled density.
inline double mean_inverse_momentum(const toa::MomentumAmplitude& a) {
    std::vector<double> integrand(a.values.size());
    std::vector<double> density(a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        density[i] = std::norm(a.values[i]);
        integrand[i] = density[i] / a.grid.nodes[i];
    }
    return trapezoid(integrand, a.grid.spacing) / trapezoid(density, a.grid.spacing);
}

}  // namespace oracles

#endif
