#ifndef TOA_PACKETS_HPP
#define TOA_PACKETS_HPP

#include <vector>

#include "toa/common.hpp"
#include "toa/grid.hpp"

namespace toa {

// One Gaussian component of a momentum-space packet. `center` and `spread`
// are the mean and standard deviation of the component's momentum density;
// `origin` is the spatial center encoded as the linear phase -q*origin/hbar.
struct GaussianComponent {
    double weight = 1.0;  // real, may be negative
    double center = 1.0;  // > 0
    double spread = 0.1;  // > 0
    double origin = 0.0;
};

struct WavePacketSpec {
    std::vector<GaussianComponent> components;
    Direction direction = Direction::plus;
};

// Fraction of the packet's momentum density leaking onto the wrong-sign
// half-line, sum_j w_j^2 * erfc(center_j / (sqrt(2) spread_j)) / 2 normalized
// by sum_j w_j^2. Cross terms are neglected; for non-overlapping components
// (the only regime the builder accepts) this is an upper-bound estimate.
double wrong_sign_tail_weight(const WavePacketSpec& spec);

// Throws on empty spec, non-positive centers/spreads, or a wrong-sign tail
// above tail_tol (the testable surrogate for the directed-state constraint).
void validate_spec(const WavePacketSpec& spec, double tail_tol = defaults::tail_tol);

// Default momentum window for a spec: 8-spread margins around all components,
// with the lower edge clipped to stay positive.
void default_window(const WavePacketSpec& spec, double& p_lo, double& p_hi);

// Sampled momentum amplitude <eps*q|psi> on a positive grid. Plain aggregate
// so tests can fill in arbitrary sampled values.
struct MomentumAmplitude {
    MomentumGrid grid;
    std::vector<Complex> values;
    Direction direction = Direction::plus;
    PhysicalConstants constants;
};

// Trapezoid discrete norm  sum_i w_i |psi_i|^2 * spacing.
double discrete_norm(const MomentumAmplitude& a);

double max_abs2(const MomentumAmplitude& a);

// Rescales to unit discrete norm. Norms within defaults::norm_snap of unity
// are left untouched, which makes normalization bitwise idempotent.
void normalize(MomentumAmplitude& a);

// True when both endpoint intensities are below edge_tol * peak intensity.
bool edge_decay_ok(const MomentumAmplitude& a, double edge_tol = defaults::edge_tol);

// Synthesizes the Gaussian superposition on the given grid and renormalizes.
// Throws grid_error when the grid does not cover some component's 8-spread
// window, guard_error when the synthesized norm underflows.
MomentumAmplitude build_amplitude(const WavePacketSpec& spec, const MomentumGrid& grid,
                                  const PhysicalConstants& c);

// Polar form psi(q) = modulus(q) * exp(i*phase(q)/hbar). `phase` carries
// action units and is unwrapped to be continuous along the grid (adjacent
// jumps beyond pi*hbar removed by 2*pi*hbar shifts). Outside the support
// window the phase is extended as a constant.
struct PolarForm {
    std::vector<double> modulus;
    std::vector<double> phase;
    int support_lo = 0;  // first node with modulus above the phase floor
    int support_hi = 0;  // last such node
};

// Throws phase_error when the modulus underflows inside the support window
// (e.g. between well-separated components).
PolarForm polar_decompose(const MomentumAmplitude& a);

// Free evolution by dt: multiplies each sample by exp(-i q^2 dt / (2 m hbar)).
MomentumAmplitude free_evolve(const MomentumAmplitude& a, double dt);

}  // namespace toa

#endif
