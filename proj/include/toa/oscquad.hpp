#ifndef TOA_OSCQUAD_HPP
#define TOA_OSCQUAD_HPP

#include "toa/common.hpp"
#include "toa/grid.hpp"
#include "toa/kernels.hpp"
#include "toa/packets.hpp"

namespace toa {

// Weight f(q) of the oscillatory functional I[f].
enum class WeightKind {
    unity,
    sqrt_p,
    linear_p,
};

// Detection context (tau, X) for one functional evaluation.
struct PhaseContext {
    double tau = 0.0;
    double X = 0.0;
    Direction direction = Direction::plus;
    PhysicalConstants constants;
};

// Largest sampled slope |d(phase)/dq| of the amplitude's own phase, in action
// units, estimated from wrapped phase differences between adjacent nodes with
// well-defined phase. Exact for the builder's linear phases on grids that
// satisfy the oscillation-safety rule; an already-aliased hand-built input can
// fool any sampled estimate, so grids should come from choose_grid.
double envelope_phase_slope(const MomentumAmplitude& a);

// Throws nyquist_error when the grid spacing would let the total sampled
// phase step exceed defaults::max_phase_step for this context.
void require_nyquist(const MomentumAmplitude& a, const PhaseContext& ctx);

// I[f] = sum f(q) psi(q) exp(-i((q^2/2m)tau - sign*q*X)/hbar) * trapezoid
// weights. Direct complex summation; no unwrapping involved.
Complex eval_functional(const MomentumAmplitude& a, WeightKind f, const PhaseContext& ctx);

// I[1], I[sqrt q], I[q] in a single pass.
kernels::Triple eval_functional_triple(const MomentumAmplitude& a, const PhaseContext& ctx);

struct GridOptions {
    int n_floor = defaults::grid_floor;
    int n_cap = defaults::grid_cap;
};

// Default window plus oscillation-safe sizing: spacing small enough that the
// phase (q^2/2m)tau_max + |X| q + max|origin| q steps by at most pi/4 per
// node anywhere on the window. Throws grid_error when the cap binds.
MomentumGrid choose_grid(const WavePacketSpec& spec, double tau_max, double X,
                         const PhysicalConstants& c, const GridOptions& opts = {});

// Root q0 of chi'(q) = phi'(q) - (q/m)tau + sign*X, bracketed on the sampled
// sign change and refined by secant steps. Throws stationary_error when
// tau = 0 or no sign change exists in the support window.
double find_stationary_point(const MomentumAmplitude& a, const PhaseContext& ctx);

struct StationaryPhaseResult {
    double p0 = 0.0;
    double chi_at_p0 = 0.0;   // action
    double chi_second = 0.0;  // action per momentum^2
    Complex value;            // leading-order I[f]
};

// Leading-order stationary-phase value
//   exp(i pi/4 sgn(chi'')) exp(i chi(q0)/hbar) f(q0) |psi(q0)| sqrt(h/|chi''|).
// chi'' comes from centered second differences of the unwrapped phase minus
// tau/m; throws stationary_error when |chi''| falls below the degeneracy
// threshold.
StationaryPhaseResult stationary_phase_value(const MomentumAmplitude& a, WeightKind f,
                                             const PhaseContext& ctx);

}  // namespace toa

#endif
