#ifndef TOA_ASYMPTOTICS_HPP
#define TOA_ASYMPTOTICS_HPP

#include <string>
#include <vector>

#include "toa/common.hpp"
#include "toa/packets.hpp"

namespace toa {

// Superposition of two non-overlapping Gaussian packets with common spread
// and origin: alpha1*g(p1) + alpha2*g(p2), p2 > p1 > 0, unit weights
// alpha1^2 + alpha2^2 = 1, spread <= (p2 - p1)/10.
struct TwoPacketParams {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
    double delta_p = 0.0;
    double x0 = 0.0;
    PhysicalConstants constants;
};

void validate_params(const TwoPacketParams& params);

// Equivalent builder spec (two components, shared spread and origin).
WavePacketSpec to_spec(const TwoPacketParams& params);

// tau-period of the interference term, 2*pi*hbar*2m/(p2^2 - p1^2).
double interference_period(const TwoPacketParams& params);

// Leading-order (spread -> 0) closed form of the direction-aligned current:
//   (2 sqrt(2 pi)/(m h)) dp (a1^2 p1 + a2^2 p2
//       + a1 a2 (p1+p2) cos[((p2^2-p1^2)tau/2m + (p2-p1)(x0-X))/hbar]).
double asym_current(const TwoPacketParams& params, double tau, double X);

// Same form for the positive current with interference weight
// 2 a1 a2 sqrt(p1 p2), which AM-GM keeps below a1^2 p1 + a2^2 p2, so the
// value never goes negative.
double asym_positive_current(const TwoPacketParams& params, double tau, double X);

struct NegativeFluxDiagnostics {
    double ratio1 = 0.0;  // alpha1/alpha2
    double ratio2 = 0.0;  // p2/p1
    bool satisfied = false;
    double min_current_estimate = 0.0;  // closed-form minimum of asym_current over tau
};

// Operationalizes 1 << alpha1/alpha2 << p2/p1 with a multiplicative margin
// (default 3). Throws error when alpha2 = 0.
NegativeFluxDiagnostics negative_flux_condition(const TwoPacketParams& params,
                                                double margin = defaults::negative_flux_margin);

// Interference-dominated approximation of the current,
//   (2 sqrt(2 pi)/(m h)) dp a1 a2 p2 cos[(p2^2 tau/2m + p2(x0-X))/hbar];
// requires negative_flux_condition to be satisfied.
double asym_interference_current(const TwoPacketParams& params, double tau, double X,
                                 double margin = defaults::negative_flux_margin);

// One row of the semiclassical scan. A scale that fails the oscillation
// safety check is reported with ok = false and the scan continues.
struct SemiclassicalPoint {
    double scale = 0.0;
    double exact_density = 0.0;
    double asym_density = 0.0;
    double abs_error = 0.0;
    bool ok = true;
    std::string note;
};

// Rebuilds the oscillatory factors with hbar -> scale*hbar while keeping the
// modulus and the action-valued phase function fixed, then compares the exact
// arrival density |Psi|^2 against the stationary-phase limit
// (q0/m)|psi(q0)|^2 / |chi''(q0)| at each scale.
std::vector<SemiclassicalPoint> semiclassical_scan(const MomentumAmplitude& a, double tau,
                                                   double X,
                                                   const std::vector<double>& scales);

}  // namespace toa

#endif
