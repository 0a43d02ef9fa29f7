#ifndef TOA_SCATTERING_HPP
#define TOA_SCATTERING_HPP

#include "toa/common.hpp"
#include "toa/packets.hpp"

namespace toa {

// Closed-form transmission models for 1-D barriers. |T(p)| <= 1 for p > 0 and
// |T|^2 + |R|^2 = 1 holds algebraically for every model.
class TransmissionModel {
public:
    enum class Kind { free, delta_barrier, rectangular };

    static TransmissionModel free_particle();

    Kind kind() const { return kind_; }

    Complex transmission(double p) const;
    Complex reflection(double p) const;

private:
    friend TransmissionModel delta_barrier(double strength, const PhysicalConstants& c);
    friend TransmissionModel rectangular_barrier(double height, double width,
                                                 const PhysicalConstants& c);

    Kind kind_ = Kind::free;
    PhysicalConstants constants_;
    double strength_ = 0.0;  // delta barrier: potential V(x) = strength * delta(x)
    double height_ = 0.0;    // rectangular barrier height V0
    double width_ = 0.0;     // rectangular barrier width L
};

// T(p) = 1 / (1 + i m strength / (hbar p)); strength >= 0.
TransmissionModel delta_barrier(double strength, const PhysicalConstants& c);

// Standard two-branch rectangular-barrier amplitude, continuous through the
// matching point p^2/2m = V0; height > 0, width > 0.
TransmissionModel rectangular_barrier(double height, double width, const PhysicalConstants& c);

struct TransmitResult {
    MomentumAmplitude state;        // renormalized freely evolving transmitted state
    double transmitted_norm = 0.0;  // pre-normalization norm = total transmission probability
};

// Applies T(q) pointwise to a left-incident state and renormalizes by the
// transmitted norm. Throws guard_error for an opaque barrier (norm underflow)
// and error for direction_minus input.
TransmitResult transmit(const MomentumAmplitude& a_in, const TransmissionModel& model);

}  // namespace toa

#endif
