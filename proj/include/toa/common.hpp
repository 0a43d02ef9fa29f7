#ifndef TOA_COMMON_HPP
#define TOA_COMMON_HPP

#include <complex>

namespace toa {

using Complex = std::complex<double>;

// The only dimensional knobs of the whole library. h = 2*pi*hbar is always
// derived, never stored.
struct PhysicalConstants {
    double hbar = 1.0;
    double mass = 1.0;

    double h() const { return 2.0 * 3.14159265358979323846 * hbar; }
};

// Propagation direction of a directed state: plus means support on p > 0
// (arrival from the left), minus means support on p < 0 (arrival from the
// right). All momentum grids store the aligned magnitude q = |p| > 0.
enum class Direction : int {
    plus = +1,
    minus = -1,
};

inline double direction_sign(Direction d) { return d == Direction::plus ? 1.0 : -1.0; }

namespace defaults {

inline constexpr double tail_tol = 1e-8;   // wrong-sign momentum leakage bound
inline constexpr double norm_tol = 1e-6;   // discrete-norm tolerance after normalization
inline constexpr double edge_tol = 1e-12;  // endpoint |psi|^2 decay, relative to peak
inline constexpr double p_tol = 1e-3;      // tau-window adequacy (tail mass) bound

inline constexpr int grid_floor = 4096;       // minimum momentum-grid size
inline constexpr int grid_cap = 1 << 22;      // refusal threshold for grid sizing
inline constexpr double window_sigmas = 8.0;  // Gaussian window half-width in spreads

// Oscillation-safety rule: grid spacing must keep the sampled phase increment
// below pi/4 per step (8x oversampling of the Nyquist limit).
inline constexpr double max_phase_step = 3.14159265358979323846 / 4.0;

// Modulus below this fraction of the peak has numerically undefined phase.
inline constexpr double phase_floor_rel = 1e-30;

// Norms within this of unity are treated as exactly unity by normalize(),
// which makes renormalization bitwise idempotent.
inline constexpr double norm_snap = 1e-12;

inline constexpr double divergence_guard = 1e-8;  // small-p refusal for operator means
inline constexpr double mean_residue_tol = 1e-6;  // imaginary residue flag for operator means
inline constexpr double wigner_imag_tol = 1e-10;  // imaginary residue bound for Wigner values
inline constexpr double negative_flux_margin = 3.0;

}  // namespace defaults

}  // namespace toa

#endif
