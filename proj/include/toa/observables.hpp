#ifndef TOA_OBSERVABLES_HPP
#define TOA_OBSERVABLES_HPP

#include <vector>

#include "toa/common.hpp"
#include "toa/oscquad.hpp"
#include "toa/packets.hpp"

namespace toa {

// Arrival amplitude Psi(tau; X) = (m h)^(-1/2) I[sqrt q].
Complex arrival_amplitude(const MomentumAmplitude& a, double tau, double X);

// Position-space amplitude psi(x) = h^(-1/2) I[1] evaluated at tau = 0 with
// the kernel exp(i sign q x / hbar); evolve the state first for t != 0.
Complex position_amplitude(const MomentumAmplitude& a, double x);

struct ArrivalDistribution {
    std::vector<double> tau_nodes;
    std::vector<Complex> amplitudes;
    std::vector<double> densities;  // |amplitude|^2, nonnegative by construction
    double X = 0.0;
    Direction direction = Direction::plus;
    double integral = 0.0;  // trapezoid integral of densities over the window
    double tail = 0.0;      // 1 - integral, the window-adequacy diagnostic
};

// Uniform tau grid over [t_lo, t_hi] with n_tau nodes; the sweep over nodes
// runs in parallel.
ArrivalDistribution arrival_distribution(const MomentumAmplitude& a, double t_lo, double t_hi,
                                         int n_tau, double X);

// Direction-aligned current expectation  (1/mh) Re( I[q]* I[1] ); can be
// negative even for directed states.
double current_expectation(const MomentumAmplitude& a, double tau, double X);

// Positive-definite current expectation (1/mh) |I[sqrt q]|^2; identical to
// the arrival density at the same (tau, X).
double positive_current_expectation(const MomentumAmplitude& a, double tau, double X);

struct CurrentSeries {
    std::vector<double> tau_nodes;
    std::vector<double> j_values;      // direction-aligned <J(X)>
    std::vector<double> jplus_values;  // <J+(X)>, nonnegative
    double X = 0.0;
};

CurrentSeries current_series(const MomentumAmplitude& a, double t_lo, double t_hi, int n_tau,
                             double X);

// Mean arrival time from the spectral density: integral of tau*density over
// the window, normalized by the window integral. Throws window_error when the
// window's tail diagnostic exceeds p_tol.
double mean_time_spectral(const ArrivalDistribution& d, double p_tol = defaults::p_tol);

// Mean arrival time from the ordinary current over the same kind of window.
double mean_time_current(const MomentumAmplitude& a, double t_lo, double t_hi, int n_tau,
                         double X, double p_tol = defaults::p_tol,
                         double edge_tol = defaults::edge_tol);

// Mean arrival time from the symmetrized Aharonov-Bohm operator
// (1/2)[(X - Xhat)(m/p) + (m/p)(X - Xhat)], with Xhat = i hbar d/dp applied
// through 4th-order differences. The expectation of a symmetrized operator is
// real; the imaginary residue is reported through *imag_residue when given
// (values above defaults::mean_residue_tol flag a discretization problem).
// Throws guard_error when weight near p_min violates the small-p condition.
double mean_time_ab_operator(const MomentumAmplitude& a, double X,
                             double* imag_residue = nullptr,
                             double edge_tol = defaults::edge_tol);

// Same with the Grot-Rovelli-Tate ordering sqrt(m/p)(X - Xhat)sqrt(m/p).
double mean_time_grt_operator(const MomentumAmplitude& a, double X,
                              double* imag_residue = nullptr,
                              double edge_tol = defaults::edge_tol);

struct TotalArrivalProbability {
    double jplus_total = 0.0;
    double j_total = 0.0;
};

// Trapezoid integrals of both currents over the window. For a unit-norm free
// state and an adequate window the two agree within 1e-4 and each is 1 within
// p_tol; a partial window yields the captured fraction.
TotalArrivalProbability total_arrival_probability(const MomentumAmplitude& a, double t_lo,
                                                  double t_hi, int n_tau, double X);

struct WignerGrid {
    std::vector<double> x_nodes;
    std::vector<double> p_nodes;
    std::vector<double> values;  // row-major, values[ix * p_nodes.size() + ip]
};

// Pure-state Wigner function computed from the position-space transform,
//   f_W(x,p) = (1/pi hbar) Int dy conj(psi(x+y)) psi(x-y) exp(2 i p y/hbar).
// Coordinates are direction-aligned (x and p carry the packet's own sign
// convention). Each value's imaginary residue must stay below
// defaults::wigner_imag_tol relative to the peak or numeric_error is thrown.
WignerGrid wigner_function(const MomentumAmplitude& a, const std::vector<double>& x_nodes,
                           const std::vector<double>& p_nodes);

// Flux moment of the Wigner function of the state evolved to tau:
// Int f_W(X, q; tau) (q/m) dq, which must reproduce current_expectation.
double wigner_current_check(const MomentumAmplitude& a, double tau, double X);

// Phase-space support estimate (aligned frame), used to size Wigner grids.
struct PhaseSpaceMoments {
    double x_mean = 0.0;
    double x_sigma = 0.0;
    double q_mean = 0.0;
    double q_sigma = 0.0;
};

PhaseSpaceMoments phase_space_moments(const MomentumAmplitude& a);

}  // namespace toa

#endif
