#include "toa/observables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "toa/errors.hpp"
#include "toa/kernels.hpp"

namespace toa {

namespace {

double trapezoid(const std::vector<double>& y, double spacing) {
    const std::size_t n = y.size();
    if (n < 2) return 0.0;
    double acc = 0.5 * (y.front() + y.back());
    for (std::size_t i = 1; i + 1 < n; ++i) acc += y[i];
    return acc * spacing;
}

std::vector<double> uniform_nodes(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + step * i;
    out.back() = hi;
    return out;
}

void require_window(double t_lo, double t_hi, int n_tau) {
    if (!(t_hi > t_lo) || n_tau < 2) {
        throw window_error("tau window [" + std::to_string(t_lo) + ", " +
                           std::to_string(t_hi) + "] with " + std::to_string(n_tau) +
                           " nodes is degenerate");
    }
}

// 4th-order first derivative, one-sided stencils on the two nodes nearest
// each edge.
std::vector<Complex> derivative4(const std::vector<Complex>& f, double spacing) {
    const std::size_t n = f.size();
    std::vector<Complex> d(n);
    if (n < 5) throw error("derivative stencil needs at least 5 nodes");
    const double inv12 = 1.0 / (12.0 * spacing);
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * inv12;
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * inv12;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        d[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) * inv12;
    }
    d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] -
                f[n - 5]) *
               inv12;
    d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] +
                3.0 * f[n - 5]) *
               inv12;
    return d;
}

Complex inner_product(const std::vector<Complex>& f, const std::vector<Complex>& g,
                      double spacing) {
    const std::size_t n = f.size();
    Complex acc = 0.5 * (std::conj(f.front()) * g.front() + std::conj(f.back()) * g.back());
    for (std::size_t i = 1; i + 1 < n; ++i) acc += std::conj(f[i]) * g[i];
    return acc * spacing;
}

// Shared guards for the momentum-representation operator means.
void require_operator_preconditions(const MomentumAmplitude& a, double edge_tol) {
    if (!edge_decay_ok(a, edge_tol)) {
        throw guard_error("endpoint decay violated: operator means need negligible weight at "
                          "the grid edges");
    }
    const double edge_weight = std::norm(a.values.front()) *
                               (a.constants.mass / a.grid.p_min) * a.grid.spacing;
    if (edge_weight > defaults::divergence_guard) {
        throw guard_error("weight near p_min gives (m/p) contribution " +
                          std::to_string(edge_weight) +
                          "; the small-momentum condition is violated");
    }
}

// Applies (X - Xhat) with Xhat = sign * i hbar d/dq in the aligned samples.
std::vector<Complex> apply_x_minus_xhat(const MomentumAmplitude& a, double X,
                                        const std::vector<Complex>& f) {
    const double s = direction_sign(a.direction);
    const std::vector<Complex> df = derivative4(f, a.grid.spacing);
    std::vector<Complex> out(f.size());
    const Complex factor = Complex{0.0, -s * a.constants.hbar};
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = X * f[i] + factor * df[i];
    return out;
}

struct MeanEstimate {
    double value;
    double residue;
};

MeanEstimate mean_time_ab_impl(const MomentumAmplitude& a, double X, double edge_tol) {
    require_operator_preconditions(a, edge_tol);
    const double s = direction_sign(a.direction);
    const double m = a.constants.mass;
    const std::size_t n = a.values.size();

    std::vector<Complex> over_p(n);  // (m/p) psi, p = s*q
    for (std::size_t i = 0; i < n; ++i) over_p[i] = s * m / a.grid.nodes[i] * a.values[i];

    const std::vector<Complex> t1 = apply_x_minus_xhat(a, X, over_p);
    std::vector<Complex> t2 = apply_x_minus_xhat(a, X, a.values);
    for (std::size_t i = 0; i < n; ++i) t2[i] *= s * m / a.grid.nodes[i];

    const Complex e1 = inner_product(a.values, t1, a.grid.spacing);
    const Complex e2 = inner_product(a.values, t2, a.grid.spacing);
    const Complex mean = 0.5 * (e1 + e2);
    return {mean.real(), mean.imag()};
}

MeanEstimate mean_time_grt_impl(const MomentumAmplitude& a, double X, double edge_tol) {
    require_operator_preconditions(a, edge_tol);
    const double s = direction_sign(a.direction);
    const double m = a.constants.mass;
    const std::size_t n = a.values.size();

    std::vector<Complex> w(n);  // sqrt(m/q) psi
    MomentumAmplitude tmp = a;
    for (std::size_t i = 0; i < n; ++i) w[i] = std::sqrt(m / a.grid.nodes[i]) * a.values[i];

    const std::vector<Complex> yw = apply_x_minus_xhat(a, X, w);
    const Complex mean = s * inner_product(w, yw, a.grid.spacing);
    return {mean.real(), mean.imag()};
}

}  // namespace

Complex arrival_amplitude(const MomentumAmplitude& a, double tau, double X) {
    const PhaseContext ctx{tau, X, a.direction, a.constants};
    const Complex i_sqrt = eval_functional(a, WeightKind::sqrt_p, ctx);
    return i_sqrt / std::sqrt(a.constants.mass * a.constants.h());
}

Complex position_amplitude(const MomentumAmplitude& a, double x) {
    // kernel exp(i sign q x / hbar) == the tau = 0 functional at X = x
    const PhaseContext ctx{0.0, x, a.direction, a.constants};
    return eval_functional(a, WeightKind::unity, ctx) / std::sqrt(a.constants.h());
}

ArrivalDistribution arrival_distribution(const MomentumAmplitude& a, double t_lo, double t_hi,
                                         int n_tau, double X) {
    require_window(t_lo, t_hi, n_tau);
    const double tau_max = std::max(std::abs(t_lo), std::abs(t_hi));
    require_nyquist(a, PhaseContext{tau_max, X, a.direction, a.constants});

    ArrivalDistribution d;
    d.tau_nodes = uniform_nodes(t_lo, t_hi, n_tau);
    d.amplitudes.resize(d.tau_nodes.size());
    d.densities.resize(d.tau_nodes.size());
    d.X = X;
    d.direction = a.direction;

    const std::size_t n = a.values.size();
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = std::sqrt(a.grid.nodes[i]) * a.grid.spacing;
    w.front() *= 0.5;
    w.back() *= 0.5;
    const double scale = 1.0 / std::sqrt(a.constants.mass * a.constants.h());
    const double hbar = a.constants.hbar;
    const double mass = a.constants.mass;
    const double lin = direction_sign(a.direction) * X / hbar;

    const std::int64_t nt = static_cast<std::int64_t>(d.tau_nodes.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < nt; ++k) {
        const std::size_t i = static_cast<std::size_t>(k);
        const kernels::Oscillation osc{d.tau_nodes[i] / (2.0 * mass * hbar), lin};
        const Complex amp = scale * kernels::weighted_sum(a.values, a.grid.nodes, w, osc);
        d.amplitudes[i] = amp;
        d.densities[i] = std::norm(amp);
    }

    const double spacing = d.tau_nodes[1] - d.tau_nodes[0];
    d.integral = trapezoid(d.densities, spacing);
    d.tail = 1.0 - d.integral;
    return d;
}

double current_expectation(const MomentumAmplitude& a, double tau, double X) {
    const PhaseContext ctx{tau, X, a.direction, a.constants};
    const kernels::Triple t = eval_functional_triple(a, ctx);
    return std::real(std::conj(t.linear_q) * t.unity) /
           (a.constants.mass * a.constants.h());
}

double positive_current_expectation(const MomentumAmplitude& a, double tau, double X) {
    const PhaseContext ctx{tau, X, a.direction, a.constants};
    const Complex i_sqrt = eval_functional(a, WeightKind::sqrt_p, ctx);
    return std::norm(i_sqrt) / (a.constants.mass * a.constants.h());
}

CurrentSeries current_series(const MomentumAmplitude& a, double t_lo, double t_hi, int n_tau,
                             double X) {
    require_window(t_lo, t_hi, n_tau);
    const double tau_max = std::max(std::abs(t_lo), std::abs(t_hi));
    require_nyquist(a, PhaseContext{tau_max, X, a.direction, a.constants});

    CurrentSeries s;
    s.tau_nodes = uniform_nodes(t_lo, t_hi, n_tau);
    s.j_values.resize(s.tau_nodes.size());
    s.jplus_values.resize(s.tau_nodes.size());
    s.X = X;

    const std::size_t n = a.values.size();
    std::vector<double> w(n, a.grid.spacing);
    w.front() *= 0.5;
    w.back() *= 0.5;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = std::sqrt(a.grid.nodes[i]);

    const double hbar = a.constants.hbar;
    const double mass = a.constants.mass;
    const double mh = mass * a.constants.h();
    const double lin = direction_sign(a.direction) * X / hbar;

    const std::int64_t nt = static_cast<std::int64_t>(s.tau_nodes.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < nt; ++k) {
        const std::size_t i = static_cast<std::size_t>(k);
        const kernels::Oscillation osc{s.tau_nodes[i] / (2.0 * mass * hbar), lin};
        const kernels::Triple t =
            kernels::triple_sum(a.values, a.grid.nodes, sq, w, osc);
        s.j_values[i] = std::real(std::conj(t.linear_q) * t.unity) / mh;
        s.jplus_values[i] = std::norm(t.sqrt_q) / mh;
    }
    return s;
}

double mean_time_spectral(const ArrivalDistribution& d, double p_tol) {
    if (d.tau_nodes.size() < 2) throw window_error("distribution has fewer than two nodes");
    if (std::abs(d.tail) > p_tol) {
        throw window_error("tau window inadequate: tail diagnostic " +
                           std::to_string(d.tail) + " exceeds " + std::to_string(p_tol));
    }
    const double spacing = d.tau_nodes[1] - d.tau_nodes[0];
    std::vector<double> weighted(d.densities.size());
    for (std::size_t i = 0; i < d.densities.size(); ++i) {
        weighted[i] = d.tau_nodes[i] * d.densities[i];
    }
    return trapezoid(weighted, spacing) / d.integral;
}

double mean_time_current(const MomentumAmplitude& a, double t_lo, double t_hi, int n_tau,
                         double X, double p_tol, double edge_tol) {
    require_window(t_lo, t_hi, n_tau);
    if (!edge_decay_ok(a, edge_tol)) {
        throw guard_error("endpoint decay violated: the current mean needs vanishing weight "
                          "at the grid edges");
    }
    const CurrentSeries s = current_series(a, t_lo, t_hi, n_tau, X);
    const double spacing = s.tau_nodes[1] - s.tau_nodes[0];
    const double captured = trapezoid(s.jplus_values, spacing);
    if (std::abs(1.0 - captured) > p_tol) {
        throw window_error("tau window inadequate: captured probability " +
                           std::to_string(captured));
    }
    std::vector<double> weighted(s.j_values.size());
    for (std::size_t i = 0; i < s.j_values.size(); ++i) {
        weighted[i] = s.tau_nodes[i] * s.j_values[i];
    }
    return trapezoid(weighted, spacing) / trapezoid(s.j_values, spacing);
}

double mean_time_ab_operator(const MomentumAmplitude& a, double X, double* imag_residue,
                             double edge_tol) {
    const MeanEstimate e = mean_time_ab_impl(a, X, edge_tol);
    if (imag_residue) *imag_residue = e.residue;
    return e.value;
}

double mean_time_grt_operator(const MomentumAmplitude& a, double X, double* imag_residue,
                              double edge_tol) {
    const MeanEstimate e = mean_time_grt_impl(a, X, edge_tol);
    if (imag_residue) *imag_residue = e.residue;
    return e.value;
}

TotalArrivalProbability total_arrival_probability(const MomentumAmplitude& a, double t_lo,
                                                  double t_hi, int n_tau, double X) {
    require_window(t_lo, t_hi, n_tau);
    const CurrentSeries s = current_series(a, t_lo, t_hi, n_tau, X);
    const double spacing = s.tau_nodes[1] - s.tau_nodes[0];
    TotalArrivalProbability out;
    out.jplus_total = trapezoid(s.jplus_values, spacing);
    out.j_total = trapezoid(s.j_values, spacing);
    return out;
}

PhaseSpaceMoments phase_space_moments(const MomentumAmplitude& a) {
    const std::size_t n = a.values.size();
    const double spacing = a.grid.spacing;
    const double s = direction_sign(a.direction);

    PhaseSpaceMoments m;
    double q1 = 0.0;
    double q2 = 0.0;
    {
        std::vector<double> d0(n), d1(n), d2(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double rho = std::norm(a.values[i]);
            d0[i] = rho;
            d1[i] = a.grid.nodes[i] * rho;
            d2[i] = a.grid.nodes[i] * a.grid.nodes[i] * rho;
        }
        const double norm = trapezoid(d0, spacing);
        q1 = trapezoid(d1, spacing) / norm;
        q2 = trapezoid(d2, spacing) / norm;
    }
    m.q_mean = q1;
    m.q_sigma = std::sqrt(std::max(0.0, q2 - q1 * q1));

    // <X> = Re <psi, s i hbar d/dq psi>, <X^2> = hbar^2 ||d psi/dq||^2.
    const std::vector<Complex> dv = derivative4(a.values, spacing);
    Complex xm{0.0, 0.0};
    double x2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        xm += w * std::conj(a.values[i]) * Complex{0.0, s * a.constants.hbar} * dv[i];
        x2 += w * std::norm(dv[i]);
    }
    m.x_mean = xm.real() * spacing;
    x2 *= spacing * a.constants.hbar * a.constants.hbar;
    m.x_sigma = std::sqrt(std::max(0.0, x2 - m.x_mean * m.x_mean));
    return m;
}

namespace {

// Wigner evaluation on one x node: psi values on the lattice x + j*dy,
// j = -n_y..n_y, then the oscillatory y-quadrature for each p node.
struct WignerWorkspace {
    double dy = 0.0;
    int n_y = 0;
    std::vector<Complex> lattice;  // psi(x + j*dy), index j + n_y
};

WignerWorkspace make_workspace(const MomentumAmplitude& a, double x, double half_width,
                               double dy) {
    WignerWorkspace ws;
    ws.dy = dy;
    ws.n_y = std::max(8, static_cast<int>(std::ceil(half_width / dy)));
    ws.lattice.resize(static_cast<std::size_t>(2 * ws.n_y + 1));

    const std::size_t n = a.values.size();
    std::vector<double> w(n, a.grid.spacing);
    w.front() *= 0.5;
    w.back() *= 0.5;
    const double s = direction_sign(a.direction);
    const double hbar = a.constants.hbar;
    const double root_h = std::sqrt(a.constants.h());

    const std::int64_t count = static_cast<std::int64_t>(ws.lattice.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < count; ++k) {
        const double z = x + (static_cast<double>(k) - ws.n_y) * dy;
        const kernels::Oscillation osc{0.0, s * z / hbar};
        ws.lattice[static_cast<std::size_t>(k)] =
            kernels::weighted_sum(a.values, a.grid.nodes, w, osc) / root_h;
    }
    return ws;
}

Complex wigner_value(const WignerWorkspace& ws, double p, double hbar) {
    // (1/pi hbar) Int dy conj(psi(x+y)) psi(x-y) exp(2 i p y / hbar)
    const int n_y = ws.n_y;
    Complex acc{0.0, 0.0};
    for (int j = -n_y; j <= n_y; ++j) {
        const double y = j * ws.dy;
        const double theta = 2.0 * p * y / hbar;
        const Complex prod = std::conj(ws.lattice[static_cast<std::size_t>(j + n_y)]) *
                             ws.lattice[static_cast<std::size_t>(n_y - j)];
        const double w = (j == -n_y || j == n_y) ? 0.5 : 1.0;
        acc += w * prod * Complex{std::cos(theta), std::sin(theta)};
    }
    return acc * (ws.dy / (std::numbers::pi * hbar));
}

double wigner_dy(const MomentumAmplitude& a, double max_abs_p) {
    // slope of the y-phase: two position factors (local momentum up to q_max)
    // plus the kernel 2p/hbar
    const double slope = 2.0 * (a.grid.p_max + max_abs_p) / a.constants.hbar;
    return defaults::max_phase_step / slope;
}

}  // namespace

WignerGrid wigner_function(const MomentumAmplitude& a, const std::vector<double>& x_nodes,
                           const std::vector<double>& p_nodes) {
    if (x_nodes.empty() || p_nodes.empty()) throw error("wigner grids must be nonempty");
    if (max_abs2(a) == 0.0) {
        return {x_nodes, p_nodes, std::vector<double>(x_nodes.size() * p_nodes.size(), 0.0)};
    }

    const PhaseSpaceMoments mom = phase_space_moments(a);
    if (x_nodes.size() > 1) {
        if (x_nodes.front() > mom.x_mean - 4.0 * mom.x_sigma ||
            x_nodes.back() < mom.x_mean + 4.0 * mom.x_sigma) {
            throw grid_error("x nodes do not cover the packet's spatial support");
        }
    }
    if (p_nodes.size() > 1) {
        if (p_nodes.front() > std::max(0.0, mom.q_mean - 4.0 * mom.q_sigma) ||
            p_nodes.back() < mom.q_mean + 4.0 * mom.q_sigma) {
            throw grid_error("p nodes do not cover the packet's momentum support");
        }
    }

    double max_abs_p = 0.0;
    for (double p : p_nodes) max_abs_p = std::max(max_abs_p, std::abs(p));
    const double dy = wigner_dy(a, max_abs_p);
    const double hbar = a.constants.hbar;

    WignerGrid out;
    out.x_nodes = x_nodes;
    out.p_nodes = p_nodes;
    out.values.assign(x_nodes.size() * p_nodes.size(), 0.0);

    double peak = 0.0;
    double worst_residue = 0.0;
    for (std::size_t ix = 0; ix < x_nodes.size(); ++ix) {
        const double half_width =
            std::abs(x_nodes[ix] - mom.x_mean) + defaults::window_sigmas * mom.x_sigma;
        const WignerWorkspace ws = make_workspace(a, x_nodes[ix], half_width, dy);

        const std::int64_t np = static_cast<std::int64_t>(p_nodes.size());
        std::vector<Complex> row(p_nodes.size());
#pragma omp parallel for schedule(static)
        for (std::int64_t ip = 0; ip < np; ++ip) {
            row[static_cast<std::size_t>(ip)] =
                wigner_value(ws, p_nodes[static_cast<std::size_t>(ip)], hbar);
        }
        for (std::size_t ip = 0; ip < p_nodes.size(); ++ip) {
            out.values[ix * p_nodes.size() + ip] = row[ip].real();
            peak = std::max(peak, std::abs(row[ip].real()));
            worst_residue = std::max(worst_residue, std::abs(row[ip].imag()));
        }
    }

    if (peak > 0.0 && worst_residue > defaults::wigner_imag_tol * peak) {
        throw numeric_error("wigner imaginary residue " + std::to_string(worst_residue) +
                            " exceeds tolerance relative to peak " + std::to_string(peak));
    }
    return out;
}

double wigner_current_check(const MomentumAmplitude& a, double tau, double X) {
    if (max_abs2(a) == 0.0) return 0.0;
    const MomentumAmplitude evolved = free_evolve(a, tau);
    const PhaseSpaceMoments mom = phase_space_moments(evolved);

    // f_W(x, q) of a positive-support state vanishes identically for q < 0,
    // so the flux moment only needs the packet's own momentum window.
    const double q_lo = std::max(0.0, mom.q_mean - defaults::window_sigmas * mom.q_sigma);
    const double q_hi =
        std::min(a.grid.p_max, mom.q_mean + defaults::window_sigmas * mom.q_sigma);

    const double half_width =
        std::abs(X - mom.x_mean) + defaults::window_sigmas * mom.x_sigma;
    const double dp = defaults::max_phase_step * a.constants.hbar / (2.0 * half_width);
    const int n_p = std::max(16, static_cast<int>(std::ceil((q_hi - q_lo) / dp)) + 1);
    const std::vector<double> p_nodes = uniform_nodes(q_lo, q_hi, n_p);

    const double dy = wigner_dy(evolved, q_hi);
    const WignerWorkspace ws = make_workspace(evolved, X, half_width, dy);

    const double hbar = a.constants.hbar;
    std::vector<double> flux(p_nodes.size());
    double peak = 0.0;
    double worst_residue = 0.0;
    const std::int64_t np = static_cast<std::int64_t>(p_nodes.size());
    std::vector<Complex> row(p_nodes.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t ip = 0; ip < np; ++ip) {
        row[static_cast<std::size_t>(ip)] =
            wigner_value(ws, p_nodes[static_cast<std::size_t>(ip)], hbar);
    }
    for (std::size_t ip = 0; ip < p_nodes.size(); ++ip) {
        peak = std::max(peak, std::abs(row[ip].real()));
        worst_residue = std::max(worst_residue, std::abs(row[ip].imag()));
        flux[ip] = row[ip].real() * p_nodes[ip] / a.constants.mass;
    }
    if (peak > 0.0 && worst_residue > defaults::wigner_imag_tol * peak) {
        throw numeric_error("wigner imaginary residue exceeds tolerance");
    }
    return trapezoid(flux, p_nodes[1] - p_nodes[0]);
}

}  // namespace toa
