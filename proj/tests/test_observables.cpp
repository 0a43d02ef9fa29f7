#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "toa/errors.hpp"
#include "toa/observables.hpp"
#include "toa/oscquad.hpp"

using namespace toa;

namespace {

WavePacketSpec canonical_spec() {
    WavePacketSpec spec;
    spec.components = {{1.0, 1.0, 0.05, -10.0}};
    return spec;
}

MomentumAmplitude build(const WavePacketSpec& spec, double tau_max, double X) {
    const PhysicalConstants c;
    return build_amplitude(spec, choose_grid(spec, tau_max, X, c), c);
}

// Two-Gaussian packet tuned so edge decay and the wrong-sign bound both hold
// while the ordinary current still dips negative near the detector.
WavePacketSpec overlap_spec() {
    WavePacketSpec spec;
    const double n = std::sqrt(10.0);
    spec.components = {{3.0 / n, 1.0, 0.13, -2.0}, {1.0 / n, 4.0, 0.13, -2.0}};
    return spec;
}

}  // namespace

TEST_CASE("arrival amplitude of the zero state vanishes") {
    MomentumAmplitude a;
    a.grid = make_uniform_grid(0.5, 1.5, 64);
    a.values.assign(64, Complex{0.0, 0.0});
    CHECK(std::abs(arrival_amplitude(a, 3.0, 0.0)) == 0.0);
}

TEST_CASE("arrival density matches (p0/m)|psi(X,tau)|^2 for the canonical packet") {
    const MomentumAmplitude a = build(canonical_spec(), 20.0, 0.0);
    const PhysicalConstants c;
    const double density = std::norm(arrival_amplitude(a, 10.0, 0.0));
    const double oracle =
        std::norm(oracles::gaussian_position_amplitude(canonical_spec(), c, 0.0, 10.0));
    CHECK(std::abs(density - 1.0 * oracle) < 1e-3);  // p0/m = 1
}

TEST_CASE("time translation shifts the arrival amplitude") {
    const MomentumAmplitude a = build(canonical_spec(), 20.0, 0.0);
    const MomentumAmplitude moved = free_evolve(a, 3.0);
    const Complex direct = arrival_amplitude(a, 13.0, 0.0);
    const Complex shifted = arrival_amplitude(moved, 10.0, 0.0);
    CHECK(std::abs(direct - shifted) <= 1e-10 * std::abs(direct));
}

TEST_CASE("arrival distribution over an adequate window is normalized") {
    const MomentumAmplitude a = build(canonical_spec(), 80.0, 0.0);
    const ArrivalDistribution d = arrival_distribution(a, -60.0, 80.0, 2801, 0.0);
    CHECK(std::abs(d.integral - 1.0) < 1e-3);
    for (double rho : d.densities) CHECK(rho >= 0.0);

    // peak sits at the classical arrival m(X - x0)/p0 = 10
    std::size_t peak = 0;
    for (std::size_t i = 0; i < d.densities.size(); ++i) {
        if (d.densities[i] > d.densities[peak]) peak = i;
    }
    CHECK(d.tau_nodes[peak] == doctest::Approx(10.0).epsilon(0.05));
}

TEST_CASE("normalization is detector-independent given an adequate window") {
    for (double X : {-2.0, 5.0}) {
        const double arrival = X + 10.0;
        const MomentumAmplitude a = build(canonical_spec(), arrival + 70.0, X);
        const ArrivalDistribution d =
            arrival_distribution(a, arrival - 70.0, arrival + 70.0, 2801, X);
        CHECK(std::abs(d.integral - 1.0) < 1e-3);
    }
}

TEST_CASE("the pinned [0,20] window captures only the central slice of the packet") {
    // The canonical packet is 2*sigma_x = 20 long in space, so its arrival
    // density has spread ~sigma_x/v = 10; [0, 20] holds roughly 68% of it.
    const MomentumAmplitude a = build(canonical_spec(), 20.0, 0.0);
    const ArrivalDistribution d = arrival_distribution(a, 0.0, 20.0, 2001, 0.0);

    // high-resolution quadrature oracle: doubled momentum grid, doubled taus
    const PhysicalConstants c;
    const WavePacketSpec spec = canonical_spec();
    const MomentumGrid g1 = choose_grid(spec, 20.0, 0.0, c);
    const MomentumAmplitude fine =
        build_amplitude(spec, make_uniform_grid(g1.p_min, g1.p_max, 2 * g1.n), c);
    const ArrivalDistribution d_fine = arrival_distribution(fine, 0.0, 20.0, 4001, 0.0);
    CHECK(d.integral == doctest::Approx(d_fine.integral).epsilon(1e-6));

    // Gaussian-passage model: mass inside +-1 sigma_t
    CHECK(d.integral == doctest::Approx(0.6827).epsilon(0.01));

    const ArrivalDistribution gone = arrival_distribution(a, 100.0, 120.0, 501, 0.0);
    CHECK(gone.integral < 1e-6);
}

TEST_CASE("narrow packets make both currents indistinguishable") {
    WavePacketSpec spec;
    spec.components = {{1.0, 1.0, 0.02, -10.0}};
    const MomentumAmplitude a = build(spec, 20.0, 0.0);
    const CurrentSeries s = current_series(a, 0.0, 20.0, 501, 0.0);
    double peak = 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < s.tau_nodes.size(); ++i) {
        peak = std::max(peak, s.jplus_values[i]);
        worst = std::max(worst, std::abs(s.j_values[i] - s.jplus_values[i]));
    }
    CHECK(worst / peak < 1e-2);
}

TEST_CASE("the interference packet sends the ordinary current negative") {
    const MomentumAmplitude a = build(overlap_spec(), 2.0, 0.0);
    const CurrentSeries s = current_series(a, 0.0, 1.8, 901, 0.0);
    const double jmin = *std::min_element(s.j_values.begin(), s.j_values.end());
    CHECK(jmin < 0.0);
    for (double jp : s.jplus_values) CHECK(jp >= 0.0);
}

TEST_CASE("the positive current is the arrival density, bit for bit") {
    const MomentumAmplitude a = build(overlap_spec(), 2.0, 0.0);
    const CurrentSeries s = current_series(a, 0.0, 1.8, 301, 0.0);
    const ArrivalDistribution d = arrival_distribution(a, 0.0, 1.8, 301, 0.0);
    for (std::size_t i = 0; i < s.tau_nodes.size(); ++i) {
        CHECK(std::abs(s.jplus_values[i] - d.densities[i]) <=
              1e-12 * std::max(1e-30, d.densities[i]));
    }

    const double single = positive_current_expectation(a, 0.9, 0.0);
    CHECK(single >= 0.0);
    CHECK(std::abs(single - std::norm(arrival_amplitude(a, 0.9, 0.0))) <= 1e-12 * single);
}

TEST_CASE("spectral mean follows m(X-x0)<1/p> and rejects bad windows") {
    const MomentumAmplitude a = build(canonical_spec(), 80.0, 0.0);
    const ArrivalDistribution d = arrival_distribution(a, -60.0, 80.0, 2801, 0.0);
    const double mean = mean_time_spectral(d);
    const double oracle = 10.0 * oracles::mean_inverse_momentum(a);
    CHECK(std::abs(mean - oracle) / oracle < 5e-3);
    CHECK(mean == doctest::Approx(10.0).epsilon(5e-3));

    // symmetric density => mean at the symmetry point, exactly
    ArrivalDistribution sym;
    sym.tau_nodes = {0.0, 0.5, 1.0, 1.5, 2.0};
    sym.densities = {0.1, 0.7, 1.0, 0.7, 0.1};
    sym.amplitudes.assign(5, Complex{0.0, 0.0});
    sym.integral = oracles::trapezoid(sym.densities, 0.5);
    sym.tail = 1.0 - sym.integral;
    CHECK(mean_time_spectral(sym, 2.0) == doctest::Approx(1.0).epsilon(1e-14));

    const ArrivalDistribution truncated = arrival_distribution(a, 0.0, 20.0, 2001, 0.0);
    CHECK_THROWS_AS(mean_time_spectral(truncated), window_error);
}

TEST_CASE("current-route mean agrees with the spectral mean") {
    const MomentumAmplitude a = build(canonical_spec(), 80.0, 0.0);
    const ArrivalDistribution d = arrival_distribution(a, -60.0, 80.0, 2801, 0.0);
    const double spectral = mean_time_spectral(d);
    const double current = mean_time_current(a, -60.0, 80.0, 2801, 0.0);
    CHECK(std::abs(current - spectral) / spectral < 5e-3);

    CHECK_THROWS_AS(mean_time_current(a, 5.0, 5.0, 100, 0.0), window_error);
}

TEST_CASE("mean routes agree through interference fringes") {
    const MomentumAmplitude a = build(overlap_spec(), 28.0, 0.0);
    const ArrivalDistribution d = arrival_distribution(a, -24.0, 28.0, 6601, 0.0);
    const double spectral = mean_time_spectral(d);
    const double current = mean_time_current(a, -24.0, 28.0, 6601, 0.0);
    CHECK(std::abs(current - spectral) / std::abs(spectral) < 1e-2);
}

TEST_CASE("operator means reduce to m(X-x0)<1/p> for linear-phase packets") {
    const MomentumAmplitude a = build(canonical_spec(), 20.0, 0.0);
    const double oracle = 10.0 * oracles::mean_inverse_momentum(a);

    double resid_ab = 0.0;
    double resid_grt = 0.0;
    const double ab = mean_time_ab_operator(a, 0.0, &resid_ab);
    const double grt = mean_time_grt_operator(a, 0.0, &resid_grt);

    CHECK(std::abs(ab - oracle) / oracle < 5e-3);
    CHECK(std::abs(grt - oracle) / oracle < 5e-3);
    CHECK(std::abs(ab - grt) / oracle < 1e-3);
    CHECK(std::abs(resid_ab) < defaults::mean_residue_tol);
    CHECK(std::abs(resid_grt) < defaults::mean_residue_tol);
}

TEST_CASE("operator means vanish when the packet starts at the detector") {
    WavePacketSpec spec;
    spec.components = {{1.0, 1.0, 0.05, 0.0}};
    const MomentumAmplitude a = build(spec, 0.0, 0.0);
    CHECK(std::abs(mean_time_ab_operator(a, 0.0)) < 1e-3);
    CHECK(std::abs(mean_time_grt_operator(a, 0.0)) < 1e-3);
}

TEST_CASE("weight near p = 0 trips the divergence guard") {
    // A grid reaching down to p ~ 1e-9 keeps the endpoint intensity below
    // edge_tol while (m/p_min) blows the small-momentum weight past the
    // guard threshold.
    const PhysicalConstants c;
    WavePacketSpec spec;
    spec.components = {{1.0, 0.375, 0.05, 0.0}};
    const MomentumAmplitude a =
        build_amplitude(spec, make_uniform_grid(1e-9, 0.775, 4096), c);
    REQUIRE(edge_decay_ok(a));
    CHECK_THROWS_AS(mean_time_ab_operator(a, 0.0), guard_error);
    CHECK_THROWS_AS(mean_time_grt_operator(a, 0.0), guard_error);
}

TEST_CASE("all four mean routes agree on the canonical packet") {
    const MomentumAmplitude a = build(canonical_spec(), 80.0, 0.0);
    const ArrivalDistribution d = arrival_distribution(a, -60.0, 80.0, 2801, 0.0);
    const double routes[4] = {
        mean_time_spectral(d),
        mean_time_current(a, -60.0, 80.0, 2801, 0.0),
        mean_time_ab_operator(a, 0.0),
        mean_time_grt_operator(a, 0.0),
    };
    for (int i = 0; i < 4; ++i) {
        for (int k = i + 1; k < 4; ++k) {
            CHECK(std::abs(routes[i] - routes[k]) / std::abs(routes[i]) < 5e-3);
        }
    }
}

TEST_CASE("both total-probability routes integrate to one") {
    const MomentumAmplitude a = build(canonical_spec(), 80.0, 0.0);
    const TotalArrivalProbability full = total_arrival_probability(a, -60.0, 80.0, 2801, 0.0);
    CHECK(std::abs(full.jplus_total - 1.0) < 1e-3);
    CHECK(std::abs(full.j_total - 1.0) < 1e-3);
    CHECK(std::abs(full.jplus_total - full.j_total) < 1e-4);

    // half window, split at the symmetry point of the passage
    const TotalArrivalProbability half = total_arrival_probability(a, -60.0, 10.0, 1401, 0.0);
    CHECK(half.jplus_total == doctest::Approx(0.5).epsilon(4e-3));
    CHECK(half.j_total == doctest::Approx(0.5).epsilon(4e-3));
    CHECK(std::abs(half.jplus_total - half.j_total) < 1e-3);
}

TEST_CASE("densities are invariant under a joint detector/origin shift") {
    const double shift = 3.0;
    WavePacketSpec moved = canonical_spec();
    moved.components[0].origin += shift;

    const MomentumAmplitude a = build(canonical_spec(), 20.0, 0.0);
    const MomentumAmplitude b = build(moved, 20.0, shift);
    const ArrivalDistribution da = arrival_distribution(a, 0.0, 20.0, 201, 0.0);
    const ArrivalDistribution db = arrival_distribution(b, 0.0, 20.0, 201, shift);
    for (std::size_t i = 0; i < da.densities.size(); ++i) {
        CHECK(std::abs(da.densities[i] - db.densities[i]) <=
              1e-12 * std::max(da.densities[i], 1e-30));
    }
}

TEST_CASE("mirrored packets arrive identically from the other side") {
    WavePacketSpec minus = canonical_spec();
    minus.direction = Direction::minus;
    const MomentumAmplitude ap = build(canonical_spec(), 20.0, 0.0);
    const MomentumAmplitude am = build(minus, 20.0, 0.0);
    const ArrivalDistribution dp = arrival_distribution(ap, 0.0, 20.0, 101, 0.0);
    const ArrivalDistribution dm = arrival_distribution(am, 0.0, 20.0, 101, 0.0);
    for (std::size_t i = 0; i < dp.densities.size(); ++i) {
        CHECK(dp.densities[i] == doctest::Approx(dm.densities[i]).epsilon(1e-12));
    }

    // the operator means see the mirrored geometry the same way
    const double tp = mean_time_grt_operator(ap, 0.0);
    const double tm = mean_time_grt_operator(am, 0.0);
    CHECK(tp == doctest::Approx(tm).epsilon(1e-10));
}

TEST_CASE("positive current stays nonnegative across random packets") {
    std::mt19937 rng(20240811u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        WavePacketSpec spec;
        const double p1 = 0.8 + 2.0 * unit(rng);
        const double gap = 1.5 + 2.5 * unit(rng);
        const double spread = std::min(p1 / 9.0, gap / 12.0) * (0.5 + 0.5 * unit(rng));
        const double x0 = -12.0 * unit(rng);
        const double theta = 0.15 + 1.25 * unit(rng);
        spec.components = {{std::cos(theta), p1, spread, x0},
                           {std::sin(theta), p1 + gap, spread, x0}};
        const PhysicalConstants c;
        const MomentumAmplitude a =
            build_amplitude(spec, choose_grid(spec, 20.0, 2.5, c), c);
        const double tau = 20.0 * unit(rng);
        const double X = -2.0 + 4.0 * unit(rng);
        CHECK(positive_current_expectation(a, tau, X) >= 0.0);
    }
}
