// Timing comparison between the plain serial reference kernels and the
// blocked OpenMP kernels, plus a sweep-level comparison. Also verifies that
// both paths agree numerically while timing them.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "toa/kernels.hpp"
#include "toa/observables.hpp"
#include "toa/oscquad.hpp"
#include "toa/packets.hpp"

using namespace toa;

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

struct KernelInputs {
    std::vector<Complex> values;
    std::vector<double> nodes;
    std::vector<double> sqrt_nodes;
    std::vector<double> weights;
};

KernelInputs make_inputs(std::size_t n) {
    KernelInputs in;
    in.values.resize(n);
    in.nodes.resize(n);
    in.sqrt_nodes.resize(n);
    in.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double q = 0.5 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
        in.nodes[i] = q;
        in.sqrt_nodes[i] = std::sqrt(q);
        in.weights[i] = 2.0 / static_cast<double>(n - 1);
        const double env = std::exp(-8.0 * (q - 1.5) * (q - 1.5));
        in.values[i] = env * Complex{std::cos(13.0 * q), std::sin(13.0 * q)};
    }
    return in;
}

template <typename F>
double time_best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now_ms();
        fn();
        best = std::min(best, now_ms() - t0);
    }
    return best;
}

void bench_triple(std::size_t n) {
    const KernelInputs in = make_inputs(n);
    const kernels::Oscillation osc{1.3, -0.7};

    kernels::Triple tb;
    kernels::Triple ts;
    const double parallel_ms = time_best_of(5, [&] {
        tb = kernels::triple_sum(in.values, in.nodes, in.sqrt_nodes, in.weights, osc);
    });
    const double serial_ms = time_best_of(5, [&] {
        ts = ref::triple_sum(in.values, in.nodes, in.sqrt_nodes, in.weights, osc);
    });
    const double diff = std::abs(tb.sqrt_q - ts.sqrt_q) / std::abs(ts.sqrt_q);
    std::printf("triple_sum      n=%8zu    serial %8.3f ms    blocked %8.3f ms    "
                "speedup %5.2fx    rel diff %.2e\n",
                n, serial_ms, parallel_ms, serial_ms / parallel_ms, diff);
}

void bench_sweep() {
    PhysicalConstants c;
    WavePacketSpec spec;
    spec.components = {{1.0, 1.0, 0.05, -10.0}};
    const MomentumAmplitude a = build_amplitude(spec, choose_grid(spec, 20.0, 0.0, c), c);

    ArrivalDistribution dp;
    const double parallel_ms =
        time_best_of(3, [&] { dp = arrival_distribution(a, 0.0, 20.0, 2001, 0.0); });

    // serial sweep: same per-node reference kernel, plain loop
    std::vector<double> w(a.values.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = std::sqrt(a.grid.nodes[i]) * a.grid.spacing;
    }
    w.front() *= 0.5;
    w.back() *= 0.5;
    const double scale = 1.0 / std::sqrt(c.mass * c.h());
    std::vector<double> serial_density(2001);
    const double serial_ms = time_best_of(3, [&] {
        for (int i = 0; i < 2001; ++i) {
            const double tau = 20.0 * i / 2000.0;
            const kernels::Oscillation osc{tau / (2.0 * c.mass * c.hbar), 0.0};
            const Complex amp = scale * ref::weighted_sum(a.values, a.grid.nodes, w, osc);
            serial_density[static_cast<std::size_t>(i)] = std::norm(amp);
        }
    });

    double worst = 0.0;
    for (std::size_t i = 0; i < serial_density.size(); ++i) {
        worst = std::max(worst, std::abs(serial_density[i] - dp.densities[i]));
    }
    std::printf("arrival sweep   2001x%zu   serial %8.3f ms    parallel %8.3f ms    "
                "speedup %5.2fx    max diff %.2e\n",
                a.values.size(), serial_ms, parallel_ms, serial_ms / parallel_ms, worst);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("openmp disabled (serial build)\n");
#endif
    bench_triple(1u << 16);
    bench_triple(1u << 20);
    bench_sweep();
    return 0;
}
