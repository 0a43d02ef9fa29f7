#include "toa/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace toa {

namespace {

using kernels::Oscillation;
using kernels::Triple;

inline Complex phase_factor(const Oscillation& osc, double q) {
    const double theta = q * (osc.lin - osc.quad * q);
    return {std::cos(theta), std::sin(theta)};
}

inline Complex weighted_block(std::span<const Complex> values, std::span<const double> nodes,
                              std::span<const double> weights, const Oscillation& osc,
                              std::size_t lo, std::size_t hi) {
    Complex acc{0.0, 0.0};
    for (std::size_t i = lo; i < hi; ++i) {
        acc += weights[i] * values[i] * phase_factor(osc, nodes[i]);
    }
    return acc;
}

inline Triple triple_block(std::span<const Complex> values, std::span<const double> nodes,
                           std::span<const double> sqrt_nodes, std::span<const double> weights,
                           const Oscillation& osc, std::size_t lo, std::size_t hi) {
    Complex one{0.0, 0.0};
    Complex root{0.0, 0.0};
    Complex lin{0.0, 0.0};
    for (std::size_t i = lo; i < hi; ++i) {
        const Complex term = weights[i] * values[i] * phase_factor(osc, nodes[i]);
        one += term;
        root += sqrt_nodes[i] * term;
        lin += nodes[i] * term;
    }
    return {one, root, lin};
}

// Spawning a nested region per call from inside an outer parallel sweep is
// pure overhead; the block order (and with it the result) stays the same
// either way.
inline bool use_inner_threads() {
#ifdef _OPENMP
    return !omp_in_parallel();
#else
    return false;
#endif
}

}  // namespace

namespace kernels {

// Fixed-size blocks summed independently, then combined in block order: the
// result does not depend on the number of threads.
Complex weighted_sum(std::span<const Complex> values, std::span<const double> nodes,
                     std::span<const double> weights, const Oscillation& osc) {
    const std::size_t n = values.size();
    const std::int64_t nblocks =
        static_cast<std::int64_t>((n + block_size - 1) / block_size);
    std::vector<Complex> partial(static_cast<std::size_t>(nblocks));

    auto fill = [&](std::int64_t b) {
        const std::size_t lo = static_cast<std::size_t>(b) * block_size;
        const std::size_t hi = std::min(lo + block_size, n);
        partial[static_cast<std::size_t>(b)] = weighted_block(values, nodes, weights, osc, lo, hi);
    };
    if (use_inner_threads()) {
#pragma omp parallel for schedule(static)
        for (std::int64_t b = 0; b < nblocks; ++b) fill(b);
    } else {
        for (std::int64_t b = 0; b < nblocks; ++b) fill(b);
    }

    Complex acc{0.0, 0.0};
    for (const Complex& p : partial) acc += p;
    return acc;
}

Triple triple_sum(std::span<const Complex> values, std::span<const double> nodes,
                  std::span<const double> sqrt_nodes, std::span<const double> weights,
                  const Oscillation& osc) {
    const std::size_t n = values.size();
    const std::int64_t nblocks =
        static_cast<std::int64_t>((n + block_size - 1) / block_size);
    std::vector<Triple> partial(static_cast<std::size_t>(nblocks));

    auto fill = [&](std::int64_t b) {
        const std::size_t lo = static_cast<std::size_t>(b) * block_size;
        const std::size_t hi = std::min(lo + block_size, n);
        partial[static_cast<std::size_t>(b)] =
            triple_block(values, nodes, sqrt_nodes, weights, osc, lo, hi);
    };
    if (use_inner_threads()) {
#pragma omp parallel for schedule(static)
        for (std::int64_t b = 0; b < nblocks; ++b) fill(b);
    } else {
        for (std::int64_t b = 0; b < nblocks; ++b) fill(b);
    }

    Triple acc;
    for (const Triple& p : partial) {
        acc.unity += p.unity;
        acc.sqrt_q += p.sqrt_q;
        acc.linear_q += p.linear_q;
    }
    return acc;
}

}  // namespace kernels

namespace ref {

Complex weighted_sum(std::span<const Complex> values, std::span<const double> nodes,
                     std::span<const double> weights, const kernels::Oscillation& osc) {
    return weighted_block(values, nodes, weights, osc, 0, values.size());
}

kernels::Triple triple_sum(std::span<const Complex> values, std::span<const double> nodes,
                           std::span<const double> sqrt_nodes, std::span<const double> weights,
                           const kernels::Oscillation& osc) {
    return triple_block(values, nodes, sqrt_nodes, weights, osc, 0, values.size());
}

}  // namespace ref

}  // namespace toa
