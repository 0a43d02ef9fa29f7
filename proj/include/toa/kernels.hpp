#ifndef TOA_KERNELS_HPP
#define TOA_KERNELS_HPP

#include <cstddef>
#include <span>

#include "toa/common.hpp"

// Hot summation kernels. The public kernels accumulate fixed-size block
// partials and combine them in block order, so results are bit-identical for
// any thread count (including serial builds). toa::ref holds the plain serial
// loops kept as the reference implementation for tests and the benchmark.

namespace toa::kernels {

inline constexpr std::size_t block_size = 512;

// Phase of the free-propagation kernel, theta(q) = lin*q - quad*q^2, i.e.
// exp(-i((q^2/2m)tau - sign*q*X)/hbar) with quad = tau/(2 m hbar) and
// lin = sign*X/hbar.
struct Oscillation {
    double quad = 0.0;
    double lin = 0.0;
};

// sum_i w_i * v_i * exp(i theta(q_i));  w carries f(q), trapezoid end
// weights and the grid spacing.
Complex weighted_sum(std::span<const Complex> values, std::span<const double> nodes,
                     std::span<const double> weights, const Oscillation& osc);

// The three functionals I[1], I[sqrt(q)], I[q] in one pass over the grid
// (one sin/cos per node instead of three).
struct Triple {
    Complex unity;
    Complex sqrt_q;
    Complex linear_q;
};

Triple triple_sum(std::span<const Complex> values, std::span<const double> nodes,
                  std::span<const double> sqrt_nodes, std::span<const double> weights,
                  const Oscillation& osc);

}  // namespace toa::kernels

namespace toa::ref {

Complex weighted_sum(std::span<const Complex> values, std::span<const double> nodes,
                     std::span<const double> weights, const kernels::Oscillation& osc);

kernels::Triple triple_sum(std::span<const Complex> values, std::span<const double> nodes,
                           std::span<const double> sqrt_nodes, std::span<const double> weights,
                           const kernels::Oscillation& osc);

}  // namespace toa::ref

#endif
