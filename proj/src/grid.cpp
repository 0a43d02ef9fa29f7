#include "toa/grid.hpp"

#include <cmath>
#include <string>

#include "toa/errors.hpp"

namespace toa {

MomentumGrid make_uniform_grid(double p_min, double p_max, int n) {
    if (!(p_min > 0.0) || !(p_max > p_min)) {
        throw grid_error("momentum grid requires 0 < p_min < p_max, got [" +
                         std::to_string(p_min) + ", " + std::to_string(p_max) + "]");
    }
    if (n < 2) {
        throw grid_error("momentum grid requires n >= 2, got " + std::to_string(n));
    }

    MomentumGrid g;
    g.p_min = p_min;
    g.p_max = p_max;
    g.n = n;
    g.spacing = (p_max - p_min) / static_cast<double>(n - 1);
    g.nodes.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        g.nodes[static_cast<std::size_t>(i)] = p_min + g.spacing * static_cast<double>(i);
    }
    g.nodes.back() = p_max;
    return g;
}

}  // namespace toa
