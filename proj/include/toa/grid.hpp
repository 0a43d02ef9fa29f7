#ifndef TOA_GRID_HPP
#define TOA_GRID_HPP

#include <vector>

namespace toa {

// Uniform grid over the aligned momentum magnitude q = |p|, 0 < p_min < p_max.
struct MomentumGrid {
    double p_min = 0.0;
    double p_max = 0.0;
    int n = 0;
    double spacing = 0.0;
    std::vector<double> nodes;
};

// Builds a uniform grid; throws grid_error on malformed bounds or n < 2.
MomentumGrid make_uniform_grid(double p_min, double p_max, int n);

}  // namespace toa

#endif
