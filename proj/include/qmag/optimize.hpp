#pragma once

#include <functional>

namespace qmag {

struct Extremum {
    double x = 0.0;
    double value = 0.0;
};

/// Global maximum of f on [lo, hi]: a uniform grid of grid_points samples
/// picks the best bracket (first index wins ties), then golden-section search
/// narrows it to x_tolerance.
Extremum maximize_on_grid(const std::function<double(double)>& f, double lo, double hi, int grid_points,
                          double x_tolerance);

/// Golden-section search for a maximum of a unimodal f on [lo, hi].
Extremum golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                 double x_tolerance);

}  // namespace qmag
