#include "qmag/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qmag/errors.hpp"

namespace qmag {

namespace {

struct Grid {
    std::vector<double> x;
    std::vector<double> f;
};

Grid sample(const std::function<double(double)>& f, double lo, double hi, int points) {
    if (!(lo < hi)) throw ContractError("optimize: require lo < hi");
    if (points < 3) throw ContractError("optimize: need at least 3 grid points");
    Grid g;
    g.x.resize(static_cast<std::size_t>(points));
    g.f.resize(static_cast<std::size_t>(points));
    const double step = (hi - lo) / (points - 1);
    for (int k = 0; k < points; ++k) {
        const auto i = static_cast<std::size_t>(k);
        g.x[i] = k == points - 1 ? hi : lo + k * step;
        g.f[i] = f(g.x[i]);
    }
    return g;
}

Extremum refine(const std::function<double(double)>& f, const Grid& g, std::size_t k, double tol) {
    const std::size_t last = g.x.size() - 1;
    const double a = g.x[k == 0 ? 0 : k - 1];
    const double b = g.x[std::min(k + 1, last)];
    Extremum best{g.x[k], g.f[k]};
    const Extremum refined = golden_section_maximize(f, a, b, tol);
    if (refined.value > best.value) best = refined;
    return best;
}

}  // namespace

Extremum golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                 double x_tolerance) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > x_tolerance) {
        // >= keeps the left interval on ties, which biases toward smaller x.
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    const double fx = f(x);
    Extremum best{x, fx};
    if (fc > best.value) best = {c, fc};
    if (fd > best.value) best = {d, fd};
    return best;
}

Extremum maximize_on_grid(const std::function<double(double)>& f, double lo, double hi, int grid_points,
                          double x_tolerance) {
    const Grid g = sample(f, lo, hi, grid_points);
    const auto it = std::ranges::max_element(g.f);  // first maximum on ties
    return refine(f, g, static_cast<std::size_t>(it - g.f.begin()), x_tolerance);
}

}  // namespace qmag
