#include "qmag/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmag/errors.hpp"

namespace qmag {

namespace {

constexpr Complex kI{0.0, 1.0};

// exp(-i dt H) for one slice. Slices are short, so a Horner-form Taylor
// polynomial whose degree is picked from the 1-norm reaches round-off without
// scaling and squaring.
Matrix4 slice_exponential(const Matrix4& h, double dt) {
    const Matrix4 a = (-kI * dt) * h;
    double one_norm = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
        double col = 0.0;
        for (std::size_t r = 0; r < 4; ++r) col += std::abs(a(r, c));
        one_norm = std::max(one_norm, col);
    }
    if (one_norm > 0.5) return matrix_exponential(a);

    int degree = 1;
    double remainder = one_norm * one_norm / 2.0;
    while (remainder > 1e-17 && degree < 30) {
        ++degree;
        remainder *= one_norm / (degree + 1);
    }
    const Matrix4 id = Matrix4::identity();
    Matrix4 result = id + a * (1.0 / degree);
    for (int k = degree - 1; k >= 1; --k) result = id + (a * result) * (1.0 / k);
    return result;
}

}  // namespace

Matrix4 dyson1_propagator(const SystemParams& p, double t) {
    return Matrix4::identity() - kI * integrated_hamiltonian(p, t);
}

Matrix4 midpoint_product(const SystemParams& p, double t_start, double t_end, long long steps) {
    if (steps < 1) throw ContractError("midpoint_product: steps must be >= 1");
    const double dt = (t_end - t_start) / static_cast<double>(steps);
    Matrix4 u = Matrix4::identity();
    if (dt == 0.0) return u;
    for (long long k = 0; k < steps; ++k) {
        const double mid = t_start + (static_cast<double>(k) + 0.5) * dt;
        u = slice_exponential(hamiltonian_at(p, mid), dt) * u;
    }
    return u;
}

Matrix4 exact_propagator_window(const SystemParams& p, double t_start, double t_end,
                                const ExactPropagatorOptions& opts) {
    if (!(t_end >= t_start)) throw ContractError("exact_propagator: window must satisfy t_start <= t_end");
    const double span = t_end - t_start;
    if (span == 0.0) return Matrix4::identity();

    // The bound over [0, t_end] also covers the window; it only seeds the step count.
    const double hmax = h_max(p, t_end, 256);

    long long steps = std::max<long long>(64, static_cast<long long>(std::ceil(40.0 * span * (1.0 + hmax))));
    Matrix4 previous = midpoint_product(p, t_start, t_end, steps);
    for (int d = 0; d < opts.max_doublings; ++d) {
        steps *= 2;
        Matrix4 current = midpoint_product(p, t_start, t_end, steps);
        if (operator_norm(current - previous) < opts.tolerance) return current;
        previous = std::move(current);
    }
    throw ConvergenceError("exact_propagator: no convergence to " + std::to_string(opts.tolerance) + " after " +
                           std::to_string(opts.max_doublings) + " doublings");
}

PropagatorReport propagator_report(const SystemParams& p, double t) {
    PropagatorReport r;
    r.u_dyson = dyson1_propagator(p, t);
    r.u_exact = exact_propagator(p, t);
    r.error_observed = t == 0.0 ? 0.0 : operator_norm(r.u_exact - r.u_dyson);
    r.margin = convergence_margin(p, t);
    r.error_bound = truncation_error_bound_from_margin(r.margin);
    return r;
}

}  // namespace qmag
