#pragma once

#include "qmag/linalg.hpp"
#include "qmag/model.hpp"

namespace qmag {

/// I - i * integral_0^t H. Not unitary; states built from it must be
/// renormalized by the caller.
Matrix4 dyson1_propagator(const SystemParams& p, double t);

/// Time-ordered product of midpoint exponentials exp(-i H(t_k^mid) dt) over
/// [t_start, t_end] with a fixed number of slices, latest slice leftmost.
Matrix4 midpoint_product(const SystemParams& p, double t_start, double t_end, long long steps);

struct ExactPropagatorOptions {
    double tolerance = 1e-10;  // spectral-norm change between successive doublings
    int max_doublings = 20;
};

/// Self-certifying time-ordered propagator over [t_start, t_end]: doubles the
/// slice count from max(64, ceil(40 (t_end - t_start) (1 + H_max))) until two
/// successive products agree to the tolerance. Throws ConvergenceError
/// otherwise.
Matrix4 exact_propagator_window(const SystemParams& p, double t_start, double t_end,
                                const ExactPropagatorOptions& opts = {});

inline Matrix4 exact_propagator(const SystemParams& p, double t, const ExactPropagatorOptions& opts = {}) {
    return exact_propagator_window(p, 0.0, t, opts);
}

struct PropagatorReport {
    Matrix4 u_dyson;
    Matrix4 u_exact;
    double error_observed = 0.0;  // ||u_exact - u_dyson||_2
    double error_bound = 0.0;     // (H_max t)^2 / 2
    double margin = 0.0;          // H_max t
};

PropagatorReport propagator_report(const SystemParams& p, double t);

}  // namespace qmag
