#include "qmag/metrology.hpp"

#include <algorithm>
#include <cmath>

#include "qmag/errors.hpp"
#include "qmag/evolution.hpp"
#include "qmag/optimize.hpp"

namespace qmag {

double qfi_closed_form(const SystemParams& p, double t) {
    if (t < 0.0) throw ContractError("qfi_closed_form: t must be >= 0");
    const auto d = derived_quantities(p, t);
    const double w2 = p.omega * p.omega;
    const double jd = p.j * d.delta;
    const double xq = d.delta_x * p.omega_x;
    const double cross = 4.0 * jd * xq + 4.0 * xq * xq;
    const double num = 2.0 * p.gamma * p.gamma * d.delta * d.delta * (w2 + 2.0 * jd * jd + cross);
    const double den = d.m * w2 + cross + 2.0 * d.delta_alpha * d.delta_alpha * p.omega_y * p.omega_y;
    return num / (den * den);
}

namespace {

StateVector normalized_dyson_state(const SystemParams& p, double t) {
    return (dyson1_propagator(p, t) * prepare_initial()).normalized();
}

StateVector align_phase(const StateVector& v, std::size_t pivot) {
    const double mag = std::abs(v[pivot]);
    if (mag == 0.0) return v;
    return (std::conj(v[pivot]) / mag) * v;
}

}  // namespace

QfiNumeric qfi_numeric(const SystemParams& p, double t, std::optional<double> h) {
    const double step = h.value_or(1e-5 * std::max(1.0, std::abs(p.b_z)));
    if (!(step > 0.0)) throw ContractError("qfi_numeric: step must be > 0");

    const StateVector center = normalized_dyson_state(p, t);
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < 4; ++i)
        if (std::abs(center[i]) > std::abs(center[pivot])) pivot = i;

    const StateVector psi = align_phase(center, pivot);
    const StateVector plus = align_phase(normalized_dyson_state(p.with_b_z(p.b_z + step), t), pivot);
    const StateVector minus = align_phase(normalized_dyson_state(p.with_b_z(p.b_z - step), t), pivot);

    const StateVector diff = plus - minus;
    QfiNumeric out;
    out.precision_warning = diff.norm() < 1e-12;
    const StateVector dpsi = Complex(1.0 / (2.0 * step)) * diff;
    out.value = std::max(0.0, 4.0 * (inner(dpsi, dpsi).real() - std::norm(inner(psi, dpsi))));
    return out;
}

double qfi_long_time_limit(const SystemParams& p) {
    const double c = p.c();
    if (p.j == 0.0 && c == 0.0) throw ContractError("qfi_long_time_limit: degenerate limit for J = C = 0");
    const double den = c * c + 4.0 * p.j * p.j;
    return 16.0 * p.gamma * p.gamma * p.j * p.j / (den * den);
}

double qfi_long_time_limit_printed(const SystemParams& p) {
    // B_z^2 gamma^2 - 4 B_z gamma gamma_phi + 4 gamma_phi^2 is C^2.
    const double c = p.c();
    const double den = c * c + p.j * p.j;
    return 16.0 * p.gamma * p.gamma * p.j * p.j / (den * den);
}

OptimalTime optimal_time(const SystemParams& p, double t_lo, double t_hi) {
    if (!(t_lo >= 0.0 && t_lo < t_hi)) throw ContractError("optimal_time: require 0 <= t_lo < t_hi");
    const auto best = maximize_on_grid([&](double t) { return qfi_closed_form(p, t); }, t_lo, t_hi, 2048, 1e-6);
    return {best.x, best.value};
}

double sensitivity_bound(double f_q, long long n_shots) {
    if (n_shots < 1) throw ContractError("sensitivity_bound: n_shots must be >= 1");
    if (f_q < 0.0) throw ContractError("sensitivity_bound: f_q must be >= 0");
    if (f_q == 0.0) return kInfiniteSensitivity;
    return 1.0 / std::sqrt(static_cast<double>(n_shots) * f_q);
}

namespace {

double contrast(const SystemParams& p, double t) {
    const auto q = closed_form_probabilities(p, t);
    return q.p11 - q.p00;
}

double contrast_slope(const SystemParams& p, double t, double h) {
    return (contrast(p.with_b_z(p.b_z + h), t) - contrast(p.with_b_z(p.b_z - h), t)) / (2.0 * h);
}

}  // namespace

SnrPoint snr_point(const SystemParams& p, double t, long long n_shots, double delta_b) {
    if (n_shots < 1) throw ContractError("snr_point: n_shots must be >= 1");
    SnrPoint s;
    s.t = t;
    const auto q = closed_form_probabilities(p, t);
    s.signal = q.p11 - q.p00;

    // Richardson combination of steps h and h/2 removes the O(h^2) term.
    const double h = 1e-5 * std::max(1.0, std::abs(p.b_z));
    const double coarse = contrast_slope(p, t, h);
    const double fine = contrast_slope(p, t, 0.5 * h);
    s.d_signal_d_bz = (4.0 * fine - coarse) / 3.0;

    const double n = static_cast<double>(n_shots);
    s.variance = (q.p00 * (1.0 - q.p00) + q.p11 * (1.0 - q.p11)) / n;
    s.delta_b_qfi = sensitivity_bound(qfi_closed_form(p, t), n_shots);

    const double slope = std::abs(s.d_signal_d_bz);
    s.flat_signal = slope < 1e-14;
    if (s.flat_signal) {
        s.snr = 0.0;
        s.delta_b_min = kInfiniteSensitivity;
        s.xi = kInfiniteSensitivity;
        return s;
    }
    const double sd = std::sqrt(s.variance);
    s.snr = sd > 0.0 ? slope * delta_b / sd : kInfiniteSensitivity;
    s.delta_b_min = sd / slope;
    s.xi = std::isfinite(s.delta_b_qfi) ? s.delta_b_min / s.delta_b_qfi : kInfiniteSensitivity;
    return s;
}

double estimate_field(const std::array<double, 4>& weights, const SystemParams& p_template, double t, double b_lo,
                      double b_hi) {
    if (!(b_lo < b_hi)) throw ContractError("estimate_field: require b_lo < b_hi");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw ContractError("estimate_field: weights must be finite and >= 0");
        total += w;
    }
    if (!(total > 0.0)) throw ContractError("estimate_field: no observations");

    const auto log_likelihood = [&](double b) {
        const auto probs = closed_form_probabilities(p_template.with_b_z(b), t).values();
        double ll = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            if (weights[i] == 0.0) continue;
            if (probs[i] <= 0.0) return -std::numeric_limits<double>::infinity();
            ll += (weights[i] / total) * std::log(probs[i]);
        }
        return ll;
    };

    constexpr int kGrid = 1024;
    double lowest = std::numeric_limits<double>::infinity();
    double highest = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < kGrid; ++k) {
        const double ll = log_likelihood(b_lo + (b_hi - b_lo) * k / (kGrid - 1));
        lowest = std::min(lowest, ll);
        highest = std::max(highest, ll);
    }
    if (std::isfinite(lowest) && highest - lowest <= 1e-12 * std::max(1.0, std::abs(highest)))
        throw UnidentifiableError("estimate_field: likelihood is flat in B_z over the window");

    return maximize_on_grid(log_likelihood, b_lo, b_hi, kGrid, 1e-8).x;
}

double estimate_field(const MeasurementRecord& record, const SystemParams& p_template, double t, double b_lo,
                      double b_hi) {
    std::array<double, 4> w{};
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        w[i] = static_cast<double>(record.counts[i]);
        sum += record.counts[i];
    }
    if (sum != record.shots) throw ContractError("estimate_field: counts do not sum to shots");
    return estimate_field(w, p_template, t, b_lo, b_hi);
}

}  // namespace qmag
