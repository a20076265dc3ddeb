#pragma once

#include <array>
#include <limits>
#include <optional>

#include "qmag/model.hpp"
#include "qmag/protocol.hpp"

namespace qmag {

inline constexpr double kInfiniteSensitivity = std::numeric_limits<double>::infinity();

/// QFI of the normalized first-order Dyson state with respect to B_z:
///
///   F_Q = 2 gamma^2 Delta^2 (omega^2 + 2 J^2 Delta^2 + 4 J Delta dx Ox + 4 dx^2 Ox^2)
///         / (M omega^2 + 4 J Delta dx Ox + 4 dx^2 Ox^2 + 2 da^2 Oy^2)^2
double qfi_closed_form(const SystemParams& p, double t);

struct QfiNumeric {
    double value = 0.0;
    /// Set when the two displaced states differ by less than 1e-12, i.e. the
    /// finite difference is dominated by round-off.
    bool precision_warning = false;
};

/// Pure-state QFI 4 (<d psi|d psi> - |<psi|d psi>|^2) with d psi taken as a
/// central difference in B_z (gamma_phi fixed). Each displaced state is
/// normalized and rotated so that the amplitude that dominates the unshifted
/// state is real and positive. Default step: 1e-5 max(1, |B_z|).
QfiNumeric qfi_numeric(const SystemParams& p, double t, std::optional<double> h = std::nullopt);

/// lim_{t -> inf} F_Q = 16 gamma^2 J^2 / (C^2 + 4 J^2)^2. Throws ContractError
/// when J = C = 0.
double qfi_long_time_limit(const SystemParams& p);

/// The uncorrected form 16 gamma^2 J^2 / (C^2 + J^2)^2, for discrepancy
/// reports only.
double qfi_long_time_limit_printed(const SystemParams& p);

struct OptimalTime {
    double t_star = 0.0;
    double f_q_star = 0.0;
};

/// Global maximum of qfi_closed_form on [t_lo, t_hi] (2048-point bracket,
/// golden-section to 1e-6, ties toward smaller t).
OptimalTime optimal_time(const SystemParams& p, double t_lo, double t_hi);

/// 1 / sqrt(n_shots f_q); kInfiniteSensitivity when f_q = 0.
double sensitivity_bound(double f_q, long long n_shots);

struct SnrPoint {
    double t = 0.0;
    double signal = 0.0;         // p11 - p00
    double d_signal_d_bz = 0.0;  // gamma_phi held fixed
    double variance = 0.0;       // [p00 (1 - p00) + p11 (1 - p11)] / N
    double snr = 0.0;            // |dS/dB_z| delta_b / sqrt(variance)
    double delta_b_min = 0.0;    // sqrt(variance) / |dS/dB_z|
    double delta_b_qfi = 0.0;    // 1 / sqrt(N F_Q)
    double xi = 0.0;             // delta_b_min / delta_b_qfi
    bool flat_signal = false;    // |dS/dB_z| < 1e-14; delta_b_min and xi are infinite
};

SnrPoint snr_point(const SystemParams& p, double t, long long n_shots, double delta_b);

/// Maximum-likelihood B_z from multinomial counts (gamma_phi held at the
/// template's value): 1024-point grid bracket, then golden-section to 1e-8.
/// Throws UnidentifiableError when the likelihood is flat over the window.
double estimate_field(const MeasurementRecord& record, const SystemParams& p_template, double t, double b_lo,
                      double b_hi);

/// Same estimator with fractional outcome weights, e.g. exact probabilities
/// standing in for infinitely many shots.
double estimate_field(const std::array<double, 4>& weights, const SystemParams& p_template, double t, double b_lo,
                      double b_hi);

}  // namespace qmag
