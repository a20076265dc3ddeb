#pragma once

// Two-qubit magnetometer Hamiltonian (hbar = 1):
//
//   H(t) = -1/2 gamma B_z Sz + J (ZZ + XX) + gamma_phi Sz
//          + Omega_x sin(omega t) Sx + Omega_y cos(omega t + alpha) Sy,
//
// with Sa = sigma_1a + sigma_2a. B_z and gamma_phi enter only through the
// effective parameter C = gamma B_z - 2 gamma_phi.

#include <optional>
#include <vector>

#include "qmag/linalg.hpp"

namespace qmag {

struct SystemParams {
    double gamma = 1.0;
    double b_z = 0.1;
    double j = 0.0;
    double gamma_phi = 0.0;
    double omega_x = 0.0;
    double omega_y = 0.0;
    double omega = 1.0;
    double alpha = 0.0;

    /// Parameterize by C directly. With no b_z, gamma_phi is 0 and
    /// b_z = c / gamma; otherwise gamma_phi = (gamma b_z - c) / 2.
    static SystemParams from_c(double c, double gamma = 1.0, std::optional<double> b_z = std::nullopt);

    double c() const { return gamma * b_z - 2.0 * gamma_phi; }

    /// Copy with a different field, holding gamma_phi fixed (dC/dB_z = gamma).
    SystemParams with_b_z(double field) const;
    /// Copy with a different C, realized by moving b_z at fixed gamma_phi.
    SystemParams with_c(double c_value) const;

    /// Throws ContractError on non-finite fields, omega <= 0 or gamma_phi < 0.
    void validate() const;

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

struct DerivedQuantities {
    double delta;        // omega t
    double delta_x;      // 1 - cos(delta)
    double delta_alpha;  // sin(alpha) - sin(alpha + delta)
    double c;            // gamma B_z - 2 gamma_phi
    double m;            // 1 + 2 J^2 t^2 + t^2 C^2 / 2
};

DerivedQuantities derived_quantities(const SystemParams& p, double t);

Matrix4 hamiltonian_at(const SystemParams& p, double t);

/// Closed-form integral of H over [0, t].
Matrix4 integrated_hamiltonian(const SystemParams& p, double t);

inline constexpr int kDefaultHmaxGrid = 4096;

/// Certified upper bound on sup_{[0,t]} ||H||: maximum spectral norm over
/// grid_points + 1 uniform samples, plus the Lipschitz allowance
/// 2 omega (|Omega_x| + |Omega_y|) dt.
double h_max(const SystemParams& p, double t, int grid_points = kDefaultHmaxGrid);

/// H_max t; first-order Dyson truncation is trusted when this is below 1.
double convergence_margin(const SystemParams& p, double t);

/// (H_max t)^2 / 2 as a bound on the norm of the neglected Dyson terms.
double truncation_error_bound(const SystemParams& p, double t);
double truncation_error_bound_from_margin(double margin);

/// The same certified bound as h_max, but sampled once on a fixed lattice over
/// [0, t_max] so that many times can be queried cheaply. Every point of [0, t]
/// lies within one spacing above a lattice sample <= t, so the running maximum
/// plus one spacing's Lipschitz allowance bounds the supremum.
class HmaxProfile {
public:
    HmaxProfile(const SystemParams& p, double t_max, int samples = kDefaultHmaxGrid);

    double bound(double t) const;
    double margin(double t) const { return bound(t) * t; }

private:
    SystemParams params_;
    double spacing_;
    double lipschitz_;
    std::vector<double> running_max_;
};

}  // namespace qmag
