#include "qmag/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmag/errors.hpp"

namespace qmag {

SystemParams SystemParams::from_c(double c, double gamma, std::optional<double> b_z) {
    SystemParams p;
    p.gamma = gamma;
    if (b_z) {
        p.b_z = *b_z;
        p.gamma_phi = 0.5 * (gamma * *b_z - c);
    } else {
        if (gamma == 0.0) throw ContractError("from_c: gamma must be nonzero when b_z is derived");
        p.b_z = c / gamma;
        p.gamma_phi = 0.0;
    }
    return p;
}

SystemParams SystemParams::with_b_z(double field) const {
    SystemParams out = *this;
    out.b_z = field;
    return out;
}

SystemParams SystemParams::with_c(double c_value) const {
    if (gamma == 0.0) throw ContractError("with_c: gamma must be nonzero");
    SystemParams out = *this;
    out.b_z = (c_value + 2.0 * gamma_phi) / gamma;
    return out;
}

void SystemParams::validate() const {
    const double fields[] = {gamma, b_z, j, gamma_phi, omega_x, omega_y, omega, alpha};
    for (double v : fields)
        if (!std::isfinite(v)) throw ContractError("SystemParams: all fields must be finite");
    if (!(omega > 0.0)) throw ContractError("SystemParams: omega must be > 0");
    if (gamma_phi < 0.0) throw ContractError("SystemParams: gamma_phi must be >= 0");
}

DerivedQuantities derived_quantities(const SystemParams& p, double t) {
    const double delta = p.omega * t;
    const double c = p.c();
    return DerivedQuantities{
        .delta = delta,
        .delta_x = 1.0 - std::cos(delta),
        .delta_alpha = std::sin(p.alpha) - std::sin(p.alpha + delta),
        .c = c,
        .m = 1.0 + 2.0 * p.j * p.j * t * t + 0.5 * t * t * c * c,
    };
}

namespace {

struct Operators {
    Matrix4 sx = collective(pauli::x());
    Matrix4 sy = collective(pauli::y());
    Matrix4 sz = collective(pauli::z());
    Matrix4 coupling = tensor_product(pauli::z(), pauli::z()) + tensor_product(pauli::x(), pauli::x());
};

const Operators& ops() {
    static const Operators o;
    return o;
}

double lipschitz_constant(const SystemParams& p) {
    return 2.0 * p.omega * (std::abs(p.omega_x) + std::abs(p.omega_y));
}

}  // namespace

Matrix4 hamiltonian_at(const SystemParams& p, double t) {
    const auto& o = ops();
    return (-0.5 * p.c()) * o.sz + p.j * o.coupling + (p.omega_x * std::sin(p.omega * t)) * o.sx +
           (p.omega_y * std::cos(p.omega * t + p.alpha)) * o.sy;
}

Matrix4 integrated_hamiltonian(const SystemParams& p, double t) {
    const auto& o = ops();
    const auto d = derived_quantities(p, t);
    return (-0.5 * d.c * t) * o.sz + (p.j * t) * o.coupling + (p.omega_x * d.delta_x / p.omega) * o.sx -
           (p.omega_y * d.delta_alpha / p.omega) * o.sy;
}

double h_max(const SystemParams& p, double t, int grid_points) {
    if (grid_points < 64) throw ContractError("h_max: grid_points must be >= 64");
    if (t <= 0.0) return spectral_norm(hamiltonian_at(p, 0.0));
    const double dt = t / grid_points;
    double best = 0.0;
    for (int k = 0; k <= grid_points; ++k) best = std::max(best, spectral_norm(hamiltonian_at(p, k * dt)));
    return best + lipschitz_constant(p) * dt;
}

double convergence_margin(const SystemParams& p, double t) {
    if (t == 0.0) return 0.0;
    return h_max(p, t) * t;
}

double truncation_error_bound_from_margin(double margin) { return 0.5 * margin * margin; }

double truncation_error_bound(const SystemParams& p, double t) {
    return truncation_error_bound_from_margin(convergence_margin(p, t));
}

HmaxProfile::HmaxProfile(const SystemParams& p, double t_max, int samples)
    : params_(p), spacing_(0.0), lipschitz_(lipschitz_constant(p)) {
    if (samples < 1) throw ContractError("HmaxProfile: samples must be positive");
    if (!(t_max >= 0.0)) throw ContractError("HmaxProfile: t_max must be >= 0");
    spacing_ = t_max / samples;
    running_max_.resize(static_cast<std::size_t>(samples) + 1);
    double best = 0.0;
    for (int k = 0; k <= samples; ++k) {
        best = std::max(best, spectral_norm(hamiltonian_at(p, k * spacing_)));
        running_max_[static_cast<std::size_t>(k)] = best;
    }
}

double HmaxProfile::bound(double t) const {
    if (spacing_ == 0.0) return running_max_.front();
    const double pos = std::max(0.0, t) / spacing_;
    if (pos > static_cast<double>(running_max_.size() - 1) * (1.0 + 1e-12))
        throw ContractError("HmaxProfile: time beyond profiled range");
    const auto idx = std::min(running_max_.size() - 1, static_cast<std::size_t>(pos));
    return running_max_[idx] + lipschitz_ * spacing_;
}

}  // namespace qmag
