#include "qmag/protocol.hpp"

#include <cmath>

#include "qmag/errors.hpp"
#include "qmag/evolution.hpp"

namespace qmag {

namespace {

constexpr Complex kI{0.0, 1.0};

const Matrix4& hadamard_pair() {
    static const Matrix4 h = tensor_product(pauli::hadamard(), pauli::hadamard());
    return h;
}

ProbabilityQuad from_state(const StateVector& v, ProbabilitySource source) {
    const double n2 = v.norm_squared();
    if (!(n2 > 0.0)) throw ContractError("probabilities: readout state has zero norm");
    return ProbabilityQuad{std::norm(v[0]) / n2, std::norm(v[1]) / n2, std::norm(v[2]) / n2,
                           std::norm(v[3]) / n2, source};
}

}  // namespace

std::string_view to_string(ProbabilitySource s) {
    switch (s) {
        case ProbabilitySource::NumericDyson: return "numeric_dyson";
        case ProbabilitySource::ClosedForm: return "closed_form";
        case ProbabilitySource::NumericExact: return "numeric_exact";
    }
    return "unknown";
}

StateVector prepare_initial() {
    return hadamard_pair() * StateVector({1.0, 0.0, 0.0, 0.0});
}

StateVector readout_state(const SystemParams& p, double t, Propagation method) {
    if (t < 0.0) throw ContractError("readout_state: t must be >= 0");
    const Matrix4 u = method == Propagation::Dyson ? dyson1_propagator(p, t) : exact_propagator(p, t);
    return hadamard_pair() * (u * prepare_initial());
}

StateVector dyson_readout_amplitudes(const SystemParams& p, double t) {
    const auto d = derived_quantities(p, t);
    const Complex side = kI * (0.5 * d.c * t) + p.omega_y * d.delta_alpha / p.omega;
    return StateVector({1.0 - kI * (p.j * t + 2.0 * p.omega_x * d.delta_x / p.omega), side, side,
                        -kI * (p.j * t)});
}

ProbabilityQuad probabilities(const SystemParams& p, double t, Propagation method) {
    return from_state(readout_state(p, t, method), method == Propagation::Dyson ? ProbabilitySource::NumericDyson
                                                                                : ProbabilitySource::NumericExact);
}

ProbabilityQuad closed_form_probabilities(const SystemParams& p, double t) {
    if (t < 0.0) throw ContractError("closed_form_probabilities: t must be >= 0");
    const auto d = derived_quantities(p, t);
    const double w2 = p.omega * p.omega;
    const double jd = p.j * d.delta;
    const double xq = p.omega_x * d.delta_x;
    const double yq2 = p.omega_y * p.omega_y * d.delta_alpha * d.delta_alpha;
    const double denom = w2 * d.m + 4.0 * xq * (xq + jd) + 2.0 * yq2;

    const double side = (d.delta * d.delta * d.c * d.c / 4.0 + yq2) / denom;
    return ProbabilityQuad{(w2 + (jd + 2.0 * xq) * (jd + 2.0 * xq)) / denom, side, side, jd * jd / denom,
                           ProbabilitySource::ClosedForm};
}

std::array<double, 4> paper_verbatim_probabilities(const SystemParams& p, double t) {
    const auto d = derived_quantities(p, t);
    const double w2 = p.omega * p.omega;
    const double jd = p.j * d.delta;
    const double xq = p.omega_x * d.delta_x;
    const double yq2 = p.omega_y * p.omega_y * d.delta_alpha * d.delta_alpha;
    const double plus = w2 * d.m + 4.0 * xq * (xq + jd) + 2.0 * yq2;
    const double minus = w2 * d.m + 4.0 * xq * (xq - jd) + 2.0 * yq2;
    const double side = d.delta * d.delta * d.c * d.c / 4.0 + yq2;
    return {(w2 + (jd + 2.0 * xq) * (jd + 2.0 * xq)) / plus, side / minus, jd * jd / minus, side / minus};
}

std::uint64_t CounterRng::next_u64() {
    ++counter_;
    std::uint64_t z = seed_ + counter_ * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double CounterRng::next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

MeasurementRecord simulate_counts(const SystemParams& p, double t, std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) throw ContractError("simulate_counts: shots must be >= 1");
    const auto probs = closed_form_probabilities(p, t).values();
    std::array<double, 3> cumulative{};
    double acc = 0.0;
    for (std::size_t i = 0; i < 3; ++i) cumulative[i] = (acc += probs[i]);

    MeasurementRecord rec;
    rec.shots = shots;
    rec.seed = seed;
    CounterRng rng(seed);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = rng.next_unit();
        std::size_t k = 0;
        while (k < 3 && u >= cumulative[k]) ++k;
        // Outcomes with zero probability are never selected.
        while (k > 0 && probs[k] == 0.0) --k;
        ++rec.counts[k];
    }
    return rec;
}

}  // namespace qmag
