#pragma once

// Prepare / evolve / inverse-Hadamard / measure, with readout probabilities
// available three ways: the Dyson matrix pipeline, its closed form, and the
// exact time-ordered propagator.

#include <array>
#include <cstdint>
#include <string_view>

#include "qmag/linalg.hpp"
#include "qmag/model.hpp"

namespace qmag {

inline constexpr std::string_view kBasisConvention =
    "basis |00>,|01>,|10>,|11>, qubit 1 is the left tensor factor; p01 = p10 by qubit exchange, "
    "p11 carries the J^2 Delta^2 numerator";

enum class Propagation { Dyson, Exact };

enum class ProbabilitySource { NumericDyson, ClosedForm, NumericExact };

std::string_view to_string(ProbabilitySource s);

struct ProbabilityQuad {
    double p00 = 0.0;
    double p01 = 0.0;
    double p10 = 0.0;
    double p11 = 0.0;
    ProbabilitySource source = ProbabilitySource::ClosedForm;

    double sum() const { return p00 + p01 + p10 + p11; }
    std::array<double, 4> values() const { return {p00, p01, p10, p11}; }
};

/// (H (x) H)|00> = (|00> + |01> + |10> + |11>) / 2.
StateVector prepare_initial();

/// (H (x) H) U(t) |psi(0)>. Unnormalized for the Dyson propagator.
StateVector readout_state(const SystemParams& p, double t, Propagation method);

/// Closed-form amplitudes of the Dyson readout state:
///   a00 = 1 - i (J t + 2 Omega_x delta_x / omega)
///   a01 = a10 = i C t / 2 + Omega_y delta_alpha / omega
///   a11 = -i J t
StateVector dyson_readout_amplitudes(const SystemParams& p, double t);

/// |<ij|alpha>|^2 normalized by the readout state's squared norm.
ProbabilityQuad probabilities(const SystemParams& p, double t, Propagation method);

/// Closed forms over the shared denominator
///   D = omega^2 M + 4 Omega_x delta_x (Omega_x delta_x + J Delta) + 2 Omega_y^2 delta_alpha^2.
ProbabilityQuad closed_form_probabilities(const SystemParams& p, double t);

/// The uncorrected variant: -J Delta in the p01/p10/p11 denominators and the
/// p10/p11 numerators exchanged. Kept only for discrepancy reporting; the
/// values neither sum to one nor respect qubit exchange.
std::array<double, 4> paper_verbatim_probabilities(const SystemParams& p, double t);

struct MeasurementRecord {
    std::array<std::uint64_t, 4> counts{};  // n00, n01, n10, n11
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
};

/// Counter-based SplitMix64 stream: draw k is mix64(seed + (k + 1) * 0x9E3779B97F4A7C15),
/// mapped to [0, 1) through its top 53 bits. Identical on every platform.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
    std::uint64_t next_u64();
    double next_unit();

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

/// One categorical draw per shot against the closed-form probabilities,
/// compared with the cumulative sums in the order 00, 01, 10, 11.
MeasurementRecord simulate_counts(const SystemParams& p, double t, std::uint64_t shots, std::uint64_t seed);

}  // namespace qmag
