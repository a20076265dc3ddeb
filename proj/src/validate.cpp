#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "qmag/errors.hpp"
#include "qmag/evolution.hpp"
#include "qmag/metrology.hpp"
#include "qmag/protocol.hpp"
#include "qmag/sweeps.hpp"

namespace qmag {

namespace {

struct Check {
    std::string name;
    double tolerance;
    bool gating = true;
    long long draws = 0;
    double max_violation = 0.0;

    void observe(double violation) {
        ++draws;
        // NaN must register as a violation, never be swallowed by max().
        if (std::isnan(violation) || violation > max_violation) max_violation = violation;
    }
    bool pass() const { return !std::isnan(max_violation) && max_violation <= tolerance; }
};

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return lo + (hi - lo) * rng_.next_unit(); }

    SystemParams params() {
        SystemParams p;
        p.gamma = uniform(0.5, 2.0);
        p.b_z = uniform(-1.0, 1.0);
        p.j = uniform(-1.0, 1.0);
        p.gamma_phi = uniform(0.0, 0.5);
        p.omega_x = uniform(-1.0, 1.0);
        p.omega_y = uniform(-1.0, 1.0);
        p.omega = uniform(0.3, 3.0);
        p.alpha = uniform(0.0, 2.0 * std::numbers::pi);
        return p;
    }

private:
    CounterRng rng_;
};

double max_abs_diff(const std::array<double, 4>& a, const std::array<double, 4>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < 4; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double sum(const std::array<double, 4>& a) { return a[0] + a[1] + a[2] + a[3]; }

}  // namespace

SweepResult run_validate(const SweepSpec& spec) {
    if (spec.kind != SweepKind::Validate) throw ContractError("run_validate: wrong sweep kind");
    spec.validate();

    SweepResult r;
    r.spec_echo = spec;
    r.metadata = {
        {"artifact_version", std::string(kArtifactVersion)},
        {"kind", std::string(to_string(spec.kind))},
        {"preset", spec.preset.empty() ? "none" : spec.preset},
        {"seed", std::to_string(spec.seed)},
        {"draws", std::to_string(spec.draws)},
        {"closed_form_variant", spec.paper_verbatim ? "paper_verbatim" : "corrected"},
        {"basis_convention", std::string(kBasisConvention)},
    };
    r.table.columns = {"check", "draws", "max_violation", "tolerance", "pass", "gating"};

    if (spec.draws == 0) {
        r.metadata.emplace_back("max_margin", format_number(0.0));
        return r;
    }

    Check normalization{"normalization", 1e-12};
    Check exchange{"exchange_symmetry", 1e-12};
    Check pipeline{"closed_form_vs_pipeline", 1e-12};
    Check amplitudes{"amplitudes_vs_pipeline", 1e-12};
    Check qfi{"qfi_closed_form_vs_numeric", 1e-6};
    Check short_time{"short_time_qfi_law", 1e-2};
    Check long_time{"long_time_qfi_limit", 1e-3};
    Check truncation{"dyson_truncation_bound", 1e-8};
    Check unitarity{"exact_unitarity", 1e-10};
    Check verbatim_norm{"report:paper_verbatim_normalization", 1e-12, false};
    Check verbatim_exchange{"report:paper_verbatim_exchange_symmetry", 1e-12, false};
    Check printed_limit{"report:printed_long_time_limit_vs_closed_form", 1e-3, false};

    Sampler sampler(spec.seed);
    double max_margin = 0.0;

    for (int draw = 0; draw < spec.draws; ++draw) {
        const SystemParams p = sampler.params();
        const double t = sampler.uniform(0.0, 10.0);

        const auto dyson = probabilities(p, t, Propagation::Dyson).values();
        const auto verbatim = paper_verbatim_probabilities(p, t);
        const auto closed = spec.paper_verbatim ? verbatim : closed_form_probabilities(p, t).values();
        normalization.observe(std::max(std::abs(sum(closed) - 1.0), std::abs(sum(dyson) - 1.0)));
        exchange.observe(std::max(std::abs(closed[1] - closed[2]), std::abs(dyson[1] - dyson[2])));
        pipeline.observe(max_abs_diff(closed, dyson));
        verbatim_norm.observe(std::abs(sum(verbatim) - 1.0));
        verbatim_exchange.observe(std::abs(verbatim[1] - verbatim[2]));

        const StateVector matrix_state = readout_state(p, t, Propagation::Dyson);
        const StateVector formula_state = dyson_readout_amplitudes(p, t);
        amplitudes.observe((matrix_state - formula_state).norm() / std::max(1.0, matrix_state.norm()));

        const double tq = sampler.uniform(0.1, 10.0);
        const double analytic = qfi_closed_form(p, tq);
        const double numeric = qfi_numeric(p, tq).value;
        qfi.observe(std::abs(numeric - analytic) / analytic);

        const double ts = 1e-3;
        short_time.observe(std::abs(qfi_closed_form(p, ts) / (2.0 * p.gamma * p.gamma * ts * ts) - 1.0));

        if (std::abs(p.j) >= 0.05) {
            const double limit = qfi_long_time_limit(p);
            const double far = qfi_closed_form(p, 1e6 / p.omega);
            long_time.observe(std::abs(far - limit) / limit);
            printed_limit.observe(std::abs(far - qfi_long_time_limit_printed(p)) / far);
        }

        // Short window inside the first-order convergence region.
        const double scale = h_max(p, 10.0, 1024);
        const double tp = std::min(10.0, sampler.uniform(0.0, 0.95) / std::max(scale, 1e-3));
        const auto report = propagator_report(p, tp);
        max_margin = std::max(max_margin, report.margin);
        unitarity.observe(frobenius_norm(report.u_exact.adjoint() * report.u_exact - Matrix4::identity()));
        if (report.margin < 1.0) truncation.observe(report.error_observed - report.error_bound);
    }

    for (const Check* c : {&normalization, &exchange, &pipeline, &amplitudes, &qfi, &short_time, &long_time,
                           &truncation, &unitarity, &verbatim_norm, &verbatim_exchange, &printed_limit}) {
        r.table.rows.push_back({c->name, c->draws, c->max_violation, c->tolerance, c->pass(), c->gating});
        if (c->gating && !c->pass()) r.failures.push_back(c->name);
    }
    r.metadata.emplace_back("max_margin", format_number(max_margin));
    r.metadata.emplace_back("failures", std::to_string(r.failures.size()));
    r.max_margin = max_margin;
    return r;
}

}  // namespace qmag
