#include "qmag/sweeps.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "parallel.hpp"
#include "qmag/config.hpp"
#include "qmag/errors.hpp"
#include "qmag/metrology.hpp"
#include "qmag/protocol.hpp"

namespace qmag {

std::string_view to_string(SweepKind k) {
    switch (k) {
        case SweepKind::QfiCurve: return "QFI_CURVE";
        case SweepKind::SensitivityCurve: return "SENSITIVITY_CURVE";
        case SweepKind::HeatmapTC: return "HEATMAP_TC";
        case SweepKind::HeatmapTJ: return "HEATMAP_TJ";
        case SweepKind::DecoherenceCompare: return "DECOHERENCE_COMPARE";
        case SweepKind::SnrCurve: return "SNR_CURVE";
        case SweepKind::Validate: return "VALIDATE";
    }
    return "UNKNOWN";
}

namespace {

constexpr std::pair<std::string_view, SweepKind> kSubcommands[] = {
    {"qfi-curve", SweepKind::QfiCurve},
    {"sensitivity-curve", SweepKind::SensitivityCurve},
    {"heatmap-tc", SweepKind::HeatmapTC},
    {"heatmap-tj", SweepKind::HeatmapTJ},
    {"decoherence-compare", SweepKind::DecoherenceCompare},
    {"snr-curve", SweepKind::SnrCurve},
    {"validate", SweepKind::Validate},
};

}  // namespace

std::optional<SweepKind> sweep_kind_from_subcommand(std::string_view name) {
    for (const auto& [sub, kind] : kSubcommands)
        if (sub == name) return kind;
    return std::nullopt;
}

std::string_view subcommand_name(SweepKind k) {
    for (const auto& [sub, kind] : kSubcommands)
        if (kind == k) return sub;
    return "";
}

std::vector<double> Range::values() const {
    std::vector<double> out(static_cast<std::size_t>(std::max(points, 0)));
    const double step = (hi - lo) / (points - 1);
    for (int k = 0; k < points; ++k) out[static_cast<std::size_t>(k)] = k == points - 1 ? hi : lo + k * step;
    return out;
}

void Range::validate(std::string_view what) const {
    if (points < 2) throw ContractError(std::string(what) + ": need at least 2 points");
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
        throw ContractError(std::string(what) + ": range must be finite with lo < hi");
}

void SweepSpec::validate() const {
    params.validate();
    if (n_shots < 1) throw ContractError("sweep: n_shots must be >= 1");
    if (kind == SweepKind::Validate) {
        if (draws < 0) throw ContractError("sweep: draws must be >= 0");
        return;
    }
    t_range.validate("t_range");
    if (t_range.lo < 0.0) throw ContractError("t_range: times must be >= 0");
    if (kind == SweepKind::HeatmapTC || kind == SweepKind::HeatmapTJ) {
        if (!secondary_range) throw ContractError("heatmap: secondary_range is required");
        secondary_range->validate("secondary_range");
    }
}

namespace {

constexpr double kPi = std::numbers::pi;

// Parameter regime shared by the QFI and sensitivity figures.
SystemParams reference_regime(double alpha) {
    SystemParams p = SystemParams::from_c(0.1);
    p.j = 0.2;
    p.omega = 1.0;
    p.omega_x = 0.5;
    p.omega_y = 0.5;
    p.alpha = alpha;
    return p;
}

const std::string kRegimeNote =
    "preset regime omega=1, Omega_x=Omega_y=1/2, J=2/10, C=1/10; gamma=1, b_z=0.1, gamma_phi=0 chosen to realize C";

}  // namespace

std::optional<SweepSpec> preset(std::string_view name) {
    SweepSpec s;
    s.preset = std::string(name);
    if (name == "fig1") {
        s.kind = SweepKind::QfiCurve;
        s.params = reference_regime(0.0);
        s.alphas = {0.0, kPi / 4};
        s.t_range = {0.0, 10.0, 1001};
        s.notes = {"fig1: QFI versus evolution time for alpha=0 and alpha=pi/4", kRegimeNote,
                   "time window [0,10], the same time axis as the fig3 heatmaps"};
    } else if (name == "fig2") {
        s.kind = SweepKind::SensitivityCurve;
        s.params = reference_regime(0.0);
        s.alphas = {0.0, kPi / 4};
        s.t_range = {0.0, 10.0, 1001};
        s.notes = {"fig2: sqrt(N) Delta B_z versus t, parameters as in fig1", kRegimeNote};
    } else if (name == "fig3a") {
        s.kind = SweepKind::HeatmapTC;
        s.params = reference_regime(kPi / 4);
        s.t_range = {0.0, 10.0, 201};
        s.secondary_range = Range{0.0, 1.0, 201};
        s.notes = {"fig3a: sqrt(N) Delta B_z over t in [0,10] and C in [0,1], alpha=pi/4, Omega_x=Omega_y=1/2",
                   "J=2/10 as in fig1"};
    } else if (name == "fig3b") {
        s.kind = SweepKind::HeatmapTJ;
        s.params = reference_regime(kPi / 4);
        s.t_range = {0.0, 10.0, 201};
        s.secondary_range = Range{0.0, 1.0, 201};
        s.notes = {"fig3b: sqrt(N) Delta B_z over t in [0,10] and J in [0,1], alpha=pi/4, Omega_x=Omega_y=1/2",
                   "C=1/10 as in fig1"};
    } else if (name == "fig5") {
        s.kind = SweepKind::DecoherenceCompare;
        s.params = reference_regime(kPi / 4);
        s.params.j = 0.3;
        s.compare_c = {0.0, 0.2};
        s.t_range = {0.0, 20.0, 2001};
        s.notes = {"fig5: ideal C=0 versus dephased C=0.2, J=0.3, alpha=pi/4, Omega_x=Omega_y=0.5"};
    } else if (name == "fig6") {
        s.kind = SweepKind::SnrCurve;
        s.params = reference_regime(0.0);
        s.t_range = {0.0, 20.0, 200};
        s.n_shots = 1;
        s.notes = {"fig6: delta B_z^min, delta B_z^QFI and xi versus t, parameters as in fig1", kRegimeNote,
                   "default N=1, so values are sqrt(N)-scaled"};
    } else if (name == "validate") {
        s.kind = SweepKind::Validate;
        s.draws = 100;
        s.seed = 1;
        s.notes = {"seeded invariant suite over random parameter draws"};
    } else {
        return std::nullopt;
    }
    return s;
}

std::vector<std::string> preset_names() { return {"fig1", "fig2", "fig3a", "fig3b", "fig5", "fig6", "validate"}; }

std::string_view default_preset(SweepKind k) {
    switch (k) {
        case SweepKind::QfiCurve: return "fig1";
        case SweepKind::SensitivityCurve: return "fig2";
        case SweepKind::HeatmapTC: return "fig3a";
        case SweepKind::HeatmapTJ: return "fig3b";
        case SweepKind::DecoherenceCompare: return "fig5";
        case SweepKind::SnrCurve: return "fig6";
        case SweepKind::Validate: return "validate";
    }
    return "";
}

std::size_t Table::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw ContractError("table has no column '" + std::string(name) + "'");
}

std::vector<double> Table::numeric_column(std::string_view name) const {
    const auto idx = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        const auto& cell = row[idx];
        if (const auto* d = std::get_if<double>(&cell)) out.push_back(*d);
        else if (const auto* i = std::get_if<long long>(&cell)) out.push_back(static_cast<double>(*i));
        else if (const auto* b = std::get_if<bool>(&cell)) out.push_back(*b ? 1.0 : 0.0);
        else throw ContractError("column '" + std::string(name) + "' is not numeric");
    }
    return out;
}

const std::string* SweepResult::meta(std::string_view key) const {
    for (const auto& [k, v] : metadata)
        if (k == key) return &v;
    return nullptr;
}

double SweepResult::meta_number(std::string_view key) const {
    const auto* v = meta(key);
    if (!v) throw ContractError("metadata has no key '" + std::string(key) + "'");
    if (*v == "inf") return std::numeric_limits<double>::infinity();
    return std::stod(*v);
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string format_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
    return std::get<std::string>(c);
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

SweepResult start_result(const SweepSpec& spec) {
    spec.validate();
    SweepResult r;
    r.spec_echo = spec;
    r.metadata = {
        {"artifact_version", std::string(kArtifactVersion)},
        {"kind", std::string(to_string(spec.kind))},
        {"preset", spec.preset.empty() ? "none" : spec.preset},
        {"spec", spec_to_json(spec).dump()},
        {"basis_convention", std::string(kBasisConvention)},
        {"closed_form_variant", "shared denominator omega^2 M + 4 Omega_x dx (Omega_x dx + J Delta) + "
                                "2 Omega_y^2 da^2"},
        {"dyson_trust_rule", "dyson_trusted = (H_max t < 1)"},
        {"timestamp", iso_timestamp()},
    };
    for (std::size_t i = 0; i < spec.notes.size(); ++i)
        r.metadata.emplace_back("note_" + std::to_string(i), spec.notes[i]);
    return r;
}

void finish_result(SweepResult& r, double max_margin) {
    r.max_margin = max_margin;
    r.metadata.emplace_back("max_margin", format_number(max_margin));
}

void add_meta(SweepResult& r, std::string key, double value) {
    r.metadata.emplace_back(std::move(key), format_number(value));
}

void add_meta(SweepResult& r, std::string key, bool value) {
    r.metadata.emplace_back(std::move(key), value ? "true" : "false");
}

std::string alpha_tag(double alpha) { return "@alpha=" + format_number(alpha); }

double sqrt_n_sensitivity(const SystemParams& p, double t) { return sensitivity_bound(qfi_closed_form(p, t), 1); }

std::vector<double> effective_alphas(const SweepSpec& spec) {
    return spec.alphas.empty() ? std::vector<double>{spec.params.alpha} : spec.alphas;
}

// Samples the trust margin for one parameter set along a time grid.
std::vector<double> margins_along(const SystemParams& p, const std::vector<double>& ts, int samples) {
    const HmaxProfile profile(p, ts.back(), samples);
    std::vector<double> out(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) out[i] = profile.margin(ts[i]);
    return out;
}

constexpr int kCurveProfileSamples = kDefaultHmaxGrid;
constexpr int kHeatmapProfileSamples = 1024;

bool is_interior(double x, const Range& r) {
    const double slack = 1e-9 * (r.hi - r.lo);
    return x > r.lo + slack && x < r.hi - slack;
}

}  // namespace

SweepResult run_qfi_curve(const SweepSpec& spec) {
    if (spec.kind != SweepKind::QfiCurve) throw ContractError("run_qfi_curve: wrong sweep kind");
    SweepResult r = start_result(spec);
    r.table.columns = {"t", "f_q", "sqrtN_delta_b", "alpha", "margin", "dyson_trusted"};
    const auto ts = spec.t_range.values();
    const auto alphas = effective_alphas(spec);

    std::vector<std::vector<std::vector<Cell>>> blocks(alphas.size());
    std::vector<OptimalTime> optima(alphas.size());
    std::vector<double> block_max(alphas.size(), 0.0);
    detail::parallel_for(alphas.size(), [&](std::size_t a) {
        SystemParams p = spec.params;
        p.alpha = alphas[a];
        const auto margins = margins_along(p, ts, kCurveProfileSamples);
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double f = qfi_closed_form(p, ts[i]);
            blocks[a].push_back({ts[i], f, sensitivity_bound(f, 1), alphas[a], margins[i], margins[i] < 1.0});
            block_max[a] = std::max(block_max[a], margins[i]);
        }
        optima[a] = optimal_time(p, spec.t_range.lo, spec.t_range.hi);
    });

    for (std::size_t a = 0; a < alphas.size(); ++a) {
        for (auto& row : blocks[a]) r.table.rows.push_back(std::move(row));
        add_meta(r, "t_star" + alpha_tag(alphas[a]), optima[a].t_star);
        add_meta(r, "f_q_star" + alpha_tag(alphas[a]), optima[a].f_q_star);
    }
    finish_result(r, *std::ranges::max_element(block_max));
    return r;
}

SweepResult run_sensitivity_curve(const SweepSpec& spec) {
    if (spec.kind != SweepKind::SensitivityCurve) throw ContractError("run_sensitivity_curve: wrong sweep kind");
    SweepResult r = start_result(spec);
    r.table.columns = {"t", "sqrtN_delta_b", "alpha", "margin", "dyson_trusted"};
    const auto ts = spec.t_range.values();
    const auto alphas = effective_alphas(spec);

    std::vector<std::vector<std::vector<Cell>>> blocks(alphas.size());
    std::vector<OptimalTime> optima(alphas.size());
    std::vector<double> block_max(alphas.size(), 0.0);
    detail::parallel_for(alphas.size(), [&](std::size_t a) {
        SystemParams p = spec.params;
        p.alpha = alphas[a];
        const auto margins = margins_along(p, ts, kCurveProfileSamples);
        for (std::size_t i = 0; i < ts.size(); ++i) {
            blocks[a].push_back({ts[i], sqrt_n_sensitivity(p, ts[i]), alphas[a], margins[i], margins[i] < 1.0});
            block_max[a] = std::max(block_max[a], margins[i]);
        }
        // 1/sqrt(F_Q) is minimized exactly where F_Q is maximized.
        optima[a] = optimal_time(p, spec.t_range.lo, spec.t_range.hi);
    });

    for (std::size_t a = 0; a < alphas.size(); ++a) {
        for (auto& row : blocks[a]) r.table.rows.push_back(std::move(row));
        const auto tag = alpha_tag(alphas[a]);
        add_meta(r, "argmin_t" + tag, optima[a].t_star);
        add_meta(r, "min_sqrtN_delta_b" + tag, sensitivity_bound(optima[a].f_q_star, 1));
        add_meta(r, "interior_min" + tag, is_interior(optima[a].t_star, spec.t_range));
    }
    finish_result(r, *std::ranges::max_element(block_max));
    return r;
}

SweepResult run_heatmap(const SweepSpec& spec) {
    if (spec.kind != SweepKind::HeatmapTC && spec.kind != SweepKind::HeatmapTJ)
        throw ContractError("run_heatmap: wrong sweep kind");
    SweepResult r = start_result(spec);
    const bool over_c = spec.kind == SweepKind::HeatmapTC;
    r.table.columns = {"t", over_c ? "c" : "j", "sqrtN_delta_b", "margin", "dyson_trusted"};
    const auto ts = spec.t_range.values();
    const auto axis = spec.secondary_range->values();

    std::vector<std::vector<std::vector<Cell>>> blocks(axis.size());
    std::vector<double> block_max(axis.size(), 0.0);
    detail::parallel_for(axis.size(), [&](std::size_t a) {
        SystemParams p = over_c ? spec.params.with_c(axis[a]) : spec.params;
        if (!over_c) p.j = axis[a];
        const auto margins = margins_along(p, ts, kHeatmapProfileSamples);
        blocks[a].reserve(ts.size());
        for (std::size_t i = 0; i < ts.size(); ++i) {
            blocks[a].push_back({ts[i], axis[a], sqrt_n_sensitivity(p, ts[i]), margins[i], margins[i] < 1.0});
            block_max[a] = std::max(block_max[a], margins[i]);
        }
    });
    r.table.rows.reserve(ts.size() * axis.size());
    for (auto& block : blocks)
        for (auto& row : block) r.table.rows.push_back(std::move(row));
    r.metadata.emplace_back("row_order", std::string("outer ") + (over_c ? "c" : "j") + ", inner t");
    finish_result(r, *std::ranges::max_element(block_max));
    return r;
}

SweepResult run_decoherence_compare(const SweepSpec& spec) {
    if (spec.kind != SweepKind::DecoherenceCompare) throw ContractError("run_decoherence_compare: wrong sweep kind");
    SweepResult r = start_result(spec);
    r.table.columns = {"t", "sqrtN_delta_b_C0", "sqrtN_delta_b_C02", "margin_C0", "margin_C02", "dyson_trusted"};
    const auto ts = spec.t_range.values();
    const SystemParams ideal = spec.params.with_c(spec.compare_c.first);
    const SystemParams noisy = spec.params.with_c(spec.compare_c.second);
    const auto m_ideal = margins_along(ideal, ts, kCurveProfileSamples);
    const auto m_noisy = margins_along(noisy, ts, kCurveProfileSamples);

    double max_margin = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double worst = std::max(m_ideal[i], m_noisy[i]);
        r.table.rows.push_back({ts[i], sqrt_n_sensitivity(ideal, ts[i]), sqrt_n_sensitivity(noisy, ts[i]), m_ideal[i],
                                m_noisy[i], worst < 1.0});
        max_margin = std::max(max_margin, worst);
    }

    const auto best_ideal = optimal_time(ideal, spec.t_range.lo, spec.t_range.hi);
    const auto best_noisy = optimal_time(noisy, spec.t_range.lo, spec.t_range.hi);
    const double min_ideal = sensitivity_bound(best_ideal.f_q_star, 1);
    const double min_noisy = sensitivity_bound(best_noisy.f_q_star, 1);
    add_meta(r, "c_ideal", spec.compare_c.first);
    add_meta(r, "c_noisy", spec.compare_c.second);
    add_meta(r, "t_star_C0", best_ideal.t_star);
    add_meta(r, "min_C0", min_ideal);
    add_meta(r, "t_star_C02", best_noisy.t_star);
    add_meta(r, "min_C02", min_noisy);
    add_meta(r, "c02_min_value_exceeds_c0_min_value", min_noisy > min_ideal);
    add_meta(r, "c02_min_exceeds_c0_at_same_t", min_noisy > sqrt_n_sensitivity(ideal, best_noisy.t_star));
    add_meta(r, "c02_t_star_smaller", best_noisy.t_star < best_ideal.t_star);
    finish_result(r, max_margin);
    return r;
}

SweepResult run_snr_curve(const SweepSpec& spec) {
    if (spec.kind != SweepKind::SnrCurve) throw ContractError("run_snr_curve: wrong sweep kind");
    SweepResult r = start_result(spec);
    r.table.columns = {"t",  "signal",        "dS_dBz", "delta_b_min", "delta_b_qfi",
                       "xi", "flat_signal",   "margin", "dyson_trusted"};
    const auto ts = spec.t_range.values();
    const auto margins = margins_along(spec.params, ts, kCurveProfileSamples);

    std::vector<SnrPoint> points(ts.size());
    detail::parallel_for(ts.size(), [&](std::size_t i) {
        // The probe shift only scales the raw SNR, which is not tabulated.
        points[i] = snr_point(spec.params, ts[i], spec.n_shots, 1.0);
    });

    double max_margin = 0.0;
    double min_xi = kInfiniteSensitivity;
    std::size_t argmin_min = 0;
    std::size_t argmin_qfi = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto& s = points[i];
        r.table.rows.push_back({ts[i], s.signal, s.d_signal_d_bz, s.delta_b_min, s.delta_b_qfi, s.xi, s.flat_signal,
                                margins[i], margins[i] < 1.0});
        max_margin = std::max(max_margin, margins[i]);
        if (std::isfinite(s.xi)) min_xi = std::min(min_xi, s.xi);
        if (s.delta_b_min < points[argmin_min].delta_b_min) argmin_min = i;
        if (s.delta_b_qfi < points[argmin_qfi].delta_b_qfi) argmin_qfi = i;
    }
    r.metadata.emplace_back("n_shots", std::to_string(spec.n_shots));
    add_meta(r, "argmin_t_delta_b_min", ts[argmin_min]);
    add_meta(r, "min_delta_b_min", points[argmin_min].delta_b_min);
    add_meta(r, "argmin_t_delta_b_qfi", ts[argmin_qfi]);
    add_meta(r, "min_delta_b_qfi", points[argmin_qfi].delta_b_qfi);
    add_meta(r, "interior_min_delta_b_min", argmin_min > 0 && argmin_min + 1 < ts.size());
    add_meta(r, "interior_min_delta_b_qfi", argmin_qfi > 0 && argmin_qfi + 1 < ts.size());
    add_meta(r, "min_xi", min_xi);
    finish_result(r, max_margin);
    return r;
}

SweepResult run_sweep(const SweepSpec& spec) {
    switch (spec.kind) {
        case SweepKind::QfiCurve: return run_qfi_curve(spec);
        case SweepKind::SensitivityCurve: return run_sensitivity_curve(spec);
        case SweepKind::HeatmapTC:
        case SweepKind::HeatmapTJ: return run_heatmap(spec);
        case SweepKind::DecoherenceCompare: return run_decoherence_compare(spec);
        case SweepKind::SnrCurve: return run_snr_curve(spec);
        case SweepKind::Validate: return run_validate(spec);
    }
    throw ContractError("run_sweep: unknown kind");
}

void write_csv(std::ostream& out, const SweepResult& result, const CsvOptions& opts) {
    for (const auto& [key, value] : result.metadata) {
        if (key == "timestamp" && !opts.include_timestamp) continue;
        out << "# " << key << ": " << value << '\n';
    }
    for (std::size_t i = 0; i < result.table.columns.size(); ++i)
        out << (i ? "," : "") << result.table.columns[i];
    out << '\n';
    for (const auto& row : result.table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
        out << '\n';
    }
}

void write_csv_file(const std::string& path, const SweepResult& result, const CsvOptions& opts) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    write_csv(out, result, opts);
    out.flush();
    if (!out) throw IoError("failed writing output file: " + path);
}

}  // namespace qmag
