#pragma once

// Figure-data sweeps and the validation suite behind the qmag CLI. Every
// sweep is a pure function of its SweepSpec; rows come back in grid order.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qmag/model.hpp"

namespace qmag {

inline constexpr std::string_view kArtifactVersion = "1.0.0";

enum class SweepKind { QfiCurve, SensitivityCurve, HeatmapTC, HeatmapTJ, DecoherenceCompare, SnrCurve, Validate };

std::string_view to_string(SweepKind k);
std::optional<SweepKind> sweep_kind_from_subcommand(std::string_view name);
std::string_view subcommand_name(SweepKind k);

struct Range {
    double lo = 0.0;
    double hi = 1.0;
    int points = 2;

    /// Uniform samples; the last one is exactly hi.
    std::vector<double> values() const;
    /// Throws ContractError unless points >= 2 and lo < hi are finite.
    void validate(std::string_view what) const;
};

struct SweepSpec {
    SweepKind kind = SweepKind::QfiCurve;
    std::string preset;
    SystemParams params;
    Range t_range{0.0, 10.0, 1001};
    std::optional<Range> secondary_range;  // C or J axis for heatmaps
    long long n_shots = 1;
    std::uint64_t seed = 1;
    std::string output_path;  // empty: standard output

    std::vector<double> alphas;                   // qfi / sensitivity curves
    std::pair<double, double> compare_c{0.0, 0.2};  // decoherence comparison
    int draws = 100;                              // validate
    bool paper_verbatim = false;                  // validate with the uncorrected closed forms
    std::vector<std::string> notes;               // preset provenance, copied into metadata

    void validate() const;
};

/// Named presets: fig1, fig2, fig3a, fig3b, fig5, fig6, validate.
std::optional<SweepSpec> preset(std::string_view name);
std::vector<std::string> preset_names();
std::string_view default_preset(SweepKind k);

using Cell = std::variant<double, long long, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    std::size_t column_index(std::string_view name) const;
    /// Numeric view of a column (bools as 0/1). Throws for string columns.
    std::vector<double> numeric_column(std::string_view name) const;
};

struct SweepResult {
    SweepSpec spec_echo;
    Table table;
    std::vector<std::pair<std::string, std::string>> metadata;
    double max_margin = 0.0;
    std::vector<std::string> failures;  // validate only

    const std::string* meta(std::string_view key) const;
    double meta_number(std::string_view key) const;
};

SweepResult run_qfi_curve(const SweepSpec& spec);
SweepResult run_sensitivity_curve(const SweepSpec& spec);
SweepResult run_heatmap(const SweepSpec& spec);
SweepResult run_decoherence_compare(const SweepSpec& spec);
SweepResult run_snr_curve(const SweepSpec& spec);
SweepResult run_validate(const SweepSpec& spec);

/// Dispatch on spec.kind.
SweepResult run_sweep(const SweepSpec& spec);

/// 17 significant digits; infinities as "inf"/"-inf".
std::string format_number(double v);

struct CsvOptions {
    /// Off by default so identical specs give byte-identical files.
    bool include_timestamp = false;
};

void write_csv(std::ostream& out, const SweepResult& result, const CsvOptions& opts = {});
/// Throws IoError naming the path on failure.
void write_csv_file(const std::string& path, const SweepResult& result, const CsvOptions& opts = {});

}  // namespace qmag
