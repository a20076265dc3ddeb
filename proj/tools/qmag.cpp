// qmag: figure-data sweeps and the validation suite for the two-qubit
// magnetometer model.
//
//   qmag <subcommand> [--preset NAME] [--config PATH] [--out PATH] [--seed INT]
//        [--shots INT] [--t-lo F --t-hi F --t-points INT]
//        [--axis2-lo F --axis2-hi F --axis2-points INT] [--alpha F]...
//
// Exit codes: 0 success, 1 validation failure, 2 bad arguments/config,
// 3 I/O error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmag/config.hpp"
#include "qmag/errors.hpp"
#include "qmag/sweeps.hpp"

namespace {

enum ExitCode { kOk = 0, kValidationFailed = 1, kBadArguments = 2, kIoFailure = 3 };

struct Overrides {
    std::optional<std::string> preset;
    std::optional<std::string> config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<long long> shots;
    std::optional<double> t_lo, t_hi;
    std::optional<int> t_points;
    std::optional<double> axis2_lo, axis2_hi;
    std::optional<int> axis2_points;
    std::vector<double> alphas;
    std::optional<int> draws;
    std::optional<double> gamma, b_z, j, gamma_phi, omega_x, omega_y, omega, c;
    bool paper_verbatim = false;
    bool timestamp = false;
};

void add_common_options(CLI::App& cmd, Overrides& o) {
    cmd.add_option("--preset", o.preset, "Named parameter preset (fig1, fig2, fig3a, fig3b, fig5, fig6, validate)");
    cmd.add_option("--config", o.config, "JSON config file; flags override it");
    cmd.add_option("--out", o.out, "Output CSV path (default: standard output)");
    cmd.add_option("--seed", o.seed, "Random seed");
    cmd.add_option("--shots", o.shots, "Number of measurement repetitions N");
    cmd.add_option("--t-lo", o.t_lo, "Time grid start");
    cmd.add_option("--t-hi", o.t_hi, "Time grid end");
    cmd.add_option("--t-points", o.t_points, "Time grid points");
    cmd.add_option("--axis2-lo", o.axis2_lo, "Secondary axis start (C or J)");
    cmd.add_option("--axis2-hi", o.axis2_hi, "Secondary axis end");
    cmd.add_option("--axis2-points", o.axis2_points, "Secondary axis points");
    cmd.add_option("--alpha", o.alphas, "Drive phase alpha; repeat for several curves")->take_all();
    cmd.add_option("--gamma", o.gamma, "Gyromagnetic ratio");
    cmd.add_option("--b-z", o.b_z, "Static field B_z");
    cmd.add_option("--j", o.j, "Spin-spin coupling J");
    cmd.add_option("--gamma-phi", o.gamma_phi, "Dephasing rate");
    cmd.add_option("--omega-x", o.omega_x, "x-drive amplitude");
    cmd.add_option("--omega-y", o.omega_y, "y-drive amplitude");
    cmd.add_option("--omega", o.omega, "Drive angular frequency");
    cmd.add_option("--c", o.c, "Effective parameter C (sets B_z at fixed gamma_phi)");
    cmd.add_flag("--timestamp", o.timestamp, "Include a wall-clock timestamp in the CSV metadata");
}

qmag::SweepSpec build_spec(qmag::SweepKind kind, const Overrides& o) {
    std::optional<nlohmann::json> config;
    if (o.config) config = qmag::load_json_file(*o.config);

    std::string preset_name(qmag::default_preset(kind));
    if (o.preset) preset_name = *o.preset;
    else if (config && config->contains("preset")) {
        if (!config->at("preset").is_string()) throw qmag::ContractError("config: 'preset' must be a string");
        preset_name = config->at("preset").get<std::string>();
    }
    auto spec = qmag::preset(preset_name);
    if (!spec) throw qmag::ContractError("unknown preset '" + preset_name + "'");
    if (spec->kind != kind)
        throw qmag::ContractError("preset '" + preset_name + "' is for " + std::string(qmag::subcommand_name(spec->kind)));

    if (config) qmag::apply_config(*config, *spec);

    auto& p = spec->params;
    if (o.gamma) p.gamma = *o.gamma;
    if (o.b_z) p.b_z = *o.b_z;
    if (o.j) p.j = *o.j;
    if (o.gamma_phi) p.gamma_phi = *o.gamma_phi;
    if (o.omega_x) p.omega_x = *o.omega_x;
    if (o.omega_y) p.omega_y = *o.omega_y;
    if (o.omega) p.omega = *o.omega;
    if (o.c) p = p.with_c(*o.c);
    if (!o.alphas.empty()) {
        spec->alphas = o.alphas;
        p.alpha = o.alphas.front();
    }
    if (o.out) spec->output_path = *o.out;
    if (o.seed) spec->seed = *o.seed;
    if (o.shots) spec->n_shots = *o.shots;
    if (o.t_lo) spec->t_range.lo = *o.t_lo;
    if (o.t_hi) spec->t_range.hi = *o.t_hi;
    if (o.t_points) spec->t_range.points = *o.t_points;
    if (o.axis2_lo || o.axis2_hi || o.axis2_points) {
        qmag::Range r = spec->secondary_range.value_or(qmag::Range{});
        if (o.axis2_lo) r.lo = *o.axis2_lo;
        if (o.axis2_hi) r.hi = *o.axis2_hi;
        if (o.axis2_points) r.points = *o.axis2_points;
        spec->secondary_range = r;
    }
    if (o.draws) spec->draws = *o.draws;
    if (o.paper_verbatim) spec->paper_verbatim = true;
    spec->validate();
    return *spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-qubit magnetometer sweeps and validation"};
    app.require_subcommand(1);

    Overrides overrides;
    std::vector<std::pair<CLI::App*, qmag::SweepKind>> commands;
    const std::pair<const char*, const char*> descriptions[] = {
        {"qfi-curve", "QFI and sqrt(N) Delta B_z versus t for one or more drive phases"},
        {"sensitivity-curve", "sqrt(N) Delta B_z versus t with the located minimum"},
        {"heatmap-tc", "sqrt(N) Delta B_z over (t, C)"},
        {"heatmap-tj", "sqrt(N) Delta B_z over (t, J)"},
        {"decoherence-compare", "sensitivity curves for two values of C"},
        {"snr-curve", "minimum detectable field, QFI bound and their ratio versus t"},
        {"validate", "run the invariant suite over seeded random draws"},
    };
    for (const auto& [name, help] : descriptions) {
        CLI::App* cmd = app.add_subcommand(name, help);
        add_common_options(*cmd, overrides);
        if (std::string(name) == "validate") {
            cmd->add_option("--draws", overrides.draws, "Random draws per check");
            cmd->add_flag("--paper-verbatim", overrides.paper_verbatim,
                          "Check the uncorrected probability forms instead of the corrected ones");
        }
        commands.emplace_back(cmd, *qmag::sweep_kind_from_subcommand(name));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadArguments;
    }

    qmag::SweepKind kind{};
    for (const auto& [cmd, k] : commands)
        if (cmd->parsed()) kind = k;

    qmag::SweepSpec spec;
    try {
        spec = build_spec(kind, overrides);
    } catch (const qmag::IoError& e) {
        std::cerr << "qmag: " << e.what() << '\n';
        return kIoFailure;
    } catch (const std::exception& e) {
        std::cerr << "qmag: " << e.what() << '\n';
        return kBadArguments;
    }

    qmag::SweepResult result;
    try {
        result = qmag::run_sweep(spec);
    } catch (const qmag::ContractError& e) {
        std::cerr << "qmag: " << e.what() << '\n';
        return kBadArguments;
    } catch (const std::exception& e) {
        std::cerr << "qmag: " << e.what() << '\n';
        return kValidationFailed;
    }

    const qmag::CsvOptions csv{.include_timestamp = overrides.timestamp};
    try {
        if (spec.output_path.empty()) qmag::write_csv(std::cout, result, csv);
        else qmag::write_csv_file(spec.output_path, result, csv);
    } catch (const qmag::IoError& e) {
        std::cerr << "qmag: " << e.what() << '\n';
        return kIoFailure;
    }

    if (!result.failures.empty()) {
        std::cerr << "qmag: validation failed:";
        for (const auto& f : result.failures) std::cerr << ' ' << f;
        std::cerr << '\n';
        return kValidationFailed;
    }
    return kOk;
}
