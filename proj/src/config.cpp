#include "qmag/config.hpp"

#include <fstream>
#include <set>

#include "qmag/errors.hpp"

namespace qmag {

using nlohmann::json;

namespace {

double number(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number()) throw ContractError(std::string("config: '") + key + "' must be a number");
    return v.get<double>();
}

void require_known_keys(const json& j, const std::set<std::string>& known, const char* where) {
    if (!j.is_object()) throw ContractError(std::string("config: ") + where + " must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!known.contains(key)) throw ContractError(std::string("config: unknown key '") + key + "' in " + where);
}

}  // namespace

void to_json(json& out, const SystemParams& p) {
    out = json{{"gamma", p.gamma},         {"b_z", p.b_z},     {"j", p.j},
               {"gamma_phi", p.gamma_phi}, {"omega_x", p.omega_x}, {"omega_y", p.omega_y},
               {"omega", p.omega},         {"alpha", p.alpha}};
}

void from_json(const json& in, SystemParams& p) {
    require_known_keys(in, {"gamma", "b_z", "j", "gamma_phi", "omega_x", "omega_y", "omega", "alpha", "c"},
                       "params");
    if (in.contains("gamma")) p.gamma = number(in, "gamma");
    if (in.contains("j")) p.j = number(in, "j");
    if (in.contains("omega_x")) p.omega_x = number(in, "omega_x");
    if (in.contains("omega_y")) p.omega_y = number(in, "omega_y");
    if (in.contains("omega")) p.omega = number(in, "omega");
    if (in.contains("alpha")) p.alpha = number(in, "alpha");
    if (in.contains("c")) {
        if (in.contains("gamma_phi"))
            throw ContractError("config: 'c' replaces 'gamma_phi'; give at most one of them");
        std::optional<double> b_z;
        if (in.contains("b_z")) b_z = number(in, "b_z");
        const auto derived = SystemParams::from_c(number(in, "c"), p.gamma, b_z);
        p.b_z = derived.b_z;
        p.gamma_phi = derived.gamma_phi;
    } else {
        if (in.contains("b_z")) p.b_z = number(in, "b_z");
        if (in.contains("gamma_phi")) p.gamma_phi = number(in, "gamma_phi");
    }
}

void to_json(json& out, const Range& r) { out = json{{"lo", r.lo}, {"hi", r.hi}, {"points", r.points}}; }

void from_json(const json& in, Range& r) {
    require_known_keys(in, {"lo", "hi", "points"}, "range");
    if (in.contains("lo")) r.lo = number(in, "lo");
    if (in.contains("hi")) r.hi = number(in, "hi");
    if (in.contains("points")) {
        if (!in.at("points").is_number_integer()) throw ContractError("config: range 'points' must be an integer");
        r.points = in.at("points").get<int>();
    }
}

void apply_config(const json& config, SweepSpec& spec) {
    require_known_keys(config,
                       {"preset", "params", "t_range", "secondary_range", "n_shots", "seed", "output_path", "alphas",
                        "compare_c", "draws", "paper_verbatim"},
                       "config");
    try {
        if (config.contains("params")) from_json(config.at("params"), spec.params);
        if (config.contains("t_range")) from_json(config.at("t_range"), spec.t_range);
        if (config.contains("secondary_range")) {
            Range r = spec.secondary_range.value_or(Range{});
            from_json(config.at("secondary_range"), r);
            spec.secondary_range = r;
        }
        if (config.contains("n_shots")) spec.n_shots = config.at("n_shots").get<long long>();
        if (config.contains("seed")) spec.seed = config.at("seed").get<std::uint64_t>();
        if (config.contains("output_path")) spec.output_path = config.at("output_path").get<std::string>();
        if (config.contains("alphas")) spec.alphas = config.at("alphas").get<std::vector<double>>();
        if (config.contains("compare_c")) {
            const auto c = config.at("compare_c").get<std::vector<double>>();
            if (c.size() != 2) throw ContractError("config: 'compare_c' needs exactly two values");
            spec.compare_c = {c[0], c[1]};
        }
        if (config.contains("draws")) spec.draws = config.at("draws").get<int>();
        if (config.contains("paper_verbatim")) spec.paper_verbatim = config.at("paper_verbatim").get<bool>();
    } catch (const json::exception& e) {
        throw ContractError(std::string("config: ") + e.what());
    }
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ContractError("config file " + path + " is not valid JSON: " + e.what());
    }
}

json spec_to_json(const SweepSpec& spec) {
    json out{{"kind", std::string(to_string(spec.kind))},
             {"preset", spec.preset},
             {"params", spec.params},
             {"t_range", spec.t_range},
             {"n_shots", spec.n_shots},
             {"seed", spec.seed}};
    if (spec.secondary_range) out["secondary_range"] = *spec.secondary_range;
    if (!spec.alphas.empty()) out["alphas"] = spec.alphas;
    if (spec.kind == SweepKind::DecoherenceCompare)
        out["compare_c"] = std::vector<double>{spec.compare_c.first, spec.compare_c.second};
    if (spec.kind == SweepKind::Validate) {
        out["draws"] = spec.draws;
        out["paper_verbatim"] = spec.paper_verbatim;
    }
    return out;
}

}  // namespace qmag
