#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "qmag/config.hpp"
#include "qmag/errors.hpp"

using namespace qmag;
using nlohmann::json;

TEST_CASE("params round trip") {
    SystemParams p;
    p.j = 0.25;
    p.omega_x = -0.3;
    p.alpha = 1.1;
    const json j = p;
    CHECK(j.at("j") == 0.25);
    CHECK(j.get<SystemParams>() == p);
}

TEST_CASE("partial params merge over defaults") {
    SystemParams p;
    from_json(json::parse(R"({"j": 0.4})"), p);
    CHECK(p.j == 0.4);
    CHECK(p.b_z == SystemParams{}.b_z);
}

TEST_CASE("effective parameter keys") {
    SystemParams p;
    from_json(json::parse(R"({"gamma": 2.0, "c": 0.3})"), p);
    CHECK(p.c() == doctest::Approx(0.3));
    CHECK(p.gamma_phi == 0.0);

    SystemParams q;
    from_json(json::parse(R"({"c": 0.1, "b_z": 0.5})"), q);
    CHECK(q.gamma_phi == doctest::Approx(0.2));
    CHECK(q.b_z == 0.5);

    SystemParams r;
    CHECK_THROWS_AS(from_json(json::parse(R"({"c": 0.1, "gamma_phi": 0.2})"), r), ContractError);
}

TEST_CASE("malformed params") {
    SystemParams p;
    CHECK_THROWS_AS(from_json(json::parse(R"({"bz": 0.1})"), p), ContractError);
    CHECK_THROWS_AS(from_json(json::parse(R"({"j": "big"})"), p), ContractError);
    CHECK_THROWS_AS(from_json(json::parse(R"([1, 2])"), p), ContractError);
}

TEST_CASE("apply config") {
    auto spec = *preset("fig3a");
    apply_config(json::parse(R"({
        "params": {"j": 0.5},
        "t_range": {"hi": 5.0, "points": 11},
        "secondary_range": {"points": 3},
        "n_shots": 100,
        "seed": 9,
        "output_path": "x.csv"
    })"),
                 spec);
    CHECK(spec.params.j == 0.5);
    CHECK(spec.params.alpha == doctest::Approx(3.141592653589793 / 4.0));
    CHECK(spec.t_range.lo == 0.0);
    CHECK(spec.t_range.hi == 5.0);
    CHECK(spec.t_range.points == 11);
    CHECK(spec.secondary_range->hi == 1.0);
    CHECK(spec.secondary_range->points == 3);
    CHECK(spec.n_shots == 100);
    CHECK(spec.seed == 9);
    CHECK(spec.output_path == "x.csv");

    auto v = *preset("validate");
    apply_config(json::parse(R"({"draws": 5, "paper_verbatim": true})"), v);
    CHECK(v.draws == 5);
    CHECK(v.paper_verbatim);

    auto d = *preset("fig5");
    apply_config(json::parse(R"({"compare_c": [0.05, 0.3], "alphas": [0.5]})"), d);
    CHECK(d.compare_c == std::pair{0.05, 0.3});
    CHECK(d.alphas == std::vector<double>{0.5});
}

TEST_CASE("config errors") {
    auto spec = *preset("fig1");
    CHECK_THROWS_AS(apply_config(json::parse(R"({"unknown": 1})"), spec), ContractError);
    CHECK_THROWS_AS(apply_config(json::parse(R"({"t_range": {"points": 2.5}})"), spec), ContractError);
    CHECK_THROWS_AS(apply_config(json::parse(R"({"compare_c": [0.1]})"), spec), ContractError);
    CHECK_THROWS_AS(apply_config(json::parse(R"({"seed": "one"})"), spec), ContractError);
    CHECK_THROWS_AS(apply_config(json::parse("3"), spec), ContractError);
}

TEST_CASE("config files") {
    const auto dir = std::filesystem::temp_directory_path() / "qmag_config_test";
    std::filesystem::create_directories(dir);
    const auto good = dir / "good.json";
    std::ofstream(good) << R"({"seed": 3})";
    CHECK(load_json_file(good.string()).at("seed") == 3);

    const auto bad = dir / "bad.json";
    std::ofstream(bad) << "{seed: 3";
    CHECK_THROWS_AS(load_json_file(bad.string()), ContractError);
    CHECK_THROWS_AS(load_json_file((dir / "absent.json").string()), IoError);
}

TEST_CASE("spec echo") {
    const auto j = spec_to_json(*preset("fig5"));
    CHECK(j.at("kind") == "DECOHERENCE_COMPARE");
    CHECK(j.at("compare_c").size() == 2);
    CHECK(j.at("params").at("j") == 0.3);
    CHECK_FALSE(j.contains("draws"));
}
