#include <doctest.h>

#include <fstream>

#include <json.hpp>

#include "helpers.hpp"
#include "qmag/errors.hpp"
#include "qmag/evolution.hpp"

using namespace qmag;
using qmag::test::distance;
using qmag::test::reference_regime;

namespace {

const Complex kI(0.0, 1.0);

SystemParams diagonal_only(double c) {
    SystemParams p = SystemParams::from_c(c);
    p.omega_x = p.omega_y = 0.0;
    return p;
}

Matrix4 golden_matrix(const std::string& key) {
    std::ifstream in(std::string(QMAG_TEST_DATA_DIR) + "/golden.json");
    REQUIRE(in);
    const auto j = nlohmann::json::parse(in).at(key);
    Matrix4 m;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            m(r, c) = Complex(j.at("re").at(r).at(c).get<double>(), j.at("im").at(r).at(c).get<double>());
    return m;
}

}  // namespace

TEST_CASE("first-order Dyson propagator") {
    CHECK(distance(dyson1_propagator(reference_regime(), 0.0), Matrix4::identity()) == 0.0);
    // H = -(C/2) Sz = diag(-0.1, 0, 0, 0.1), so I - i H t = diag(1 + 0.1i, 1, 1, 1 - 0.1i).
    const auto u = dyson1_propagator(diagonal_only(0.1), 1.0);
    CHECK(distance(u, Matrix4::diagonal({Complex(1.0, 0.1), 1.0, 1.0, Complex(1.0, -0.1)})) < 1e-15);
    const auto p = reference_regime();
    CHECK(distance(dyson1_propagator(p, 6.352), Matrix4::identity() - kI * integrated_hamiltonian(p, 6.352)) < 1e-15);
}

TEST_CASE("exact propagator") {
    CHECK(distance(exact_propagator(reference_regime(), 0.0), Matrix4::identity()) < 1e-15);

    SUBCASE("time-independent hamiltonian") {
        SystemParams p = diagonal_only(0.3);
        p.j = 0.7;
        const double t = 3.0;
        const auto expect = matrix_exponential(-kI * t * hamiltonian_at(p, 0.0));
        CHECK(distance(exact_propagator(p, t), expect) < 1e-10);
        CHECK(distance(midpoint_product(p, 0.0, t, 7), expect) < 1e-12);
    }
    SUBCASE("diagonal phases") {
        const auto u = exact_propagator(diagonal_only(0.1), 1.0);
        CHECK(distance(u, Matrix4::diagonal({std::exp(0.1 * kI), 1.0, 1.0, std::exp(-0.1 * kI)})) < 1e-12);
    }
    SUBCASE("golden propagators from an independent ODE integration") {
        const auto p = reference_regime();
        for (const auto& [key, t] : {std::pair{"exact_propagator_t2", 2.0}, std::pair{"exact_propagator_t6352", 6.352}}) {
            const auto u = exact_propagator(p, t);
            CHECK(operator_norm(u - golden_matrix(key)) < 1e-9);
            CHECK(frobenius_norm(u.adjoint() * u - Matrix4::identity()) < 1e-10);
        }
    }
    SUBCASE("composition over adjacent windows") {
        const auto p = reference_regime(0.4);
        const auto whole = exact_propagator_window(p, 0.0, 3.0);
        const auto split = exact_propagator_window(p, 1.2, 3.0) * exact_propagator_window(p, 0.0, 1.2);
        CHECK(operator_norm(whole - split) < 1e-9);
    }
    SUBCASE("non-convergence is reported") {
        ExactPropagatorOptions opts;
        opts.tolerance = 0.0;
        opts.max_doublings = 1;
        CHECK_THROWS_AS(exact_propagator(reference_regime(), 1.0, opts), ConvergenceError);
    }
}

TEST_CASE("propagator report") {
    const auto zero = propagator_report(reference_regime(), 0.0);
    CHECK(zero.error_observed < 1e-15);
    CHECK(zero.error_bound == 0.0);
    CHECK(zero.margin == 0.0);

    const auto diag = propagator_report(diagonal_only(0.1), 1.0);
    CHECK(diag.error_observed == doctest::Approx(std::abs(std::exp(0.1 * kI) - Complex(1.0, 0.1))).epsilon(1e-8));
    CHECK(diag.error_observed == doctest::Approx(0.005).epsilon(0.01));
    CHECK(diag.error_bound == doctest::Approx(0.005).epsilon(1e-10));
    CHECK(diag.error_observed <= diag.error_bound);

    const auto driven = propagator_report(reference_regime(), 0.5);
    REQUIRE(driven.margin < 1.0);
    CHECK(driven.error_observed <= driven.error_bound);
}

TEST_CASE("truncation bound holds on random draws inside the convergence region") {
    std::mt19937_64 rng(9);
    int checked = 0;
    for (int k = 0; k < 25; ++k) {
        const auto p = test::random_params(rng);
        const double t = std::uniform_real_distribution<double>(0.0, 0.95)(rng) / std::max(h_max(p, 10.0, 1024), 1e-3);
        const auto r = propagator_report(p, std::min(t, 10.0));
        if (r.margin >= 1.0) continue;
        ++checked;
        CHECK(r.error_observed <= r.error_bound + 1e-8);
        CHECK(frobenius_norm(r.u_exact.adjoint() * r.u_exact - Matrix4::identity()) < 1e-10);
    }
    CHECK(checked > 15);
}

TEST_CASE("short-time error scales as t^2") {
    const auto p = reference_regime(0.3);
    std::vector<double> ratios;
    for (double t : {1e-2, 1e-3, 1e-4}) ratios.push_back(propagator_report(p, t).error_observed / (t * t));
    CHECK(ratios[0] > 0.0);
    CHECK(std::abs(ratios[1] / ratios[0] - 1.0) < 0.05);
    CHECK(std::abs(ratios[2] / ratios[1] - 1.0) < 0.05);
}
