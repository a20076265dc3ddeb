#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "qmag/linalg.hpp"
#include "qmag/model.hpp"

namespace qmag::test {

inline SystemParams reference_regime(double alpha = 0.0) {
    SystemParams p;
    p.gamma = 1.0;
    p.b_z = 0.1;
    p.j = 0.2;
    p.omega_x = 0.5;
    p.omega_y = 0.5;
    p.omega = 1.0;
    p.alpha = alpha;
    return p;
}

inline SystemParams random_params(std::mt19937_64& rng) {
    auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    SystemParams p;
    p.gamma = u(0.5, 2.0);
    p.b_z = u(-1.0, 1.0);
    p.j = u(-1.0, 1.0);
    p.gamma_phi = u(0.0, 0.5);
    p.omega_x = u(-1.0, 1.0);
    p.omega_y = u(-1.0, 1.0);
    p.omega = u(0.3, 3.0);
    p.alpha = u(0.0, 2.0 * std::numbers::pi);
    return p;
}

template <std::size_t N>
Matrix<N> random_matrix(std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    Matrix<N> m;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) m(r, c) = Complex(g(rng), g(rng));
    return m;
}

template <std::size_t N>
Matrix<N> random_hermitian(std::mt19937_64& rng, double scale = 1.0) {
    const auto a = random_matrix<N>(rng, scale);
    return 0.5 * (a + a.adjoint());
}

template <std::size_t N>
double distance(const Matrix<N>& a, const Matrix<N>& b) {
    return frobenius_norm(a - b);
}

}  // namespace qmag::test
