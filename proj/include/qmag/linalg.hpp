#pragma once

// Dense complex linear algebra at the two fixed sizes this project needs:
// single-qubit (2x2) building blocks and two-qubit (4x4) operators.
//
// Basis convention for 4x4 operators: |00>, |01>, |10>, |11>, with qubit 1
// the left tensor factor, so (a (x) b)[2i+k][2j+l] = a[i][j] * b[k][l].

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qmag {

using Complex = std::complex<double>;

template <std::size_t N>
class Matrix {
public:
    static constexpr std::size_t dim = N;

    constexpr Matrix() = default;

    /// Row-major initialization; missing trailing entries are zero.
    Matrix(std::initializer_list<Complex> row_major) {
        std::size_t k = 0;
        for (const auto& v : row_major) {
            if (k == N * N) break;
            data_[k++] = v;
        }
    }

    static Matrix identity() {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix diagonal(const std::array<Complex, N>& d) {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
        return m;
    }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * N + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * N + c]; }

    std::span<const Complex, N * N> entries() const { return data_; }

    Matrix adjoint() const {
        Matrix out;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c) out(c, r) = std::conj((*this)(r, c));
        return out;
    }

    Complex trace() const {
        Complex s = 0.0;
        for (std::size_t i = 0; i < N; ++i) s += (*this)(i, i);
        return s;
    }

    Matrix& operator+=(const Matrix& o) {
        for (std::size_t k = 0; k < N * N; ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        for (std::size_t k = 0; k < N * N; ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(Complex s) {
        for (auto& v : data_)
            v = Complex(v.real() * s.real() - v.imag() * s.imag(), v.real() * s.imag() + v.imag() * s.real());
        return *this;
    }
    Matrix& operator*=(double s) {
        for (auto& v : data_) v = Complex(v.real() * s, v.imag() * s);
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator-(Matrix a) { return a *= -1.0; }
    friend Matrix operator*(Matrix a, Complex s) { return a *= s; }
    friend Matrix operator*(Complex s, Matrix a) { return a *= s; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }

    // Spelled out in real arithmetic: std::complex operator* carries NaN
    // recovery branches that dominate the cost of a 4x4 product.
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        Matrix out;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c) {
                double re = 0.0;
                double im = 0.0;
                for (std::size_t k = 0; k < N; ++k) {
                    const Complex& x = a(r, k);
                    const Complex& y = b(k, c);
                    re += x.real() * y.real() - x.imag() * y.imag();
                    im += x.real() * y.imag() + x.imag() * y.real();
                }
                out(r, c) = Complex(re, im);
            }
        return out;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::array<Complex, N * N> data_{};
};

using Matrix2 = Matrix<2>;
using Matrix4 = Matrix<4>;

/// Length-4 amplitude vector over |00>, |01>, |10>, |11>. Normalization is
/// never implied by the type; call normalized() where a unit vector is needed.
class StateVector {
public:
    constexpr StateVector() = default;
    explicit StateVector(const std::array<Complex, 4>& amplitudes) : amp_(amplitudes) {}

    Complex& operator[](std::size_t i) { return amp_[i]; }
    const Complex& operator[](std::size_t i) const { return amp_[i]; }
    const std::array<Complex, 4>& amplitudes() const { return amp_; }

    double norm_squared() const;
    double norm() const;
    bool is_normalized(double tol = 1e-12) const;
    /// Throws ContractError for the zero vector.
    StateVector normalized() const;

    friend StateVector operator*(const Matrix4& m, const StateVector& v);
    friend StateVector operator-(const StateVector& a, const StateVector& b);
    friend StateVector operator*(Complex s, const StateVector& v);

private:
    std::array<Complex, 4> amp_{};
};

/// <a|b>, conjugate-linear in the first argument.
Complex inner(const StateVector& a, const StateVector& b);

namespace pauli {
Matrix2 identity();
Matrix2 x();
Matrix2 y();
Matrix2 z();
Matrix2 hadamard();
}  // namespace pauli

Matrix4 tensor_product(const Matrix2& a, const Matrix2& b);

/// sigma_1a + sigma_2a for a single-qubit operator s.
Matrix4 collective(const Matrix2& s);

template <std::size_t N>
double frobenius_norm(const Matrix<N>& m) {
    double s = 0.0;
    for (const auto& v : m.entries()) s += std::norm(v);
    return std::sqrt(s);
}

template <std::size_t N>
double hermiticity_defect(const Matrix<N>& m) {
    return frobenius_norm(m - m.adjoint());
}

bool all_finite(const Matrix4& m);

/// Real eigenvalues of a Hermitian matrix in ascending order, computed by
/// cyclic complex Jacobi rotations. Throws ContractError if
/// ||m - m^dagger||_F > 1e-10.
std::vector<double> hermitian_eigenvalues(const Matrix4& m);
std::vector<double> hermitian_eigenvalues(const Matrix2& m);

/// Largest |eigenvalue| of a Hermitian matrix.
double spectral_norm(const Matrix4& m);

/// Largest singular value of an arbitrary matrix, sqrt(lambda_max(m^dagger m)).
double operator_norm(const Matrix4& m);

/// exp(m) by scaling and squaring around a truncated Taylor series.
Matrix4 matrix_exponential(const Matrix4& m);

}  // namespace qmag
