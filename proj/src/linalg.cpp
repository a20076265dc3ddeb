#include "qmag/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmag/errors.hpp"

namespace qmag {

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amp_) s += std::norm(a);
    return s;
}

double StateVector::norm() const { return std::sqrt(norm_squared()); }

bool StateVector::is_normalized(double tol) const {
    return std::abs(norm_squared() - 1.0) <= tol;
}

StateVector StateVector::normalized() const {
    const double n = norm();
    if (!(n > 0.0)) throw ContractError("cannot normalize the zero state");
    StateVector out = *this;
    for (auto& a : out.amp_) a /= n;
    return out;
}

StateVector operator*(const Matrix4& m, const StateVector& v) {
    StateVector out;
    for (std::size_t r = 0; r < 4; ++r) {
        Complex s = 0.0;
        for (std::size_t c = 0; c < 4; ++c) s += m(r, c) * v.amp_[c];
        out.amp_[r] = s;
    }
    return out;
}

StateVector operator-(const StateVector& a, const StateVector& b) {
    StateVector out;
    for (std::size_t i = 0; i < 4; ++i) out.amp_[i] = a.amp_[i] - b.amp_[i];
    return out;
}

StateVector operator*(Complex s, const StateVector& v) {
    StateVector out;
    for (std::size_t i = 0; i < 4; ++i) out.amp_[i] = s * v.amp_[i];
    return out;
}

Complex inner(const StateVector& a, const StateVector& b) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < 4; ++i) s += std::conj(a[i]) * b[i];
    return s;
}

namespace pauli {
Matrix2 identity() { return Matrix2::identity(); }
Matrix2 x() { return Matrix2{0.0, 1.0, 1.0, 0.0}; }
Matrix2 y() { return Matrix2{0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0}; }
Matrix2 z() { return Matrix2{1.0, 0.0, 0.0, -1.0}; }
Matrix2 hadamard() {
    const double h = 1.0 / std::sqrt(2.0);
    return Matrix2{h, h, h, -h};
}
}  // namespace pauli

Matrix4 tensor_product(const Matrix2& a, const Matrix2& b) {
    Matrix4 out;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return out;
}

Matrix4 collective(const Matrix2& s) {
    return tensor_product(s, pauli::identity()) + tensor_product(pauli::identity(), s);
}

bool all_finite(const Matrix4& m) {
    return std::ranges::all_of(m.entries(), [](const Complex& v) {
        return std::isfinite(v.real()) && std::isfinite(v.imag());
    });
}

namespace {

template <std::size_t N>
double off_diagonal_mass(const Matrix<N>& a) {
    double s = 0.0;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c)
            if (r != c) s += std::norm(a(r, c));
    return std::sqrt(s);
}

// Each rotation first removes the phase of a(p,q) with a diagonal unitary on
// index q, leaving a real symmetric 2x2 pivot block, then applies the classic
// real Jacobi rotation that zeroes it.
template <std::size_t N>
std::vector<double> jacobi_eigenvalues(const Matrix<N>& m) {
    const double scale = frobenius_norm(m);
    if (hermiticity_defect(m) > 1e-10 * std::max(1.0, scale))
        throw ContractError("hermitian_eigenvalues: input is not Hermitian");

    Matrix<N> a = m;
    // Symmetrize so round-off in the input cannot leak into the diagonal.
    for (std::size_t r = 0; r < N; ++r) {
        a(r, r) = a(r, r).real();
        for (std::size_t c = r + 1; c < N; ++c) {
            const Complex avg = 0.5 * (a(r, c) + std::conj(a(c, r)));
            a(r, c) = avg;
            a(c, r) = std::conj(avg);
        }
    }

    const double target = 1e-14 * scale;
    constexpr int kMaxSweeps = 64;
    for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_mass(a) > target; ++sweep) {
        for (std::size_t p = 0; p + 1 < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag == 0.0) continue;
                const Complex phase = a(p, q) / mag;  // e^{i phi}

                // D = diag(1,..,e^{-i phi} at q,..): a <- D^dagger a D.
                for (std::size_t k = 0; k < N; ++k) {
                    if (k == q) continue;
                    a(k, q) *= std::conj(phase);
                    a(q, k) *= phase;
                }

                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < N; ++k) {
                    if (k == p || k == q) continue;
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                    a(p, k) = std::conj(a(k, p));
                    a(q, k) = std::conj(a(k, q));
                }
                a(p, p) = app - t * mag;
                a(q, q) = aqq + t * mag;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }
    if (off_diagonal_mass(a) > target)
        throw ConvergenceError("hermitian_eigenvalues: Jacobi sweeps did not converge");

    std::vector<double> ev(N);
    for (std::size_t i = 0; i < N; ++i) ev[i] = a(i, i).real();
    std::ranges::sort(ev);
    return ev;
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const Matrix4& m) { return jacobi_eigenvalues(m); }
std::vector<double> hermitian_eigenvalues(const Matrix2& m) { return jacobi_eigenvalues(m); }

double spectral_norm(const Matrix4& m) {
    const auto ev = hermitian_eigenvalues(m);
    return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

double operator_norm(const Matrix4& m) {
    const auto ev = hermitian_eigenvalues(m.adjoint() * m);
    return std::sqrt(std::max(0.0, ev.back()));
}

Matrix4 matrix_exponential(const Matrix4& m) {
    double one_norm = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
        double col = 0.0;
        for (std::size_t r = 0; r < 4; ++r) col += std::abs(m(r, c));
        one_norm = std::max(one_norm, col);
    }
    int squarings = 0;
    if (one_norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(one_norm / 0.5)));
    const Matrix4 a = m * std::ldexp(1.0, -squarings);

    // Taylor series; the scaled argument has 1-norm <= 1/2, so terms shrink at
    // least geometrically and the loop stops once they fall below round-off.
    Matrix4 result = Matrix4::identity();
    Matrix4 term = Matrix4::identity();
    for (int k = 1; k <= 40; ++k) {
        term = term * a * (1.0 / k);
        result += term;
        if (frobenius_norm(term) <= 1e-18 * frobenius_norm(result)) break;
    }
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

}  // namespace qmag
