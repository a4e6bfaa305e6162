#pragma once

#include <cmath>
#include <complex>
#include <optional>

namespace pdirac {

using cplx = std::complex<double>;

// Complex 2-vector with the Euclidean norm |w| = sqrt(|w1|^2 + |w2|^2).
struct Vec2 {
    cplx u{0.0, 0.0};
    cplx v{0.0, 0.0};

    double norm() const { return std::sqrt(std::norm(u) + std::norm(v)); }
};

inline Vec2 operator*(cplx s, const Vec2& w) { return {s * w.u, s * w.v}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.u - b.u, a.v - b.v}; }
inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.u + b.u, a.v + b.v}; }

// det of the 2x2 matrix with columns w1, w2.
inline cplx column_det(const Vec2& w1, const Vec2& w2) { return w1.u * w2.v - w1.v * w2.u; }

// Complex 2x2 matrix, value type.
struct C2 {
    cplx a11{0.0, 0.0}, a12{0.0, 0.0};
    cplx a21{0.0, 0.0}, a22{0.0, 0.0};

    static C2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    // Pauli matrices sigma_0 = I, sigma_1, sigma_2, sigma_3.
    static C2 pauli(int j);

    cplx trace() const { return a11 + a22; }
    cplx det() const { return a11 * a22 - a12 * a21; }
    bool finite() const;

    Vec2 apply(const Vec2& w) const { return {a11 * w.u + a12 * w.v, a21 * w.u + a22 * w.v}; }
};

C2 operator*(const C2& A, const C2& B);
C2 operator*(cplx s, const C2& A);
C2 operator+(const C2& A, const C2& B);
C2 operator-(const C2& A, const C2& B);

double frobenius_norm(const C2& A);
// Largest singular value, from the closed form on ||A||_F^2 and |det A|.
double operator_norm(const C2& A);

// Eigen decomposition of a 2x2 matrix. mu1 is the larger-modulus eigenvalue.
// When the matrix is (numerically) defective, distinct = false and both w1
// and w2 hold the single eigendirection.
struct EigenPair2 {
    cplx mu1, mu2;
    Vec2 w1, w2;
    bool distinct;
};

EigenPair2 eig2(const C2& A);

// Eigenvector-angle functional: |det(w1, w2)| / (|w1| |w2|) for matrices with
// two distinct eigenvalues; empty when the eigenvalue is double.
std::optional<double> gamma_of_matrix(const C2& A);

}  // namespace pdirac
