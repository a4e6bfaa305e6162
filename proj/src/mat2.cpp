#include "pdirac/mat2.hpp"

#include <algorithm>
#include <cmath>

namespace pdirac {

C2 C2::pauli(int j) {
    switch (j) {
        case 1: return {0.0, 1.0, 1.0, 0.0};
        case 2: return {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0};
        case 3: return {1.0, 0.0, 0.0, -1.0};
        default: return identity();
    }
}

bool C2::finite() const {
    auto ok = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
    return ok(a11) && ok(a12) && ok(a21) && ok(a22);
}

C2 operator*(const C2& A, const C2& B) {
    return {A.a11 * B.a11 + A.a12 * B.a21, A.a11 * B.a12 + A.a12 * B.a22,
            A.a21 * B.a11 + A.a22 * B.a21, A.a21 * B.a12 + A.a22 * B.a22};
}

C2 operator*(cplx s, const C2& A) { return {s * A.a11, s * A.a12, s * A.a21, s * A.a22}; }

C2 operator+(const C2& A, const C2& B) {
    return {A.a11 + B.a11, A.a12 + B.a12, A.a21 + B.a21, A.a22 + B.a22};
}

C2 operator-(const C2& A, const C2& B) {
    return {A.a11 - B.a11, A.a12 - B.a12, A.a21 - B.a21, A.a22 - B.a22};
}

double frobenius_norm(const C2& A) {
    return std::sqrt(std::norm(A.a11) + std::norm(A.a12) + std::norm(A.a21) + std::norm(A.a22));
}

double operator_norm(const C2& A) {
    // Singular values: s^2 = (f2 +- sqrt(f2^2 - 4 d^2)) / 2 with f2 = ||A||_F^2,
    // d = |det A|.  Always <= Frobenius norm.
    const double f2 = std::norm(A.a11) + std::norm(A.a12) + std::norm(A.a21) + std::norm(A.a22);
    const double d = std::abs(A.det());
    const double disc = std::max(f2 * f2 - 4.0 * d * d, 0.0);
    return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
}

namespace {

// Eigenvector of A for eigenvalue mu, built from the larger of the two
// row-elimination candidates to avoid cancellation.
Vec2 eigenvector_for(const C2& A, cplx mu) {
    const Vec2 r1{-A.a12, A.a11 - mu};
    const Vec2 r2{A.a22 - mu, -A.a21};
    const double n1 = r1.norm();
    const double n2 = r2.norm();
    if (n1 == 0.0 && n2 == 0.0) return {1.0, 0.0};  // A = mu I
    return (n1 >= n2) ? r1 : r2;
}

}  // namespace

EigenPair2 eig2(const C2& A) {
    const cplx tr = A.trace();
    const cplx dt = A.det();
    cplx disc = std::sqrt(tr * tr - 4.0 * dt);
    // Pick the sign that avoids cancellation in tr + disc.
    if (std::real(std::conj(tr) * disc) < 0.0) disc = -disc;
    const cplx mu1 = 0.5 * (tr + disc);
    const cplx mu2 = (std::abs(mu1) > 0.0) ? dt / mu1 : 0.5 * (tr - disc);

    EigenPair2 out;
    out.mu1 = mu1;
    out.mu2 = mu2;
    out.distinct = std::abs(mu1 - mu2) > 1e-10 * (std::abs(mu1) + std::abs(mu2) + 1e-300);
    out.w1 = eigenvector_for(A, mu1);
    if (out.distinct) {
        out.w2 = eigenvector_for(A, mu2);
    } else {
        out.w2 = out.w1;
    }
    return out;
}

std::optional<double> gamma_of_matrix(const C2& A) {
    const EigenPair2 e = eig2(A);
    if (!e.distinct) return std::nullopt;
    const double g = std::abs(column_det(e.w1, e.w2)) / (e.w1.norm() * e.w2.norm());
    return std::min(g, 1.0);
}

}  // namespace pdirac
