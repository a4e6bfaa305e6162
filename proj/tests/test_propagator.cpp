#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "pdirac/errors.hpp"
#include "pdirac/propagator.hpp"

using namespace pdirac;

namespace {

double mat_dist(const C2& a, const C2& b) { return frobenius_norm(a - b); }

PeriodicPotential random_potential(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double a = 0.5 + 1.5 * u(rng);
    const int kind = static_cast<int>(u(rng) * 3.0);
    if (kind == 0) {
        std::vector<double> bp{0.0, 0.2 * a + 0.3 * a * u(rng), 0.6 * a + 0.2 * a * u(rng)};
        std::vector<double> vals{4.0 * u(rng) - 2.0, 4.0 * u(rng) - 2.0, 4.0 * u(rng) - 2.0};
        return PeriodicPotential::piecewise_constant(a, bp, vals);
    }
    if (kind == 1)
        return PeriodicPotential::fourier(a, 2.0 * u(rng) - 1.0, {u(rng), 0.5 * u(rng)},
                                          {u(rng) - 0.5});
    std::vector<double> s(16);
    for (double& v : s) v = 3.0 * u(rng) - 1.5;
    return PeriodicPotential::sampled(a, s);
}

}  // namespace

TEST_CASE("constant_step closed forms") {
    CHECK(mat_dist(constant_step(0.0, 0.0, 1.0), C2::identity()) < 1e-15);
    // m = 1, c = 0, lambda = 1: nilpotent generator, I + h A.
    CHECK(mat_dist(constant_step(2.0, 0.0, 1.0), C2{1.0, 2.0, 0.0, 1.0}) < 1e-15);
    // m = 1, c = 0, lambda = 0: A = sigma_1.
    const C2 expect{std::cosh(1.0), std::sinh(1.0), std::sinh(1.0), std::cosh(1.0)};
    CHECK(mat_dist(constant_step(1.0, 1.0, 1.0), expect) < 1e-14);
}

TEST_CASE("fundamental system free-Dirac oracle") {
    const auto q0 = PeriodicPotential::zero(1.0);
    const SpectralPoint sp{q0, 1.0, 0.0};
    CHECK(mat_dist(fundamental_system(sp, 0.0), C2::identity()) == 0.0);
    const C2 phi = fundamental_system(sp, 1.0);
    CHECK(phi.a11.real() == doctest::Approx(std::cosh(1.0)).epsilon(1e-14));
    CHECK(phi.a12.real() == doctest::Approx(std::sinh(1.0)).epsilon(1e-14));

    // m = 0: rotation matrix [[cos lx, sin lx], [-sin lx, cos lx]].
    const SpectralPoint sp0{q0, 0.0, 1.7};
    const C2 rot = fundamental_system(sp0, 0.6);
    CHECK(rot.a11.real() == doctest::Approx(std::cos(1.7 * 0.6)).epsilon(1e-14));
    CHECK(rot.a12.real() == doctest::Approx(std::sin(1.7 * 0.6)).epsilon(1e-14));
    CHECK(rot.a21.real() == doctest::Approx(-std::sin(1.7 * 0.6)).epsilon(1e-14));
}

TEST_CASE("monodromy at lambda = sqrt(1 + pi^2) is -I") {
    const auto q0 = PeriodicPotential::zero(1.0);
    const double lam0 = std::sqrt(1.0 + std::numbers::pi * std::numbers::pi);
    const SpectralPoint sp{q0, 1.0, lam0};
    CHECK(mat_dist(monodromy(sp), cplx(-1.0, 0.0) * C2::identity()) < 1e-9);
}

TEST_CASE("gauge shift: M_{q+c}(lambda) = M_q(lambda - c)") {
    const double c = 0.85;
    const auto pwc = PeriodicPotential::piecewise_constant(1.0, {0.0, 0.4}, {1.0, -0.5});
    const auto pwc_shift =
        PeriodicPotential::piecewise_constant(1.0, {0.0, 0.4}, {1.0 + c, -0.5 + c});
    const cplx lam(0.3, 0.7);
    const C2 m1 = monodromy(SpectralPoint{pwc_shift, 1.0, lam});
    const C2 m2 = monodromy(SpectralPoint{pwc, 1.0, lam - c});
    CHECK(mat_dist(m1, m2) < 1e-9);

    const auto four = PeriodicPotential::fourier(1.0, 0.2, {0.6}, {0.3});
    const auto four_shift = PeriodicPotential::fourier(1.0, 0.2 + c, {0.6}, {0.3});
    const C2 m3 = monodromy(SpectralPoint{four_shift, 1.0, lam});
    const C2 m4 = monodromy(SpectralPoint{four, 1.0, lam - c});
    CHECK(mat_dist(m3, m4) < 1e-9);
}

TEST_CASE("exact and adaptive paths agree on the same potential") {
    // A constant potential expressed as Constant (exact stepping) and as a
    // one-term Fourier shape (adaptive RK path).
    const double c = 0.7;
    const auto exact = PeriodicPotential::constant(1.0, c);
    const auto rk = PeriodicPotential::fourier(1.0, c, {0.0}, {0.0});
    const cplx lam(1.2, 0.4);
    const C2 m1 = monodromy(SpectralPoint{exact, 1.0, lam});
    const C2 m2 = monodromy(SpectralPoint{rk, 1.0, lam});
    CHECK(mat_dist(m1, m2) < 1e-8);

    // Same for a sampled shape that happens to be constant.
    const auto samp = PeriodicPotential::sampled(1.0, {c, c, c, c});
    const C2 m3 = monodromy(SpectralPoint{samp, 1.0, lam});
    CHECK(mat_dist(m1, m3) < 1e-8);
}

TEST_CASE("trajectory basics and Wronskian") {
    const auto q0 = PeriodicPotential::zero(1.0);
    const SpectralPoint sp{q0, 1.0, cplx(0.5, 0.2)};
    const Trajectory t2 = trajectory(sp, 2);
    CHECK(t2.nodes.size() == 2);
    CHECK(mat_dist(t2.matrices.front(), C2::identity()) == 0.0);
    CHECK(mat_dist(t2.matrices.back(), monodromy(sp)) < 1e-13);

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int it = 0; it < 25; ++it) {
        const auto pot = random_potential(rng);
        const SpectralPoint s{pot, 1.0, cplx(u(rng), u(rng))};
        const Trajectory tr = trajectory(s, 33);
        CHECK(tr.max_det_drift() < 1e-9);
    }
}

TEST_CASE("conjugation symmetry of the fundamental system") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int it = 0; it < 25; ++it) {
        const auto pot = random_potential(rng);
        const cplx lam(u(rng), u(rng));
        const double x = pot.period() * 0.5 * (1.0 + u(rng) / 3.0);
        const C2 a = fundamental_system(SpectralPoint{pot, 1.0, lam}, x);
        const C2 b = fundamental_system(SpectralPoint{pot, 1.0, std::conj(lam)}, x);
        const C2 bc{std::conj(b.a11), std::conj(b.a12), std::conj(b.a21), std::conj(b.a22)};
        CHECK(mat_dist(a, bc) < 1e-10 * std::max(1.0, frobenius_norm(a)));
    }
}

TEST_CASE("scaled propagation matches unscaled in the overlap regime") {
    const auto pwc = PeriodicPotential::piecewise_constant(1.0, {0.0, 0.5}, {1.0, -1.0});
    const cplx lam(0.4, 21.0);
    const SpectralPoint sp{pwc, 1.0, lam};
    const double beta = std::abs(lam.imag());
    const C2 scaled = fundamental_system_scaled(sp, 1.0, beta);
    const C2 plain = fundamental_system(sp, 1.0);
    const cplx f = std::exp(cplx(-beta, 0.0));
    CHECK(mat_dist(scaled, f * plain) < 1e-9 * frobenius_norm(scaled));

    const auto four = PeriodicPotential::fourier(1.0, 0.3, {0.5}, {0.0});
    const SpectralPoint spf{four, 1.0, lam};
    const C2 scaled_f = fundamental_system_scaled(spf, 1.0, beta);
    const C2 plain_f = fundamental_system(spf, 1.0);
    CHECK(mat_dist(scaled_f, f * plain_f) < 1e-8 * frobenius_norm(scaled_f));
}

TEST_CASE("integrator underflow raises StepSizeUnderflow") {
    const auto four = PeriodicPotential::fourier(1.0, 0.3, {0.5}, {0.0});
    const SpectralPoint sp{four, 1.0, cplx(0.5, 0.5)};
    OdeTolerances impossible{1e-40, 1e-40};
    CHECK_THROWS_AS(propagate_interval(sp, 0.0, 1.0, 0.0, impossible), StepSizeUnderflow);
}

TEST_CASE("negative mass is rejected") {
    const auto q0 = PeriodicPotential::zero(1.0);
    CHECK_THROWS_AS(fundamental_system(SpectralPoint{q0, -1.0, 0.0}, 0.5),
                    std::invalid_argument);
}

TEST_CASE("scaled stepping stays finite for very large Im lambda") {
    const auto pwc = PeriodicPotential::piecewise_constant(1.0, {0.0, 0.5}, {1.0, -1.0});
    const cplx lam(0.0, 5000.0);
    const SpectralPoint sp{pwc, 1.0, lam};
    const C2 psi = fundamental_system_scaled(sp, 1.0, 5000.0);
    CHECK(psi.finite());
    CHECK(frobenius_norm(psi) > 0.1);
    CHECK(frobenius_norm(psi) < 10.0);
}
