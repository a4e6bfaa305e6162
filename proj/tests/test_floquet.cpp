#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "pdirac/errors.hpp"
#include "pdirac/floquet.hpp"

using namespace pdirac;

TEST_CASE("free case lambda = 0: D = 2 cosh 1, rho = e, k = i") {
    const auto q0 = PeriodicPotential::zero(1.0);
    const FloquetData fd = floquet_data(SpectralPoint{q0, 1.0, 0.0});
    CHECK(fd.discriminant().real() == doctest::Approx(2.0 * std::cosh(1.0)).epsilon(1e-13));
    CHECK(std::abs(fd.rho() - std::exp(1.0)) < 1e-12);
    CHECK(fd.k.real() == doctest::Approx(0.0));
    CHECK(fd.k.imag() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(!fd.on_essential);
}

TEST_CASE("free case lambda = 3 lies on the essential spectrum") {
    const auto q0 = PeriodicPotential::zero(1.0);
    const FloquetData fd = floquet_data(SpectralPoint{q0, 1.0, 3.0});
    CHECK(fd.on_essential);
    CHECK(fd.discriminant().real() ==
          doctest::Approx(2.0 * std::cos(std::sqrt(8.0))).epsilon(1e-12));
    CHECK(std::abs(fd.im_k) < 1e-12);
    CHECK(std::abs(fd.rho() + 1.0 / fd.rho() - fd.discriminant()) <
          1e-9 * (1.0 + std::abs(fd.discriminant())));
}

TEST_CASE("free case lambda = i: D = 2 cosh(sqrt 2)") {
    const auto q0 = PeriodicPotential::zero(1.0);
    const FloquetData fd = floquet_data(SpectralPoint{q0, 1.0, cplx(0.0, 1.0)});
    CHECK(fd.discriminant().real() ==
          doctest::Approx(2.0 * std::cosh(std::sqrt(2.0))).epsilon(1e-12));
    CHECK(std::abs(fd.discriminant().imag()) < 1e-12);
    CHECK(fd.im_k == doctest::Approx(imk_formula(fd.discriminant(), 1.0)).epsilon(1e-12));
}

TEST_CASE("imk_formula closed-form values") {
    CHECK(imk_formula(cplx(2.0 * std::cosh(1.0), 0.0), 1.0) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(imk_formula(cplx(1.3, 0.0), 1.0) == doctest::Approx(0.0));
    CHECK(imk_formula(cplx(-2.0, 0.0), 1.0) == doctest::Approx(0.0));
    CHECK(imk_formula(cplx(0.0, 0.0), 1.0) == doctest::Approx(0.0));
}

TEST_CASE("degenerate multiplier error at a band edge") {
    const auto q0 = PeriodicPotential::zero(1.0);
    CHECK_THROWS_AS(floquet_data(SpectralPoint{q0, 1.0, 1.0}), DegenerateMultiplierError);
}

namespace {

PeriodicPotential asym_pwc() {
    return PeriodicPotential::piecewise_constant(1.0, {0.0, 0.3, 0.55}, {2.0, -1.0, 0.5});
}

}  // namespace

TEST_CASE("Im k from ln|rho| matches the discriminant closed form") {
    const auto pot = asym_pwc();
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    int n = 0;
    while (n < 300) {
        const cplx lam(u(rng), u(rng));
        if (std::abs(lam.imag()) < 0.05) continue;
        const FloquetData fd = floquet_data(SpectralPoint{pot, 1.0, lam});
        CHECK(fd.im_k == doctest::Approx(imk_formula(fd.discriminant(), 1.0)).epsilon(1e-9));
        CHECK(fd.im_k > 0.0);  // k real would force lambda real
        ++n;
    }
}

TEST_CASE("quasimomentum reflection k(conj lambda) = -conj(k(lambda))") {
    const auto pot = asym_pwc();
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    int n = 0;
    while (n < 100) {
        const cplx lam(u(rng), 0.1 + 2.0 * std::abs(u(rng)) / 3.0);
        const FloquetData up = floquet_data(SpectralPoint{pot, 1.0, lam});
        const FloquetData dn = floquet_data(SpectralPoint{pot, 1.0, std::conj(lam)});
        CHECK(std::abs(dn.k - (-std::conj(up.k))) < 1e-12 * (1.0 + std::abs(up.k)));
        ++n;
    }
}

TEST_CASE("Re k * a is a multiple of pi inside spectral gaps") {
    const auto q0 = PeriodicPotential::zero(1.0);
    for (double lam : {0.0, 0.35, -0.6, 0.9}) {  // free-case gap (-1, 1)
        const FloquetData fd = floquet_data(SpectralPoint{q0, 1.0, lam});
        const double r = std::remainder(fd.k.real() * 1.0, std::numbers::pi);
        CHECK(std::abs(r) < 1e-8);
        CHECK(fd.im_k > 0.0);
    }
}

TEST_CASE("phi_pm(0) equals v_pm exactly by construction") {
    const auto pot = asym_pwc();
    const SpectralPoint sp{pot, 1.0, cplx(0.3, 1.2)};
    const FloquetData fd = floquet_data(sp);
    const PeriodicParts pp = periodic_parts(sp, fd, 32);
    CHECK(pp.phi_plus.front().u == fd.v_plus.u);
    CHECK(pp.phi_plus.front().v == fd.v_plus.v);
    CHECK(pp.phi_minus.front().u == fd.v_minus.u);
    CHECK(pp.phi_minus.front().v == fd.v_minus.v);
}

TEST_CASE("periodic parts in the free case: constant phi, gamma = 1") {
    const auto q0 = PeriodicPotential::zero(1.0);
    const SpectralPoint sp{q0, 1.0, 0.0};
    const FloquetData fd = floquet_data(sp);
    const PeriodicParts pp = periodic_parts(sp, fd, 256);
    CHECK(pp.gamma_plus == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pp.gamma_minus == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pp.periodicity_residual_plus < 1e-12 * pp.sup_plus);
    CHECK(!pp.periodicity_warning);
    CHECK(c_lambda(pp, fd) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("1/C = Gamma gamma_+ gamma_- and the exponential lower bound") {
    const auto pot = asym_pwc();
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    int n = 0;
    while (n < 60) {
        const cplx lam(u(rng), u(rng));
        if (std::abs(lam.imag()) < 0.05) continue;
        const SpectralPoint sp{pot, 1.0, lam};
        const FloquetData fd = floquet_data(sp);
        const PeriodicParts pp = periodic_parts(sp, fd, 512);
        const double gamma = *gamma_of_matrix(fd.monodromy_scaled);
        const double c = c_lambda(pp, fd);
        CHECK(1.0 / c ==
              doctest::Approx(gamma * pp.gamma_plus * pp.gamma_minus).epsilon(1e-10));
        CHECK(pp.gamma_plus <= 1.0 + 1e-12);
        CHECK(pp.gamma_minus <= 1.0 + 1e-12);
        const double bound =
            std::exp(-1.0 * (fd.im_k + std::hypot(1.0, lam.imag())));
        CHECK(pp.gamma_plus >= bound * (1.0 - 1e-9));
        CHECK(pp.gamma_minus >= bound * (1.0 - 1e-9));
        ++n;
    }
}

TEST_CASE("reflected and direct phi_minus agree at moderate Im k") {
    const auto pot = asym_pwc();
    const SpectralPoint sp{pot, 1.0, cplx(0.7, 1.3)};
    const FloquetData fd = floquet_data(sp);
    REQUIRE(fd.im_k * fd.period > 0.2);
    REQUIRE(fd.im_k * fd.period < 6.0);
    const PeriodicParts direct = periodic_parts(sp, fd, 128, MinusPath::Direct);
    const PeriodicParts refl = periodic_parts(sp, fd, 128, MinusPath::Reflected);
    REQUIRE(direct.phi_minus.size() == refl.phi_minus.size());
    for (std::size_t j = 0; j < direct.phi_minus.size(); ++j) {
        CHECK((direct.phi_minus[j] - refl.phi_minus[j]).norm() <
              1e-8 * direct.sup_minus);
    }
    CHECK(refl.gamma_minus == doctest::Approx(direct.gamma_minus).epsilon(1e-9));
}

TEST_CASE("single-point phi evaluators match the sampled parts") {
    const auto pot = asym_pwc();
    const SpectralPoint sp{pot, 1.0, cplx(-0.4, 0.9)};
    const FloquetData fd = floquet_data(sp);
    const PeriodicParts pp = periodic_parts(sp, fd, 64);
    for (std::size_t j : {std::size_t(3), std::size_t(40), std::size_t(90)}) {
        if (j >= pp.nodes.size()) continue;
        const Vec2 p = phi_plus_at(sp, fd, pp.nodes[j]);
        const Vec2 m = phi_minus_at(sp, fd, pp.nodes[j]);
        CHECK((p - pp.phi_plus[j]).norm() < 1e-9 * pp.sup_plus);
        CHECK((m - pp.phi_minus[j]).norm() < 1e-9 * pp.sup_minus);
    }
    // Periodic extension: phi(x + a) = phi(x).
    const Vec2 p0 = phi_plus_at(sp, fd, 0.37);
    const Vec2 p1 = phi_plus_at(sp, fd, 0.37 + 3.0);
    CHECK((p0 - p1).norm() < 1e-10 * pp.sup_plus);
}

TEST_CASE("gamma via reflection at large Im lambda stays in (0, 1]") {
    const auto pot = asym_pwc();
    const SpectralPoint sp{pot, 1.0, cplx(0.3, 80.0)};
    const FloquetData fd = floquet_data(sp);
    CHECK(fd.scale > 0.0);
    const PeriodicParts pp = periodic_parts(sp, fd, 256);
    CHECK(pp.minus_by_reflection);
    CHECK(pp.gamma_plus > 0.9);  // gamma -> 1 at large Im lambda
    CHECK(pp.gamma_plus <= 1.0 + 1e-12);
    CHECK(pp.gamma_minus > 0.9);
    CHECK(pp.gamma_minus <= 1.0 + 1e-12);
}
