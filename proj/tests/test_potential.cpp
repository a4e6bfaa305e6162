#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "pdirac/errors.hpp"
#include "pdirac/potential.hpp"

using namespace pdirac;

TEST_CASE("eval: zero, piecewise, fourier") {
    CHECK(PeriodicPotential::zero(1.0).eval(0.3) == 0.0);

    const auto pwc = PeriodicPotential::piecewise_constant(1.0, {0.0, 0.5}, {1.0, -1.0});
    CHECK(pwc.eval(1.25) == doctest::Approx(1.0));  // periodic extension
    CHECK(pwc.eval(0.75) == doctest::Approx(-1.0));
    CHECK(pwc.eval(-0.3) == doctest::Approx(-1.0));

    const double a = 2.0 * std::numbers::pi;
    const auto f = PeriodicPotential::fourier(a, 0.0, {2.0}, {});
    CHECK(f.eval(std::numbers::pi) == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("antiderivative closed forms") {
    CHECK(PeriodicPotential::constant(1.0, 3.0).antiderivative(0.5) == doctest::Approx(1.5));
    const auto pwc = PeriodicPotential::piecewise_constant(1.0, {0.0, 0.5}, {1.0, -1.0});
    CHECK(pwc.antiderivative(0.75) == doctest::Approx(0.25));
    CHECK(PeriodicPotential::zero(1.0).antiderivative(0.7) == 0.0);
    CHECK_THROWS_AS(pwc.antiderivative(1.5), std::domain_error);
    CHECK_THROWS_AS(pwc.antiderivative(-0.2), std::domain_error);
}

TEST_CASE("Q' = q at continuity points (finite differences)") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    const std::vector<PeriodicPotential> pots = {
        PeriodicPotential::fourier(1.3, 0.4, {0.7, -0.2}, {0.1, 0.3}),
        PeriodicPotential::sampled(1.0, {0.0, 1.0, -0.5, 2.0, 0.25, -1.0, 0.5, 0.1}),
        PeriodicPotential::piecewise_constant(2.0, {0.0, 0.6, 1.1}, {1.0, -2.0, 0.5}),
    };
    for (const auto& pot : pots) {
        for (int it = 0; it < 50; ++it) {
            const double x = u(rng) * pot.period();
            const double h = 1e-7 * pot.period();
            // Skip points within h of a breakpoint.
            bool near_break = false;
            for (double b : pot.interior_breakpoints())
                if (std::abs(x - b) < 4.0 * h) near_break = true;
            if (near_break) continue;
            const double fd =
                (pot.antiderivative(x + h) - pot.antiderivative(x - h)) / (2.0 * h);
            CHECK(fd == doctest::Approx(pot.eval(x)).epsilon(1e-5));
        }
    }
}

TEST_CASE("periodized antiderivative is additive across periods") {
    const auto pot = PeriodicPotential::fourier(1.5, 0.3, {0.5}, {0.2});
    const double qa = pot.antiderivative(1.5);
    CHECK(pot.antiderivative_periodized(1.5 + 0.4) ==
          doctest::Approx(qa + pot.antiderivative(0.4)).epsilon(1e-13));
    CHECK(pot.antiderivative_periodized(-0.4) ==
          doctest::Approx(-qa + pot.antiderivative(1.1)).epsilon(1e-12));
}

TEST_CASE("reflected potential evaluates to q(a - x)") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::vector<PeriodicPotential> pots = {
        PeriodicPotential::piecewise_constant(1.0, {0.0, 0.3, 0.7}, {1.0, -2.0, 0.5}),
        PeriodicPotential::fourier(2.0, 0.1, {0.5, 0.2}, {-0.3, 0.4}),
        PeriodicPotential::sampled(1.0, {0.0, 1.0, 4.0, -2.0}),
    };
    for (const auto& pot : pots) {
        const auto refl = pot.reflected();
        for (int it = 0; it < 200; ++it) {
            const double x = u(rng) * pot.period();
            bool near_break = false;
            for (double b : pot.interior_breakpoints())
                if (std::abs((pot.period() - x) - b) < 1e-9) near_break = true;
            if (near_break) continue;  // jump points differ by the half-open convention
            CHECK(refl.eval(x) == doctest::Approx(pot.eval(pot.period() - x)).epsilon(1e-12));
        }
    }
}

namespace {

PerturbationField exp_decay_field(double p) {
    // V(x) = diag(e^{-|x|}, 0) truncated to [-20, 20].
    const int n = 8001;
    std::vector<C2> samples(n);
    for (int i = 0; i < n; ++i) {
        const double x = -20.0 + 40.0 * static_cast<double>(i) / (n - 1);
        samples[i] = C2{std::exp(-std::abs(x)), 0.0, 0.0, 0.0};
    }
    return PerturbationField::explicit_samples(p, -20.0, 20.0, std::move(samples));
}

}  // namespace

TEST_CASE("vnorm: stored value and quadrature oracles") {
    CHECK(PerturbationField::norm_only(1.0, 0.5).vnorm() == 0.5);
    // int e^{-|x|} over [-20, 20] = 2 (1 - e^{-20}).
    CHECK(exp_decay_field(1.0).vnorm() ==
          doctest::Approx(2.0 * (1.0 - std::exp(-20.0))).epsilon(1e-8));
    // (int e^{-2|x|})^(1/2) = (1 - e^{-40})^(1/2).
    CHECK(exp_decay_field(2.0).vnorm() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("vnorm scales homogeneously") {
    const int n = 401;
    std::vector<C2> base(n), scaled(n);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const cplx c(1.7, -0.4);
    for (int i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / (n - 1);
        const C2 v{cplx(std::sin(3 * x), 0.2 * x), cplx(u(rng) * 0.0 + x, 0.0),
                   cplx(0.5, -x), cplx(std::cos(2 * x), 0.0)};
        base[i] = v;
        scaled[i] = c * v;
    }
    const auto f1 = PerturbationField::explicit_samples(1.5, 0.0, 1.0, base);
    const auto f2 = PerturbationField::explicit_samples(1.5, 0.0, 1.0, scaled);
    CHECK(f2.vnorm() == doctest::Approx(std::abs(c) * f1.vnorm()).epsilon(1e-12));
}

TEST_CASE("vnorm rejects non-convergent sampling") {
    // Wildly oscillating samples that Simpson cannot represent at this density.
    std::vector<C2> samples(9);
    for (int i = 0; i < 9; ++i) samples[i] = C2{(i % 2 == 0) ? 100.0 : 0.01, 0.0, 0.0, 0.0};
    const auto f = PerturbationField::explicit_samples(1.0, 0.0, 1.0, std::move(samples));
    CHECK_THROWS_AS(f.vnorm(), QuadratureError);
}

namespace {

// Principal square root of a PSD Hermitian 2x2 matrix via (H + sqrt(det) I) /
// sqrt(tr + 2 sqrt(det)) (Cayley-Hamilton).
C2 hermitian_sqrt(const C2& h) {
    const double s = std::sqrt(std::max(std::abs(h.det()), 0.0));
    const double t2 = h.trace().real() + 2.0 * s;
    if (t2 <= 0.0) return C2{};
    const double t = std::sqrt(t2);
    const C2 shifted = h + cplx(s, 0.0) * C2::identity();
    return cplx(1.0 / t, 0.0) * shifted;
}

C2 adjoint(const C2& a) {
    return {std::conj(a.a11), std::conj(a.a21), std::conj(a.a12), std::conj(a.a22)};
}

}  // namespace

TEST_CASE("polar factor norm identity ||A(x)|| = sqrt(||V(x)||)") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int it = 0; it < 500; ++it) {
        auto z = [&] { return cplx(u(rng), u(rng)); };
        const C2 v{z(), z(), z(), z()};
        const C2 vtv = adjoint(v) * v;
        const C2 abs_v = hermitian_sqrt(vtv);       // |V|
        const C2 a = hermitian_sqrt(abs_v);         // A = |V|^{1/2}
        CHECK(operator_norm(a) ==
              doctest::Approx(std::sqrt(operator_norm(v))).epsilon(1e-9));
    }
}
