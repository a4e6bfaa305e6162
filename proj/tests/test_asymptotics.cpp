#include <cmath>
#include <sstream>

#include "doctest.h"
#include "pdirac/asymptotics.hpp"

using namespace pdirac;

TEST_CASE("phi_reference at x = 0 is the identity") {
    const auto pot = PeriodicPotential::fourier(1.0, 0.3, {0.5}, {0.2});
    const C2 r = phi_reference(pot, 0.7, 35.0, 0.0);
    CHECK(frobenius_norm(r - C2::identity()) < 1e-15);
}

TEST_CASE("phi_reference closed form for q = 0, mu = 0 at x = a") {
    const auto q0 = PeriodicPotential::zero(1.0);
    const double alpha = 12.0;
    const C2 r = phi_reference(q0, 0.0, alpha, 1.0);
    const double e = std::exp(-2.0 * alpha);
    CHECK(std::abs(r.a11 - 0.5 * (1.0 + e)) < 1e-15);
    // sigma_2 coefficient is (e - 1)/2: entry (1,2) = -i (e - 1)/2.
    CHECK(std::abs(r.a12 - cplx(0.0, -0.5 * (e - 1.0))) < 1e-15);
}

TEST_CASE("m = 0 scaled propagation matches the reference exactly") {
    const std::vector<double> alphas{40.0, 80.0, 160.0, 320.0};
    for (const auto& pot :
         {PeriodicPotential::zero(1.0), PeriodicPotential::fourier(1.0, 0.4, {0.7}, {-0.3})}) {
        const AsymptoticReport rep = verify_phi_asymptotics(pot, 0.0, 1.3, alphas, 33);
        for (const auto& row : rep.rows) CHECK(row.phi_err < 1e-12);
    }
}

TEST_CASE("m = 1 phi error halves when alpha doubles") {
    const std::vector<double> alphas{40.0, 80.0, 160.0, 320.0};
    for (const auto& pot : {PeriodicPotential::zero(1.0),
                            PeriodicPotential::piecewise_constant(1.0, {0.0, 0.5}, {1.0, -1.0})}) {
        const AsymptoticReport rep = verify_phi_asymptotics(pot, 1.0, 0.0, alphas, 65);
        for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
            const double ratio = rep.rows[i + 1].phi_err / rep.rows[i].phi_err;
            CHECK(ratio > 0.35);
            CHECK(ratio < 0.65);
        }
        CHECK(rep.exp_phi < -0.8);
    }
}

TEST_CASE("k, Gamma, gamma_pm, v_pm limits decay like 1/alpha") {
    const std::vector<double> alphas{40.0, 80.0, 160.0, 320.0, 640.0};
    const auto pwc = PeriodicPotential::piecewise_constant(1.0, {0.0, 0.5}, {1.2, -0.8});
    const AsymptoticReport rep = verify_floquet_asymptotics(pwc, 1.0, 1.3, alphas, 256);
    for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
        CHECK(rep.rows[i + 1].k_err < rep.rows[i].k_err);
        CHECK(rep.rows[i + 1].gamma_err < rep.rows[i].gamma_err);
        CHECK(rep.rows[i + 1].gpm_err < rep.rows[i].gpm_err);
    }
    CHECK(rep.exp_k <= -0.8);
    CHECK(rep.exp_gamma <= -0.8);
    CHECK(rep.exp_gpm <= -0.8);
    CHECK(rep.exp_vpm <= -0.8);
    // Q(a)/a = 0.2 here: Re k approaches mu - 0.2 modulo 2 pi.
    CHECK(rep.rows.back().k_err < 1e-2);
}

TEST_CASE("free-case k error has the closed-form 1/alpha size") {
    // q = 0: k = sqrt(lambda^2 - m^2) ~ lambda - m^2/(2 lambda).
    const std::vector<double> alphas{50.0, 100.0, 200.0};
    const AsymptoticReport rep = verify_floquet_asymptotics(PeriodicPotential::zero(1.0), 1.0, 0.0,
                                                  alphas, 128);
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const double expected = 0.5 / alphas[i];  // |m^2 / (2 i alpha)|
        CHECK(rep.rows[i].k_err == doctest::Approx(expected).epsilon(1e-3));
    }
}

TEST_CASE("fit and pass rule behave on synthetic families") {
    const std::vector<double> alphas{40, 80, 160, 320, 640, 1280};
    std::vector<double> inv, flat_tiny, grow;
    for (double a : alphas) {
        inv.push_back(3.0 / a);
        flat_tiny.push_back(3e-15);
        grow.push_back(1e-6 * a);
    }
    CHECK(fit_decay_exponent(alphas, inv) == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(decay_family_passes(alphas, inv));
    CHECK(decay_family_passes(alphas, flat_tiny));  // roundoff floor
    CHECK(!decay_family_passes(alphas, grow));
}

TEST_CASE("report CSV carries rows and the exponent summary") {
    const std::vector<double> alphas{40.0, 80.0};
    const AsymptoticReport rep =
        asymptotic_report(PeriodicPotential::zero(1.0), 1.0, 0.0, alphas, 17, 64);
    std::ostringstream os;
    write_report_csv(os, rep);
    const std::string s = os.str();
    CHECK(s.find("alpha,phi_err,k_err,gamma_err,gpm_err,vpm_err") == 0);
    CHECK(s.find("exponent_fit,") != std::string::npos);
}
