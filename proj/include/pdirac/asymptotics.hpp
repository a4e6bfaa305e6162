#pragma once

#include <iosfwd>
#include <vector>

#include "pdirac/floquet.hpp"

namespace pdirac {

// Large-Im-lambda verification harness: scaled-propagation errors against the
// two-term closed form of e^{-alpha x} Phi, and the k / Gamma / gamma_pm /
// eigenvector limits.
struct AsymptoticRow {
    double alpha = 0.0;
    double phi_err = 0.0;
    double k_err = 0.0;
    double gamma_err = 0.0;
    double gpm_err = 0.0;
    double vpm_err = 0.0;
};

struct AsymptoticReport {
    double mu = 0.0;
    double mass = 0.0;
    std::vector<AsymptoticRow> rows;
    // Log-log slopes fitted over the last half of the alpha range.
    double exp_phi = 0.0, exp_k = 0.0, exp_gamma = 0.0, exp_gpm = 0.0, exp_vpm = 0.0;
};

// Two-term closed form:
//   1/2 (e^{i(Q(x)-mu x)} + e^{-2 a x} e^{-i(Q(x)-mu x)}) I
// + 1/2 (-e^{i(Q(x)-mu x)} + e^{-2 a x} e^{-i(Q(x)-mu x)}) sigma_2;
// one_term selects the single-term variant 1/2 e^{i(Q(x)-mu x)} (I - sigma_2).
C2 phi_reference(const PeriodicPotential& pot, double mu, double alpha, double x,
                 bool one_term = false);

// phi_err(alpha) = sup over an n_x grid of ||e^{-alpha x} Phi(x) - reference||_F.
AsymptoticReport verify_phi_asymptotics(const PeriodicPotential& pot, double mass, double mu,
                             const std::vector<double>& alphas, int n_x,
                             const OdeTolerances& tol = {});

// k_err against mu + i alpha - Q(a)/a (real part modulo 2 pi / a), Gamma and
// gamma_pm deviations from 1, and the projective eigenvector distance from
// (1, -i) / (1, i).
AsymptoticReport verify_floquet_asymptotics(const PeriodicPotential& pot, double mass, double mu,
                                  const std::vector<double>& alphas, int phi_nodes,
                                  const OdeTolerances& tol = {});

// Both of the above merged into one table.
AsymptoticReport asymptotic_report(const PeriodicPotential& pot, double mass, double mu,
                                   const std::vector<double>& alphas, int n_x, int phi_nodes,
                                   const OdeTolerances& tol = {});

// Least-squares slope of ln(err) vs ln(alpha) over the last half of the data.
double fit_decay_exponent(const std::vector<double>& alphas, const std::vector<double>& errs);

// Pass rule for one error family: fitted exponent <= threshold, or the whole
// family already at the roundoff floor.
bool decay_family_passes(const std::vector<double>& alphas, const std::vector<double>& errs,
                         double exponent_threshold = -0.8, double roundoff_floor = 1e-12);

// CSV: alpha, phi_err, k_err, gamma_err, gpm_err, vpm_err rows followed by an
// exponent_fit summary line.
void write_report_csv(std::ostream& os, const AsymptoticReport& report);

}  // namespace pdirac
