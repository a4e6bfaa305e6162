#include "pdirac/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "pdirac/format.hpp"

namespace pdirac {

C2 phi_reference(const PeriodicPotential& pot, double mu, double alpha, double x,
                 bool one_term) {
    const double phase = pot.antiderivative(x) - mu * x;
    const cplx g = std::exp(cplx(0.0, phase));
    if (one_term) {
        const cplx half_g = 0.5 * g;
        const C2 id = C2::identity();
        const C2 s2 = C2::pauli(2);
        return half_g * id - half_g * s2;
    }
    const cplx d = std::exp(cplx(-2.0 * alpha * x, -phase));
    const cplx ci = 0.5 * (g + d);
    const cplx cs = 0.5 * (d - g);
    return ci * C2::identity() + cs * C2::pauli(2);
}

AsymptoticReport verify_phi_asymptotics(const PeriodicPotential& pot, double mass, double mu,
                             const std::vector<double>& alphas, int n_x,
                             const OdeTolerances& tol) {
    if (n_x < 2) throw std::invalid_argument("verify_phi_asymptotics: n_x must be >= 2");
    AsymptoticReport rep;
    rep.mu = mu;
    rep.mass = mass;
    std::vector<double> errs;
    for (double alpha : alphas) {
        if (!(alpha > 0.0)) throw std::invalid_argument("verify_phi_asymptotics: alpha must be positive");
        const SpectralPoint sp{pot, mass, cplx(mu, alpha)};
        const Trajectory tr = trajectory(sp, n_x, alpha, tol);
        double err = 0.0;
        for (std::size_t j = 0; j < tr.nodes.size(); ++j)
            err = std::max(err, frobenius_norm(tr.matrices[j] -
                                               phi_reference(pot, mu, alpha, tr.nodes[j])));
        AsymptoticRow row;
        row.alpha = alpha;
        row.phi_err = err;
        rep.rows.push_back(row);
        errs.push_back(err);
    }
    rep.exp_phi = fit_decay_exponent(alphas, errs);
    return rep;
}

namespace {

// Projective distance between complex directions: sin of the Hermitian angle.
double direction_distance(const Vec2& v, const Vec2& w) {
    const cplx inner = v.u * std::conj(w.u) + v.v * std::conj(w.v);
    const double c2 = std::norm(inner) / (std::norm(v.u) + std::norm(v.v)) /
                      (std::norm(w.u) + std::norm(w.v));
    return std::sqrt(std::max(1.0 - c2, 0.0));
}

}  // namespace

AsymptoticReport verify_floquet_asymptotics(const PeriodicPotential& pot, double mass, double mu,
                                  const std::vector<double>& alphas, int phi_nodes,
                                  const OdeTolerances& tol) {
    AsymptoticReport rep;
    rep.mu = mu;
    rep.mass = mass;
    const double a = pot.period();
    const double q_mean = pot.antiderivative(a) / a;
    const double wrap = 2.0 * std::numbers::pi / a;
    std::vector<double> k_errs, g_errs, gpm_errs, v_errs;
    for (double alpha : alphas) {
        if (!(alpha > 0.0))
            throw std::invalid_argument("verify_floquet_asymptotics: alpha must be positive");
        const SpectralPoint sp{pot, mass, cplx(mu, alpha)};
        const FloquetData fd = floquet_data(sp, tol);

        const cplx diff = fd.k - cplx(mu - q_mean, alpha);
        const double k_err = std::hypot(std::remainder(diff.real(), wrap), diff.imag());

        const auto gamma = gamma_of_matrix(fd.monodromy_scaled);
        const double gamma_err = gamma ? std::abs(*gamma - 1.0) : 1.0;

        const PeriodicParts pp = periodic_parts(sp, fd, phi_nodes, MinusPath::Auto, tol);
        const double gpm_err =
            std::max(std::abs(pp.gamma_plus - 1.0), std::abs(pp.gamma_minus - 1.0));

        const double vpm_err =
            std::max(direction_distance(fd.v_plus, Vec2{1.0, cplx(0.0, -1.0)}),
                     direction_distance(fd.v_minus, Vec2{1.0, cplx(0.0, 1.0)}));

        AsymptoticRow row;
        row.alpha = alpha;
        row.k_err = k_err;
        row.gamma_err = gamma_err;
        row.gpm_err = gpm_err;
        row.vpm_err = vpm_err;
        rep.rows.push_back(row);
        k_errs.push_back(k_err);
        g_errs.push_back(gamma_err);
        gpm_errs.push_back(gpm_err);
        v_errs.push_back(vpm_err);
    }
    rep.exp_k = fit_decay_exponent(alphas, k_errs);
    rep.exp_gamma = fit_decay_exponent(alphas, g_errs);
    rep.exp_gpm = fit_decay_exponent(alphas, gpm_errs);
    rep.exp_vpm = fit_decay_exponent(alphas, v_errs);
    return rep;
}

AsymptoticReport asymptotic_report(const PeriodicPotential& pot, double mass, double mu,
                                   const std::vector<double>& alphas, int n_x, int phi_nodes,
                                   const OdeTolerances& tol) {
    AsymptoticReport rep = verify_floquet_asymptotics(pot, mass, mu, alphas, phi_nodes, tol);
    const AsymptoticReport phi = verify_phi_asymptotics(pot, mass, mu, alphas, n_x, tol);
    for (std::size_t i = 0; i < rep.rows.size(); ++i) rep.rows[i].phi_err = phi.rows[i].phi_err;
    rep.exp_phi = phi.exp_phi;
    return rep;
}

double fit_decay_exponent(const std::vector<double>& alphas, const std::vector<double>& errs) {
    const std::size_t n = alphas.size();
    if (n < 2 || errs.size() != n) return 0.0;
    const std::size_t lo = n - std::max<std::size_t>(n / 2, 2);  // last half
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = lo; i < n; ++i) {
        const double x = std::log(alphas[i]);
        const double y = std::log(std::max(errs[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    if (denom == 0.0) return 0.0;
    return (static_cast<double>(m) * sxy - sx * sy) / denom;
}

bool decay_family_passes(const std::vector<double>& alphas, const std::vector<double>& errs,
                         double exponent_threshold, double roundoff_floor) {
    double worst = 0.0;
    for (double e : errs) worst = std::max(worst, e);
    if (worst <= roundoff_floor) return true;
    return fit_decay_exponent(alphas, errs) <= exponent_threshold;
}

void write_report_csv(std::ostream& os, const AsymptoticReport& rep) {
    os << "alpha,phi_err,k_err,gamma_err,gpm_err,vpm_err\n";
    for (const auto& r : rep.rows)
        os << fmt17(r.alpha) << ',' << fmt17(r.phi_err) << ',' << fmt17(r.k_err) << ','
           << fmt17(r.gamma_err) << ',' << fmt17(r.gpm_err) << ',' << fmt17(r.vpm_err) << '\n';
    os << "exponent_fit," << fmt17(rep.exp_phi) << ',' << fmt17(rep.exp_k) << ','
       << fmt17(rep.exp_gamma) << ',' << fmt17(rep.exp_gpm) << ',' << fmt17(rep.exp_vpm)
       << '\n';
}

}  // namespace pdirac
