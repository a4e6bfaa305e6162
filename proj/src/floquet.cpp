#include "pdirac/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "pdirac/errors.hpp"

namespace pdirac {

namespace {

constexpr double kMinusDirectLimit = 6.0;  // switch to the reflected path beyond Im k * a = 6

double reduce_mod(double x, double a) {
    double r = x - a * std::floor(x / a);
    if (r >= a) r -= a;
    if (r < 0.0) r = 0.0;
    return r;
}

Vec2 sigma3(const Vec2& w) { return {w.u, -w.v}; }

bool use_reflection(const FloquetData& fd, MinusPath path) {
    if (path == MinusPath::Direct) return false;
    if (path == MinusPath::Reflected) return true;
    return fd.im_k * fd.period > kMinusDirectLimit || fd.scale > 0.0;
}

}  // namespace

C2 FloquetData::monodromy() const {
    return std::exp(cplx(scale * period, 0.0)) * monodromy_scaled;
}

cplx FloquetData::discriminant() const {
    return std::exp(cplx(scale * period, 0.0)) * discriminant_scaled;
}

cplx FloquetData::rho() const { return std::exp(cplx(scale * period, 0.0)) * rho_scaled; }

double imk_formula(cplx d, double a) {
    const double m2 = 0.25 * std::norm(d);
    const double t = 1.0 - m2;
    const double arg = m2 + std::sqrt(t * t + d.imag() * d.imag());
    return std::acosh(std::max(arg, 1.0)) / (2.0 * a);
}

FloquetData floquet_data(const SpectralPoint& sp, const OdeTolerances& tol) {
    const double a = sp.potential.period();
    const double beta = default_scale(sp);

    FloquetData fd;
    fd.lambda = sp.lambda;
    fd.period = a;
    fd.scale = beta;
    fd.monodromy_scaled = propagate_interval(sp, 0.0, a, beta, tol);
    fd.discriminant_scaled = fd.monodromy_scaled.trace();

    if (beta == 0.0) {
        const cplx d = fd.discriminant_scaled;
        if (std::abs(d - 2.0) <= 1e-10 || std::abs(d + 2.0) <= 1e-10)
            throw DegenerateMultiplierError(
                "floquet_data: discriminant at +-2, Floquet eigenvectors undefined", sp.lambda);
    }

    EigenPair2 eig = eig2(fd.monodromy_scaled);
    // |mu1| >= |mu2| by construction; on the unit circle (essential spectrum)
    // break the tie so that rho has argument in [-pi, 0], i.e. Re k >= 0.
    if (std::abs(std::abs(eig.mu1) - std::abs(eig.mu2)) <=
            1e-9 * (std::abs(eig.mu1) + std::abs(eig.mu2)) &&
        eig.mu1.imag() > 0.0) {
        std::swap(eig.mu1, eig.mu2);
        std::swap(eig.w1, eig.w2);
    }
    fd.rho_scaled = eig.mu1;
    fd.v_plus = eig.w1;
    fd.v_minus = eig.w2;

    const double ln_rho = beta * a + std::log(std::abs(fd.rho_scaled));
    const double ar = std::arg(fd.rho_scaled);
    if (sp.lambda.imag() >= 0.0) {
        fd.k = cplx(-ar, ln_rho) / a;
    } else {
        // k(lambda) = -conj(k(conj lambda)); rho(conj lambda) = conj rho(lambda).
        const cplx k_upper = cplx(-std::arg(std::conj(fd.rho_scaled)), ln_rho) / a;
        fd.k = -std::conj(k_upper);
    }
    fd.im_k = fd.k.imag();

    if (beta == 0.0) {
        const cplx d = fd.discriminant_scaled;
        fd.on_essential = std::abs(sp.lambda.imag()) < 1e-12 * (1.0 + std::abs(sp.lambda)) &&
                          std::abs(d.imag()) <= 1e-9 * (1.0 + std::abs(d)) &&
                          d.real() >= -2.0 - 1e-10 && d.real() <= 2.0 + 1e-10;
    }
    return fd;
}

namespace {

struct NodeSet {
    std::vector<double> nodes;
    std::vector<unsigned char> coarse;
};

// 2n+1 uniform nodes (coarse = every other one) union breakpoints (coarse).
NodeSet dyadic_nodes(const PeriodicPotential& pot, int n_samples) {
    const double a = pot.period();
    const int fine = 2 * n_samples;
    std::vector<std::pair<double, unsigned char>> pts;
    pts.reserve(static_cast<std::size_t>(fine) + 1 + pot.interior_breakpoints().size());
    for (int j = 0; j <= fine; ++j) {
        const double x = (j == fine) ? a : a * static_cast<double>(j) / static_cast<double>(fine);
        pts.emplace_back(x, static_cast<unsigned char>(j % 2 == 0));
    }
    for (double b : pot.interior_breakpoints()) pts.emplace_back(b, 1);
    std::sort(pts.begin(), pts.end());
    NodeSet ns;
    const double merge_tol = 1e-12 * a;
    for (const auto& [x, c] : pts) {
        if (!ns.nodes.empty() && x - ns.nodes.back() <= merge_tol) {
            ns.coarse.back() |= c;
            continue;
        }
        ns.nodes.push_back(x);
        ns.coarse.push_back(c);
    }
    return ns;
}

struct SupPair {
    double sup;
    double refine_residual;
};

SupPair refined_sup(const std::vector<Vec2>& phi, const std::vector<unsigned char>& coarse) {
    double sup_c = 0.0, sup_f = 0.0;
    for (std::size_t j = 0; j < phi.size(); ++j) {
        const double m = phi[j].norm();
        sup_f = std::max(sup_f, m);
        if (coarse[j]) sup_c = std::max(sup_c, m);
    }
    const double d = std::max(sup_f - sup_c, 0.0);
    return {sup_f + d / 3.0, d};
}

std::vector<Vec2> phi_samples(const Trajectory& tr, const Vec2& v, cplx exponent_rate) {
    std::vector<Vec2> out(tr.nodes.size());
    for (std::size_t j = 0; j < tr.nodes.size(); ++j)
        out[j] = std::exp(exponent_rate * tr.nodes[j]) * tr.matrices[j].apply(v);
    return out;
}

}  // namespace

PeriodicParts periodic_parts(const SpectralPoint& sp, const FloquetData& fd, int n_samples,
                             MinusPath path, const OdeTolerances& tol) {
    if (n_samples < 1) throw std::invalid_argument("periodic_parts: n_samples must be >= 1");
    const double a = fd.period;
    const double beta = fd.scale;
    const cplx i{0.0, 1.0};

    NodeSet ns = dyadic_nodes(sp.potential, n_samples);
    Trajectory tr = trajectory_on(sp, ns.nodes, beta, tol);

    PeriodicParts pp;
    pp.nodes = ns.nodes;
    // phi_+(x) = e^{ikx} Phi(x) v_+ = e^{(ik + beta) x} [e^{-beta x} Phi(x)] v_+;
    // the exponent has real part (beta - Im k) x, always moderate.
    pp.phi_plus = phi_samples(tr, fd.v_plus, i * fd.k + beta);

    pp.minus_by_reflection = use_reflection(fd, path);
    if (!pp.minus_by_reflection) {
        pp.phi_minus = phi_samples(tr, fd.v_minus, -i * fd.k + beta);
    } else {
        // phi_-(x) = sigma_3 phi~_+(a - x) for the reflected potential
        // q~(y) = q(a - y), whose rho-eigenvector is v~_+ = sigma_3 v_-.
        const PeriodicPotential refl = sp.potential.reflected();
        const SpectralPoint spr{refl, sp.mass, sp.lambda};
        const std::size_t n = ns.nodes.size();
        std::vector<double> rnodes(n);
        for (std::size_t j = 0; j < n; ++j) rnodes[j] = a - ns.nodes[n - 1 - j];
        rnodes.front() = 0.0;
        rnodes.back() = a;
        Trajectory rtr = trajectory_on(spr, std::move(rnodes), beta, tol);
        const std::vector<Vec2> phi_tilde = phi_samples(rtr, sigma3(fd.v_minus), i * fd.k + beta);
        pp.phi_minus.resize(n);
        for (std::size_t j = 0; j < n; ++j) pp.phi_minus[j] = sigma3(phi_tilde[n - 1 - j]);
    }

    const SupPair sp_plus = refined_sup(pp.phi_plus, ns.coarse);
    const SupPair sp_minus = refined_sup(pp.phi_minus, ns.coarse);
    pp.sup_plus = sp_plus.sup;
    pp.sup_minus = sp_minus.sup;
    pp.sup_refine_residual_plus = sp_plus.refine_residual;
    pp.sup_refine_residual_minus = sp_minus.refine_residual;
    pp.gamma_plus = pp.phi_plus.front().norm() / pp.sup_plus;
    pp.gamma_minus = pp.phi_minus.front().norm() / pp.sup_minus;
    pp.periodicity_residual_plus = (pp.phi_plus.back() - pp.phi_plus.front()).norm();
    pp.periodicity_residual_minus = (pp.phi_minus.back() - pp.phi_minus.front()).norm();
    pp.periodicity_warning = pp.periodicity_residual_plus > 1e-6 * pp.sup_plus ||
                             pp.periodicity_residual_minus > 1e-6 * pp.sup_minus;
    return pp;
}

double c_lambda(const PeriodicParts& pp, const FloquetData& fd) {
    return pp.sup_plus * pp.sup_minus / std::abs(column_det(fd.v_plus, fd.v_minus));
}

Vec2 phi_plus_at(const SpectralPoint& sp, const FloquetData& fd, double x,
                 const OdeTolerances& tol) {
    const double xr = reduce_mod(x, fd.period);
    const C2 psi = propagate_interval(sp, 0.0, xr, fd.scale, tol);
    const cplx i{0.0, 1.0};
    return std::exp((i * fd.k + fd.scale) * xr) * psi.apply(fd.v_plus);
}

Vec2 phi_minus_at(const SpectralPoint& sp, const FloquetData& fd, double x, MinusPath path,
                  const OdeTolerances& tol) {
    const double xr = reduce_mod(x, fd.period);
    const cplx i{0.0, 1.0};
    if (!use_reflection(fd, path)) {
        const C2 psi = propagate_interval(sp, 0.0, xr, fd.scale, tol);
        return std::exp((-i * fd.k + fd.scale) * xr) * psi.apply(fd.v_minus);
    }
    const PeriodicPotential refl = sp.potential.reflected();
    const SpectralPoint spr{refl, sp.mass, sp.lambda};
    const double y = fd.period - xr;
    const C2 psi = propagate_interval(spr, 0.0, y, fd.scale, tol);
    return sigma3(std::exp((i * fd.k + fd.scale) * y) * psi.apply(sigma3(fd.v_minus)));
}

}  // namespace pdirac
