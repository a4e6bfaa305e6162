#include "pdirac/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pdirac/errors.hpp"

namespace pdirac {

namespace {

// sinh(z)/z, stable at z -> 0.
cplx sinhc(cplx z) {
    if (std::abs(z) < 1e-4) {
        const cplx z2 = z * z;
        return 1.0 + z2 / 6.0 * (1.0 + z2 / 20.0);
    }
    return std::sinh(z) / z;
}

cplx sqrt_re_pos(cplx z) {
    cplx w = std::sqrt(z);
    if (w.real() < 0.0 || (w.real() == 0.0 && w.imag() < 0.0)) w = -w;
    return w;
}

// e^{-s h} [[cos th, sin th], [-sin th, cos th]], overflow-safe.  th may have
// a large imaginary part comparable to s h.
C2 scaled_rotation(cplx theta, double sh) {
    const cplx i{0.0, 1.0};
    const cplx ep = std::exp(i * theta - sh);   // magnitude e^{-Im th - s h}
    const cplx em = std::exp(-i * theta - sh);  // magnitude e^{+Im th - s h}
    const cplx c = 0.5 * (ep + em);
    const cplx s = cplx(0.0, -0.5) * (ep - em);
    return {c, s, -s, c};
}

}  // namespace

C2 constant_step(cplx p_coeff, cplx n_coeff, double h) {
    const cplx w = std::sqrt(p_coeff * n_coeff);
    const cplx z = h * w;
    const cplx c = std::cosh(z);
    const cplx hs = h * sinhc(z);  // = sinh(h w)/w
    return {c, hs * p_coeff, hs * n_coeff, c};
}

C2 scaled_constant_step(cplx p_coeff, cplx n_coeff, double h, double scale) {
    const double sh = scale * h;
    if (sh <= 20.0) {
        const double f = std::exp(-sh);
        C2 m = constant_step(p_coeff, n_coeff, h);
        return {f * m.a11, f * m.a12, f * m.a21, f * m.a22};
    }
    // cosh/sinh assembled from e^{h(w - s)} and e^{-h(w + s)}; with
    // Re w ~ |Im lambda| = s both exponents stay moderate.
    const cplx w = sqrt_re_pos(p_coeff * n_coeff);
    const cplx ep = std::exp(h * w - sh);
    const cplx em = std::exp(-h * w - sh);
    const cplx c = 0.5 * (ep + em);
    const cplx s_over_w = 0.5 * (ep - em) / w;
    return {c, s_over_w * p_coeff, s_over_w * n_coeff, c};
}

namespace {

// ---------------------------------------------------------------------------
// Adaptive Dormand-Prince RK5(4) for Y' = B(x) Y,
// B(x) = [[-s, m - q(x) + lambda], [m + q(x) - lambda, -s]].
// ---------------------------------------------------------------------------

struct Generator {
    const PeriodicPotential& pot;
    double mass;
    cplx lambda;
    double scale;

    C2 eval(double x, const C2& y) const {
        const double qv = pot.eval(x);
        const cplx pc = mass - qv + lambda;
        const cplx nc = mass + qv - lambda;
        return {pc * y.a21 - scale * y.a11, pc * y.a22 - scale * y.a12,
                nc * y.a11 - scale * y.a21, nc * y.a12 - scale * y.a22};
    }
};

C2 axpy(const C2& y, double h, const C2& k) {
    return {y.a11 + h * k.a11, y.a12 + h * k.a12, y.a21 + h * k.a21, y.a22 + h * k.a22};
}

double error_norm(const C2& err, const C2& y, const C2& y5, const OdeTolerances& tol) {
    auto comp = [&](cplx e, cplx a, cplx b) {
        const double sc = tol.absolute + tol.relative * std::max(std::abs(a), std::abs(b));
        const double r = std::abs(e) / sc;
        return r * r;
    };
    return std::sqrt(0.25 * (comp(err.a11, y.a11, y5.a11) + comp(err.a12, y.a12, y5.a12) +
                             comp(err.a21, y.a21, y5.a21) + comp(err.a22, y.a22, y5.a22)));
}

void rk_advance(const Generator& f, double x0, double x1, C2& y, const OdeTolerances& tol) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

    if (x1 <= x0) return;
    const double gen_scale =
        std::abs(f.lambda) + f.mass + f.pot.sup_abs() + std::abs(f.scale) + 1.0;
    if (x1 - x0 < 1e-13 * (1.0 + std::abs(x1))) {
        // Span too small for error control; one explicit step is exact enough.
        const C2 k = f.eval(x0, y);
        y = axpy(y, x1 - x0, k);
        return;
    }
    double h = std::min(x1 - x0, 0.1 / gen_scale);
    double x = x0;
    C2 k1 = f.eval(x, y);
    while (x < x1) {
        h = std::min(h, x1 - x);
        if (h < 1e-13 * (1.0 + std::abs(x)))
            throw StepSizeUnderflow("propagator: adaptive step size underflow", f.lambda);

        const C2 k2 = f.eval(x + c2 * h, axpy(y, h * a21, k1));
        C2 t = axpy(axpy(y, h * a31, k1), h * a32, k2);
        const C2 k3 = f.eval(x + c3 * h, t);
        t = axpy(axpy(axpy(y, h * a41, k1), h * a42, k2), h * a43, k3);
        const C2 k4 = f.eval(x + c4 * h, t);
        t = axpy(axpy(axpy(axpy(y, h * a51, k1), h * a52, k2), h * a53, k3), h * a54, k4);
        const C2 k5 = f.eval(x + c5 * h, t);
        t = axpy(axpy(axpy(axpy(axpy(y, h * a61, k1), h * a62, k2), h * a63, k3), h * a64, k4),
                 h * a65, k5);
        const C2 k6 = f.eval(x + h, t);
        C2 y5 = axpy(axpy(axpy(axpy(axpy(y, h * b1, k1), h * b3, k3), h * b4, k4), h * b5, k5),
                     h * b6, k6);
        const C2 k7 = f.eval(x + h, y5);
        C2 err = axpy(axpy(axpy(axpy(axpy(axpy(C2{}, h * e1, k1), h * e3, k3), h * e4, k4),
                               h * e5, k5),
                          h * e6, k6),
                      h * e7, k7);
        const double en = error_norm(err, y, y5, tol);
        if (en <= 1.0) {
            x += h;
            y = y5;
            k1 = k7;  // FSAL
        }
        const double factor = (en > 0.0) ? 0.9 * std::pow(en, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }
}

// Breakpoints of the periodized potential inside (x0, x1).
std::vector<double> breaks_between(const PeriodicPotential& pot, double x0, double x1) {
    std::vector<double> out;
    const double a = pot.period();
    const auto& ib = pot.interior_breakpoints();
    const long k0 = static_cast<long>(std::floor(x0 / a)) - 1;
    const long k1 = static_cast<long>(std::floor(x1 / a)) + 1;
    for (long k = k0; k <= k1; ++k) {
        const double base = static_cast<double>(k) * a;
        if (k != 0) {  // period boundary itself is a potential breakpoint
            const double b = base;
            if (b > x0 && b < x1) out.push_back(b);
        }
        for (double br : ib) {
            const double b = base + br;
            if (b > x0 && b < x1) out.push_back(b);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

C2 propagate_interval(const SpectralPoint& sp, double x0, double x1, double scale,
                      const OdeTolerances& tol) {
    if (x1 < x0) throw std::invalid_argument("propagate_interval: x1 < x0");
    if (!(sp.mass >= 0.0)) throw std::invalid_argument("propagate_interval: mass must be >= 0");
    if (x1 == x0) return C2::identity();
    const PeriodicPotential& pot = sp.potential;

    if (sp.mass == 0.0) {
        // Generators (lambda - q(x)) J commute; the transfer matrix is the
        // rotation by the exact phase integral.
        const cplx theta = sp.lambda * (x1 - x0) - (pot.antiderivative_periodized(x1) -
                                                    pot.antiderivative_periodized(x0));
        return scaled_rotation(theta, scale * (x1 - x0));
    }

    std::vector<double> cuts = breaks_between(pot, x0, x1);
    cuts.insert(cuts.begin(), x0);
    cuts.push_back(x1);

    C2 acc = C2::identity();
    if (pot.exact_stepping()) {
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double h = cuts[i + 1] - cuts[i];
            if (h <= 0.0) continue;
            const double qv = pot.eval(0.5 * (cuts[i] + cuts[i + 1]));
            const C2 step = scaled_constant_step(sp.mass - qv + sp.lambda,
                                                 sp.mass + qv - sp.lambda, h, scale);
            acc = step * acc;
        }
        return acc;
    }

    const Generator gen{pot, sp.mass, sp.lambda, scale};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        rk_advance(gen, cuts[i], cuts[i + 1], acc, tol);
    return acc;
}

C2 fundamental_system(const SpectralPoint& sp, double x) {
    if (x < 0.0 || x > sp.potential.period() * (1.0 + 1e-12))
        throw std::invalid_argument("fundamental_system: x outside [0, period]");
    return propagate_interval(sp, 0.0, std::min(x, sp.potential.period()), 0.0);
}

C2 fundamental_system_scaled(const SpectralPoint& sp, double x, double scale,
                             const OdeTolerances& tol) {
    if (x < 0.0 || x > sp.potential.period() * (1.0 + 1e-12))
        throw std::invalid_argument("fundamental_system: x outside [0, period]");
    return propagate_interval(sp, 0.0, std::min(x, sp.potential.period()), scale, tol);
}

C2 monodromy(const SpectralPoint& sp) { return fundamental_system(sp, sp.potential.period()); }

double Trajectory::max_det_drift() const {
    double worst = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double sx = scale * nodes[j];
        if (sx > 300.0) return std::numeric_limits<double>::quiet_NaN();
        const cplx d = std::exp(cplx(2.0 * sx, 0.0)) * matrices[j].det();
        worst = std::max(worst, std::abs(d - 1.0));
    }
    return worst;
}

Trajectory trajectory(const SpectralPoint& sp, int n_nodes, double scale,
                      const OdeTolerances& tol) {
    if (n_nodes < 2) throw std::invalid_argument("trajectory: need at least 2 nodes");
    const double a = sp.potential.period();
    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(n_nodes) +
                  sp.potential.interior_breakpoints().size());
    for (int j = 0; j < n_nodes; ++j)
        nodes.push_back(a * static_cast<double>(j) / static_cast<double>(n_nodes - 1));
    nodes.back() = a;
    for (double b : sp.potential.interior_breakpoints()) nodes.push_back(b);
    std::sort(nodes.begin(), nodes.end());
    const double merge_tol = 1e-12 * a;
    std::vector<double> merged;
    merged.reserve(nodes.size());
    for (double x : nodes)
        if (merged.empty() || x - merged.back() > merge_tol) merged.push_back(x);
    merged.back() = a;
    return trajectory_on(sp, std::move(merged), scale, tol);
}

Trajectory trajectory_on(const SpectralPoint& sp, std::vector<double> nodes, double scale,
                         const OdeTolerances& tol) {
    if (nodes.empty() || nodes.front() != 0.0)
        throw std::invalid_argument("trajectory: nodes must start at 0");
    for (std::size_t j = 0; j + 1 < nodes.size(); ++j)
        if (!(nodes[j] < nodes[j + 1]))
            throw std::invalid_argument("trajectory: nodes must be strictly increasing");

    Trajectory tr;
    tr.lambda = sp.lambda;
    tr.scale = scale;
    tr.nodes = std::move(nodes);
    tr.matrices.resize(tr.nodes.size());
    tr.coarse.assign(tr.nodes.size(), 1);
    tr.matrices[0] = C2::identity();
    for (std::size_t j = 1; j < tr.nodes.size(); ++j) {
        const C2 step = propagate_interval(sp, tr.nodes[j - 1], tr.nodes[j], scale, tol);
        tr.matrices[j] = step * tr.matrices[j - 1];
    }
    return tr;
}

double default_scale(const SpectralPoint& sp) {
    const double im = std::abs(sp.lambda.imag());
    return (im * sp.potential.period() > 30.0) ? im : 0.0;
}

}  // namespace pdirac
