#include "pdirac/bands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>

#include "pdirac/errors.hpp"
#include "pdirac/format.hpp"

namespace pdirac {

namespace {

void require_real(const SpectralPoint& sp, const char* who) {
    if (std::abs(sp.lambda.imag()) > 1e-12 * (1.0 + std::abs(sp.lambda)))
        throw std::invalid_argument(std::string(who) + ": lambda must be real");
}

double discriminant_at(const PeriodicPotential& pot, double mass, double lambda) {
    return monodromy(SpectralPoint{pot, mass, lambda}).trace().real();
}

}  // namespace

IIntegrals i_integrals(const SpectralPoint& sp, int refine) {
    require_real(sp, "i_integrals");
    const PeriodicPotential& pot = sp.potential;
    const double a = pot.period();

    // Per-piece composite Simpson; node density grows with the phase rate so
    // the relative error stays near 1e-8 up to |lambda| ~ 50.
    std::vector<double> bounds{0.0};
    for (double b : pot.interior_breakpoints()) bounds.push_back(b);
    bounds.push_back(a);
    const double rate = std::abs(sp.lambda) + sp.mass + pot.sup_abs() + 1.0;
    const double density =
        std::max(4096.0, 64.0 * a * rate) * static_cast<double>(refine) / a;

    std::vector<double> nodes;
    std::vector<std::size_t> piece_start;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        const double len = bounds[i + 1] - bounds[i];
        std::size_t n = static_cast<std::size_t>(std::ceil(len * density));
        n = std::max<std::size_t>(n + (n % 2), 8);
        piece_start.push_back(nodes.size());
        for (std::size_t j = 0; j < n; ++j)
            nodes.push_back(bounds[i] + len * static_cast<double>(j) / static_cast<double>(n));
    }
    piece_start.push_back(nodes.size());
    nodes.push_back(a);

    const Trajectory tr = trajectory_on(sp, nodes);
    cplx i1{}, i2{}, i3{};
    for (std::size_t p = 0; p + 1 < piece_start.size(); ++p) {
        const std::size_t lo = piece_start[p];
        const std::size_t hi = piece_start[p + 1];
        const std::size_t n = hi - lo;
        const double h = (tr.nodes[hi] - tr.nodes[lo]) / static_cast<double>(n);
        cplx s1{}, s2{}, s3{};
        for (std::size_t j = lo; j <= hi; ++j) {
            const double w =
                (j == lo || j == hi) ? 1.0 : ((j - lo) % 2 == 1 ? 4.0 : 2.0);
            const C2& m = tr.matrices[j];
            s1 += w * (m.a11 * m.a12 + m.a21 * m.a22);
            s2 += w * (m.a12 * m.a12 + m.a22 * m.a22);
            s3 += w * (m.a11 * m.a11 + m.a21 * m.a21);
        }
        i1 += (h / 3.0) * s1;
        i2 += (h / 3.0) * s2;
        i3 += (h / 3.0) * s3;
    }
    return {i1.real(), i2.real(), i3.real()};
}

double discriminant_derivative(const SpectralPoint& sp) {
    const C2 m = monodromy(sp);
    const IIntegrals ii = i_integrals(sp);
    return (ii.i1 * (m.a11 - m.a22) + ii.i2 * m.a21 - ii.i3 * m.a12).real();
}

double mprime_check(const SpectralPoint& sp, double h) {
    require_real(sp, "mprime_check");
    const double lam = sp.lambda.real();
    if (h <= 0.0) h = 1e-5 * (1.0 + std::abs(lam));
    const PeriodicPotential& pot = sp.potential;
    const C2 mp = monodromy(SpectralPoint{pot, sp.mass, lam + h});
    const C2 mm = monodromy(SpectralPoint{pot, sp.mass, lam - h});
    const C2 cd = cplx(0.5 / h, 0.0) * (mp - mm);
    const C2 m = monodromy(sp);
    const IIntegrals ii = i_integrals(sp, 4);
    const C2 n{ii.i1, ii.i2, -ii.i3, -ii.i1};
    return frobenius_norm(cd - m * n);
}

BandEdge classify_edge(const PeriodicPotential& pot, double mass, double lambda0, int s) {
    const SpectralPoint sp{pot, mass, lambda0};
    const C2 m = monodromy(sp);
    const double dev = frobenius_norm(m - cplx(static_cast<double>(s), 0.0) * C2::identity());

    BandEdge edge;
    edge.lambda0 = lambda0;
    edge.s = s;
    const IIntegrals ii = i_integrals(sp, 2);
    edge.i1 = ii.i1;
    edge.i2 = ii.i2;
    edge.i3 = ii.i3;

    if (dev < 1e-8) {
        edge.kind = EdgeKind::FullPeriodic;
        edge.gamma_limit = 2.0 * std::sqrt(std::max(ii.i2 * ii.i3 - ii.i1 * ii.i1, 0.0)) /
                           (ii.i2 + ii.i3);
        return edge;
    }
    if (dev <= 1e-6)
        throw ClassificationAmbiguousError(
            "classify_edge: ||M - sI|| in the FullPeriodic/Jordan guard band", lambda0);

    edge.kind = EdgeKind::Jordan;
    edge.gamma_limit = 0.0;
    const double dprime =
        (ii.i1 * (m.a11 - m.a22) + ii.i2 * m.a21 - ii.i3 * m.a12).real();
    const double bc = std::max(std::abs(m.a12), std::abs(m.a21));
    edge.approach_rate = 2.0 * std::sqrt(std::abs(dprime)) / bc;
    return edge;
}

namespace {

double bisect(const std::function<double(double)>& g, double lo, double hi, double g_lo) {
    // g has opposite signs at lo and hi.
    double f_lo = g_lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= 1e-11 * (1.0 + std::abs(mid))) return mid;
        const double f_mid = g(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

BandStructure scan_bands(const PeriodicPotential& pot, double mass, double lo, double hi,
                         int n_scan) {
    if (n_scan < 100) throw std::invalid_argument("scan_bands: n_scan must be >= 100");
    if (!(hi > lo)) throw std::invalid_argument("scan_bands: empty window");

    BandStructure bs;
    bs.window_lo = lo;
    bs.window_hi = hi;

    const double step = (hi - lo) / static_cast<double>(n_scan);
    std::vector<double> grid(n_scan + 1), disc(n_scan + 1);
    for (int i = 0; i <= n_scan; ++i) {
        grid[i] = lo + step * i;
        const C2 m = monodromy(SpectralPoint{pot, mass, grid[i]});
        disc[i] = m.trace().real();
        if (std::abs(m.trace().imag()) > 1e-9 * (1.0 + std::abs(m.trace())))
            bs.warnings.push_back("discriminant has non-negligible imaginary part at lambda = " +
                                  fmt17(grid[i]));
    }

    auto disc_at = [&](double x) { return discriminant_at(pot, mass, x); };

    // Crossings of D = +2 and D = -2.  A grid sample landing exactly on the
    // level counts as a crossing only when the nearest nonzero neighbours
    // straddle it (a tangency from inside the band is a touch point instead).
    std::vector<std::pair<double, int>> roots;  // (lambda0, s)
    for (int sgn : {+1, -1}) {
        const double level = 2.0 * sgn;
        auto g = [&](double x) { return disc_at(x) - level; };
        std::vector<double> f(disc.size());
        for (std::size_t i = 0; i < disc.size(); ++i) f[i] = disc[i] - level;
        for (int i = 0; i <= n_scan; ++i) {
            if (f[i] != 0.0) continue;
            int l = i - 1, r = i + 1;
            while (l >= 0 && f[l] == 0.0) --l;
            while (r <= n_scan && f[r] == 0.0) ++r;
            if (l >= 0 && r <= n_scan && (f[l] < 0.0) != (f[r] < 0.0))
                roots.emplace_back(grid[i], sgn);
        }
        for (int i = 0; i < n_scan; ++i) {
            if (f[i] == 0.0 || f[i + 1] == 0.0) continue;
            if ((f[i] < 0.0) != (f[i + 1] < 0.0))
                roots.emplace_back(bisect(g, grid[i], grid[i + 1], f[i]), sgn);
        }
    }

    // Interior extrema reaching +-2: touch points, or micro-gaps that the
    // scan grid failed to separate.
    std::vector<std::pair<double, int>> touches;
    auto dprime_at = [&](double x) {
        return discriminant_derivative(SpectralPoint{pot, mass, x});
    };
    for (int i = 1; i < n_scan; ++i) {
        const double dl = disc[i] - disc[i - 1];
        const double dr = disc[i + 1] - disc[i];
        const bool is_max = dl > 0.0 && dr < 0.0;
        const bool is_min = dl < 0.0 && dr > 0.0;
        if (!is_max && !is_min) continue;
        const int sgn = is_max ? +1 : -1;
        const double level = 2.0 * sgn;
        if (std::abs(disc[i] - level) > 0.5) continue;
        double d_lo = dprime_at(grid[i - 1]);
        double d_hi = dprime_at(grid[i + 1]);
        if ((d_lo < 0.0) == (d_hi < 0.0)) continue;  // no derivative sign change after all
        const double lam_star = bisect(dprime_at, grid[i - 1], grid[i + 1], d_lo);
        const double d_star = disc_at(lam_star);
        if (std::abs(d_star - level) <= 1e-9) {
            touches.emplace_back(lam_star, sgn);
        } else if ((d_star - level) * sgn > 1e-9 && std::abs(disc[i - 1]) < 2.0 &&
                   std::abs(disc[i + 1]) < 2.0) {
            // The extremum pokes past the level between two in-band samples:
            // a gap narrower than the scan cell.
            bs.warnings.push_back("scan-resolution: two edges inside one scan cell near lambda = " +
                                  fmt17(lam_star));
            auto g = [&](double x) { return disc_at(x) - level; };
            roots.emplace_back(bisect(g, grid[i - 1], lam_star, disc[i - 1] - level), sgn);
            roots.emplace_back(bisect(g, lam_star, grid[i + 1], d_star - level), sgn);
        }
    }

    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](const auto& x, const auto& y) {
                                return std::abs(x.first - y.first) <=
                                       1e-9 * (1.0 + std::abs(x.first));
                            }),
                roots.end());

    // Band/gap tiling from the crossing roots; merge same-type neighbours.
    std::vector<double> bounds{lo};
    for (const auto& [x, s] : roots) bounds.push_back(x);
    bounds.push_back(hi);
    bool prev_band = false;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        if (bounds[i + 1] - bounds[i] <= 1e-12 * (1.0 + std::abs(bounds[i]))) continue;
        const double mid_d = disc_at(0.5 * (bounds[i] + bounds[i + 1]));
        const bool is_band = mid_d >= -2.0 && mid_d <= 2.0;
        auto& dst = is_band ? bs.bands : bs.gaps;
        if (!dst.empty() && prev_band == is_band && dst.back().hi == bounds[i])
            dst.back().hi = bounds[i + 1];
        else
            dst.push_back({bounds[i], bounds[i + 1]});
        prev_band = is_band;
    }

    // Classify all edges (crossings and touch points).
    std::vector<std::pair<double, int>> all = roots;
    all.insert(all.end(), touches.begin(), touches.end());
    std::sort(all.begin(), all.end());
    for (const auto& [x, s] : all) {
        try {
            BandEdge e = classify_edge(pot, mass, x, s);
            e.touch_point =
                std::any_of(touches.begin(), touches.end(), [&](const auto& t) {
                    return t.first == x;
                });
            bs.edges.push_back(e);
        } catch (const ClassificationAmbiguousError&) {
            bs.warnings.push_back("classification ambiguous at lambda = " + fmt17(x));
        }
    }
    return bs;
}

namespace {

std::string kind_name(const BandStructure& bs, double x) {
    for (const auto& e : bs.edges)
        if (std::abs(e.lambda0 - x) <= 1e-8 * (1.0 + std::abs(x)))
            return e.kind == EdgeKind::FullPeriodic ? "full_periodic" : "jordan";
    return "window";
}

double kind_gamma(const BandStructure& bs, double x) {
    for (const auto& e : bs.edges)
        if (std::abs(e.lambda0 - x) <= 1e-8 * (1.0 + std::abs(x))) return e.gamma_limit;
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

void write_band_csv(std::ostream& os, const BandStructure& bs) {
    os << "band_index,lambda_lo,lambda_hi,edge_kind_lo,edge_kind_hi,gamma_limit_lo,gamma_limit_"
          "hi\n";
    for (std::size_t i = 0; i < bs.bands.size(); ++i) {
        const auto& b = bs.bands[i];
        os << i << ',' << fmt17(b.lo) << ',' << fmt17(b.hi) << ',' << kind_name(bs, b.lo) << ','
           << kind_name(bs, b.hi) << ',' << fmt17(kind_gamma(bs, b.lo)) << ','
           << fmt17(kind_gamma(bs, b.hi)) << '\n';
    }
}

}  // namespace pdirac
