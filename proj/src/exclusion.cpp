#include "pdirac/exclusion.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include "pdirac/errors.hpp"
#include "pdirac/format.hpp"
#include "pdirac/parallel.hpp"

namespace pdirac {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double gamma_from(const FloquetData& fd) {
    return std::min(std::abs(column_det(fd.v_plus, fd.v_minus)) /
                        (fd.v_plus.norm() * fd.v_minus.norm()),
                    1.0);
}

double reduce_mod(double x, double a) {
    double r = x - a * std::floor(x / a);
    if (r >= a) r -= a;
    if (r < 0.0) r = 0.0;
    return r;
}

}  // namespace

double threshold_F(const FloquetData& fd, const PeriodicParts& pp, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("threshold_F: p must be >= 1");
    if (fd.on_essential)
        throw EssentialSpectrumError("threshold_F: lambda on the essential spectrum",
                                     fd.lambda);
    const double f1 = gamma_from(fd) * pp.gamma_plus * pp.gamma_minus;
    if (p == 1.0) return f1;
    const double q = (p - 1.0) / p;
    return f1 * std::pow(fd.im_k, q) * std::pow(p / (2.0 * (p - 1.0)), q);
}

GreensEval greens_kernel(const SpectralPoint& sp, const FloquetData& fd, double x, double t) {
    if (x == t) throw std::invalid_argument("greens_kernel: evaluation on the diagonal x = t");
    if (fd.on_essential)
        throw EssentialSpectrumError("greens_kernel: lambda not in the resolvent set",
                                     fd.lambda);
    const double a = fd.period;
    const cplx i{0.0, 1.0};
    const double dist = std::abs(t - x);

    const Vec2 fa = (t > x) ? phi_plus_at(sp, fd, reduce_mod(x, a))
                            : phi_minus_at(sp, fd, reduce_mod(x, a));
    const Vec2 fb = (t > x) ? phi_minus_at(sp, fd, reduce_mod(t, a))
                            : phi_plus_at(sp, fd, reduce_mod(t, a));
    const cplx w = column_det(fd.v_plus, fd.v_minus);
    const cplx pref = -std::exp(i * fd.k * dist) / w;

    GreensEval out;
    out.x = x;
    out.t = t;
    out.lambda = fd.lambda;
    out.g = C2{pref * fa.u * fb.u, pref * fa.u * fb.v, pref * fa.v * fb.u, pref * fa.v * fb.v};
    out.frob = frobenius_norm(out.g);
    out.frob_closed_form = std::exp(-fd.im_k * dist) * fa.norm() * fb.norm() / std::abs(w);
    return out;
}

double resolvent_bound(const FloquetData& fd, const PeriodicParts& pp, double r) {
    if (!(r > 1.0 && r <= 2.0))
        throw std::invalid_argument("resolvent_bound: r must lie in (1, 2]");
    if (fd.on_essential || !(fd.im_k > 0.0))
        throw EssentialSpectrumError("resolvent_bound: Im k = 0 on the essential spectrum",
                                     fd.lambda);
    const double rp = 1.0 / (1.0 - 1.0 / r);
    return c_lambda(pp, fd) * std::pow(4.0 / (rp * fd.im_k), 2.0 / rp);
}

double ExclusionGrid::re_center(int i) const {
    return re_lo + (re_hi - re_lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(nx);
}

double ExclusionGrid::im_center(int j) const {
    return im_lo + (im_hi - im_lo) * (static_cast<double>(j) + 0.5) / static_cast<double>(ny);
}

ExclusionGrid exclusion_map(const PeriodicPotential& pot, double mass, double re_lo,
                            double re_hi, double im_lo, double im_hi, int nx, int ny, double p,
                            const MapOptions& opt) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("exclusion_map: nx, ny must be >= 2");
    if (!(re_hi > re_lo) || !(im_hi > im_lo))
        throw std::invalid_argument("exclusion_map: empty window");
    if (!(p >= 1.0)) throw std::invalid_argument("exclusion_map: p must be >= 1");

    ExclusionGrid grid;
    grid.re_lo = re_lo;
    grid.re_hi = re_hi;
    grid.im_lo = im_lo;
    grid.im_hi = im_hi;
    grid.nx = nx;
    grid.ny = ny;
    grid.p = p;
    grid.cells.resize(static_cast<std::size_t>(nx) * ny);

    parallel_for(grid.cells.size(), opt.workers, [&](std::size_t idx) {
        const int i = static_cast<int>(idx % static_cast<std::size_t>(nx));
        const int j = static_cast<int>(idx / static_cast<std::size_t>(nx));
        const cplx lambda(grid.re_center(i), grid.im_center(j));
        const SpectralPoint sp{pot, mass, lambda};
        CellValue cell;
        try {
            const FloquetData fd = floquet_data(sp, opt.tol);
            const PeriodicParts pp =
                periodic_parts(sp, fd, opt.phi_nodes, MinusPath::Auto, opt.tol);
            cell.im_k = fd.im_k;
            cell.gamma = gamma_from(fd);
            cell.gamma_plus = pp.gamma_plus;
            cell.gamma_minus = pp.gamma_minus;
            if (fd.on_essential) {
                cell.flag = CellFlag::Essential;
                cell.f_p = kNaN;
            } else {
                cell.flag = CellFlag::Ok;
                cell.f_p = threshold_F(fd, pp, p);
            }
        } catch (const DegenerateMultiplierError&) {
            cell.flag = CellFlag::Degenerate;
            cell.f_p = cell.gamma = cell.gamma_plus = cell.gamma_minus = kNaN;
            cell.im_k = imk_formula(monodromy(sp).trace(), pot.period());
        } catch (...) {
            cell.flag = CellFlag::Error;
            cell.f_p = cell.im_k = cell.gamma = cell.gamma_plus = cell.gamma_minus = kNaN;
        }
        grid.cells[idx] = cell;
    });
    return grid;
}

namespace {

using P = std::array<double, 2>;

struct Segment {
    P a, b;
};

P interp(double xa, double ya, double va, double xb, double yb, double vb, double level) {
    double t = (vb != va) ? (level - va) / (vb - va) : 0.5;
    t = std::clamp(t, 0.0, 1.0);
    return {xa + t * (xb - xa), ya + t * (yb - ya)};
}

}  // namespace

std::vector<Polyline> extract_contour(const ExclusionGrid& grid, double level) {
    std::vector<Segment> segs;
    for (int j = 0; j + 1 < grid.ny; ++j) {
        for (int i = 0; i + 1 < grid.nx; ++i) {
            const double v00 = grid.at(i, j).f_p, v10 = grid.at(i + 1, j).f_p;
            const double v01 = grid.at(i, j + 1).f_p, v11 = grid.at(i + 1, j + 1).f_p;
            if (!std::isfinite(v00) || !std::isfinite(v10) || !std::isfinite(v01) ||
                !std::isfinite(v11))
                continue;
            const double x0 = grid.re_center(i), x1 = grid.re_center(i + 1);
            const double y0 = grid.im_center(j), y1 = grid.im_center(j + 1);
            int mask = 0;
            if (v00 >= level) mask |= 1;
            if (v10 >= level) mask |= 2;
            if (v11 >= level) mask |= 4;
            if (v01 >= level) mask |= 8;
            if (mask == 0 || mask == 15) continue;

            const P bottom = interp(x0, y0, v00, x1, y0, v10, level);
            const P right = interp(x1, y0, v10, x1, y1, v11, level);
            const P top = interp(x0, y1, v01, x1, y1, v11, level);
            const P left = interp(x0, y0, v00, x0, y1, v01, level);

            auto emit = [&](P a, P b) { segs.push_back({a, b}); };
            switch (mask) {
                case 1: case 14: emit(left, bottom); break;
                case 2: case 13: emit(bottom, right); break;
                case 3: case 12: emit(left, right); break;
                case 4: case 11: emit(right, top); break;
                case 6: case 9: emit(bottom, top); break;
                case 7: case 8: emit(left, top); break;
                case 5: case 10: {
                    // Saddle: resolve by the bilinear value at the square center.
                    const double center = 0.25 * (v00 + v10 + v01 + v11);
                    const bool center_in = center >= level;
                    if ((mask == 5) == center_in) {
                        emit(left, top);
                        emit(bottom, right);
                    } else {
                        emit(left, bottom);
                        emit(right, top);
                    }
                    break;
                }
                default: break;
            }
        }
    }

    // Stitch segments into polylines; shared square edges produce bitwise
    // identical endpoints, so exact keys are reliable.
    std::map<P, std::vector<std::size_t>> at_point;
    for (std::size_t s = 0; s < segs.size(); ++s) {
        at_point[segs[s].a].push_back(s);
        at_point[segs[s].b].push_back(s);
    }
    std::vector<char> used(segs.size(), 0);
    std::vector<Polyline> out;
    auto next_unused = [&](const P& p, std::size_t self) -> std::size_t {
        auto it = at_point.find(p);
        if (it == at_point.end()) return segs.size();
        for (std::size_t s : it->second)
            if (!used[s] && s != self) return s;
        return segs.size();
    };
    for (std::size_t s0 = 0; s0 < segs.size(); ++s0) {
        if (used[s0]) continue;
        used[s0] = 1;
        std::deque<P> chain{segs[s0].a, segs[s0].b};
        for (;;) {  // extend forward
            const std::size_t s = next_unused(chain.back(), segs.size());
            if (s == segs.size()) break;
            used[s] = 1;
            chain.push_back(segs[s].a == chain.back() ? segs[s].b : segs[s].a);
        }
        for (;;) {  // extend backward
            const std::size_t s = next_unused(chain.front(), segs.size());
            if (s == segs.size()) break;
            used[s] = 1;
            chain.push_front(segs[s].a == chain.front() ? segs[s].b : segs[s].a);
        }
        out.emplace_back(chain.begin(), chain.end());
    }
    return out;
}

namespace {

const char* flag_name(CellFlag f) {
    switch (f) {
        case CellFlag::Ok: return "ok";
        case CellFlag::Essential: return "essential";
        case CellFlag::Degenerate: return "degenerate";
        case CellFlag::Error: return "error";
    }
    return "error";
}

}  // namespace

void write_grid_csv(std::ostream& os, const ExclusionGrid& grid) {
    os << "re_lambda,im_lambda,F_p,Im_k,Gamma,gamma_plus,gamma_minus,flag\n";
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const CellValue& c = grid.at(i, j);
            os << fmt17(grid.re_center(i)) << ',' << fmt17(grid.im_center(j)) << ','
               << fmt17(c.f_p) << ',' << fmt17(c.im_k) << ',' << fmt17(c.gamma) << ','
               << fmt17(c.gamma_plus) << ',' << fmt17(c.gamma_minus) << ','
               << flag_name(c.flag) << '\n';
        }
    }
}

void write_contour_csv(std::ostream& os, const std::vector<Polyline>& contours) {
    os << "contour_id,vertex_index,re,im\n";
    for (std::size_t c = 0; c < contours.size(); ++c)
        for (std::size_t v = 0; v < contours[c].size(); ++v)
            os << c << ',' << v << ',' << fmt17(contours[c][v][0]) << ','
               << fmt17(contours[c][v][1]) << '\n';
}

void write_contour_svg(std::ostream& os, const ExclusionGrid& grid,
                       const std::vector<Polyline>& contours,
                       const std::vector<Interval>& bands) {
    const double w = 800.0;
    const double h = w * (grid.im_hi - grid.im_lo) / (grid.re_hi - grid.re_lo);
    auto px = [&](double re) { return (re - grid.re_lo) / (grid.re_hi - grid.re_lo) * w; };
    auto py = [&](double im) { return h - (im - grid.im_lo) / (grid.im_hi - grid.im_lo) * h; };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (grid.im_lo < 0.0 && grid.im_hi > 0.0) {
        os << "<line x1=\"0\" y1=\"" << py(0.0) << "\" x2=\"" << w << "\" y2=\"" << py(0.0)
           << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
        for (const auto& b : bands)
            os << "<line x1=\"" << px(b.lo) << "\" y1=\"" << py(0.0) << "\" x2=\"" << px(b.hi)
               << "\" y2=\"" << py(0.0) << "\" stroke=\"black\" stroke-width=\"4\"/>\n";
    }
    for (const auto& poly : contours) {
        os << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" points=\"";
        for (const auto& pt : poly) os << px(pt[0]) << ',' << py(pt[1]) << ' ';
        os << "\"/>\n";
    }
    os << "</svg>\n";
}

}  // namespace pdirac
