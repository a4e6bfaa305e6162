#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "pdirac/bands.hpp"
#include "pdirac/floquet.hpp"

namespace pdirac {

// Eigenvalue-exclusion threshold F_p(lambda):
//   p = 1:  Gamma(M) gamma_+ gamma_-
//   p > 1:  same * (Im k)^((p-1)/p) * (p / (2(p-1)))^((p-1)/p)
// ||V||_p < F_p(lambda) certifies lambda is not an eigenvalue of H0 + V.
// Throws EssentialSpectrumError on the essential spectrum.
double threshold_F(const FloquetData& fd, const PeriodicParts& pp, double p);

struct GreensEval {
    double x = 0.0, t = 0.0;
    cplx lambda;
    C2 g;
    double frob = 0.0;              // ||G||_F of the assembled matrix
    double frob_closed_form = 0.0;  // e^{-Im k |t-x|} |phi(x)| |phi(t)| / |det(v+,v-)|
};

// G(x, t, lambda) = -e^{ik|t-x|}/det(v+,v-) * phi_pm(x) phi_mp(t)^T with the
// sign by t - x; periodic parts evaluated on demand (exact reduction mod a).
GreensEval greens_kernel(const SpectralPoint& sp, const FloquetData& fd, double x, double t);

// ||R_r(lambda)|| <= C(lambda) (4 / (r' Im k))^(2/r'), r in (1, 2].
double resolvent_bound(const FloquetData& fd, const PeriodicParts& pp, double r);

enum class CellFlag { Ok, Essential, Degenerate, Error };

struct CellValue {
    double f_p = 0.0;
    double im_k = 0.0;
    double gamma = 0.0;
    double gamma_plus = 0.0;
    double gamma_minus = 0.0;
    CellFlag flag = CellFlag::Ok;
};

struct ExclusionGrid {
    double re_lo = 0.0, re_hi = 0.0, im_lo = 0.0, im_hi = 0.0;
    int nx = 0, ny = 0;
    double p = 1.0;
    std::vector<CellValue> cells;  // row-major, index j * nx + i

    double re_center(int i) const;
    double im_center(int j) const;
    const CellValue& at(int i, int j) const { return cells[static_cast<std::size_t>(j) * nx + i]; }
};

struct MapOptions {
    int phi_nodes = 2048;
    int workers = 1;
    OdeTolerances tol{};
};

// F_p at every cell center; per-cell failures become flags, never abort the
// sweep.  Deterministic for any worker count.
ExclusionGrid exclusion_map(const PeriodicPotential& pot, double mass, double re_lo,
                            double re_hi, double im_lo, double im_hi, int nx, int ny, double p,
                            const MapOptions& opt = {});

using Polyline = std::vector<std::array<double, 2>>;

// Marching squares over the cell-center lattice at the given level; squares
// touching non-finite cells are skipped; saddles resolved by the bilinear
// center value.
std::vector<Polyline> extract_contour(const ExclusionGrid& grid, double level);

// CSV: re_lambda, im_lambda, F_p, Im_k, Gamma, gamma_plus, gamma_minus, flag.
void write_grid_csv(std::ostream& os, const ExclusionGrid& grid);
// CSV: contour_id, vertex_index, re, im.
void write_contour_csv(std::ostream& os, const std::vector<Polyline>& contours);
// Minimal SVG: contour polylines plus the real-axis bands when supplied.
void write_contour_svg(std::ostream& os, const ExclusionGrid& grid,
                       const std::vector<Polyline>& contours,
                       const std::vector<Interval>& bands = {});

}  // namespace pdirac
