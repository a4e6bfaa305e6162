#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pdirac/propagator.hpp"

namespace pdirac {

enum class EdgeKind { FullPeriodic, Jordan };

// A real point lambda0 with D(lambda0) = 2s.  FullPeriodic means M = sI (a
// touch point where two instability intervals meet); Jordan means the
// eigenvalue +-1 has geometric multiplicity 1 (a band end-point).
struct BandEdge {
    double lambda0 = 0.0;
    int s = 1;
    EdgeKind kind = EdgeKind::Jordan;
    // lim Gamma(M(lambda)) = 2 sqrt(I2 I3 - I1^2) / (I2 + I3) for FullPeriodic,
    // 0 for Jordan.
    double gamma_limit = 0.0;
    double i1 = 0.0, i2 = 0.0, i3 = 0.0;
    // Jordan edges: K with Gamma(M(lambda0 + t)) <= K sqrt|t| asymptotically,
    // K = 2 sqrt|D'(lambda0)| / max(|b|, |c|).
    double approach_rate = 0.0;
    bool touch_point = false;  // found as an interior extremum, not a crossing
};

struct Interval {
    double lo = 0.0, hi = 0.0;
};

struct BandStructure {
    double window_lo = 0.0, window_hi = 0.0;
    std::vector<Interval> bands, gaps;
    std::vector<BandEdge> edges;  // crossings and touch points, sorted by lambda0
    std::vector<std::string> warnings;
};

struct IIntegrals {
    double i1 = 0.0, i2 = 0.0, i3 = 0.0;
};

// I1 = int u.v, I2 = int |v|^2_C, I3 = int |u|^2_C over one period, where u, v
// are the columns of Phi and squares are algebraic (not conjugated); lambda
// must be real.  refine multiplies the quadrature density.
IIntegrals i_integrals(const SpectralPoint& sp, int refine = 1);

// D'(lambda) = Tr(M(lambda) [[I1, I2], [-I3, -I1]]).
double discriminant_derivative(const SpectralPoint& sp);

// || (M(l+h) - M(l-h)) / 2h  -  M(l) [[I1, I2], [-I3, -I1]] ||_F.
// h <= 0 selects the default 1e-5 (1 + |lambda|).
double mprime_check(const SpectralPoint& sp, double h = 0.0);

// Classifies the edge candidate and evaluates its Gamma-limit data.
// Throws ClassificationAmbiguousError when ||M - sI||_F falls between the
// FullPeriodic (1e-8) and Jordan (1e-6) thresholds.
BandEdge classify_edge(const PeriodicPotential& pot, double mass, double lambda0, int s);

// Scans D over [lo, hi], brackets D = +-2 crossings and interior touch
// points, refines them, and assembles the band/gap tiling.
BandStructure scan_bands(const PeriodicPotential& pot, double mass, double lo, double hi,
                         int n_scan);

// Band table CSV: band_index, lambda_lo, lambda_hi, edge_kind_lo,
// edge_kind_hi, gamma_limit_lo, gamma_limit_hi.
void write_band_csv(std::ostream& os, const BandStructure& bs);

}  // namespace pdirac
