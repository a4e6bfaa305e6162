#pragma once

#include <vector>

#include "pdirac/mat2.hpp"
#include "pdirac/potential.hpp"

namespace pdirac {

// One point (lambda, m) of the periodic Dirac equation
//   u' = [[0, m - q(x) + lambda], [m + q(x) - lambda, 0]] u.
// Non-owning view of the potential; construct on the stack at call sites.
struct SpectralPoint {
    const PeriodicPotential& potential;
    double mass = 0.0;
    cplx lambda{0.0, 0.0};
};

struct OdeTolerances {
    double absolute = 1e-12;
    double relative = 1e-11;
};

// exp(h [[0, p], [n, 0]]) = cosh(h w) I + sinh(h w)/w [[0, p], [n, 0]],
// w = sqrt(p n), with the w -> 0 limit by series.
C2 constant_step(cplx p_coeff, cplx n_coeff, double h);
// e^{-scale h} exp(h [[0, p], [n, 0]]), overflow-safe for large scale * h.
C2 scaled_constant_step(cplx p_coeff, cplx n_coeff, double h, double scale);

// Transfer matrix over [x0, x1] (0 <= x0 <= x1), times e^{-scale (x1 - x0)}:
// exact exponential steps for Zero/Constant/PiecewiseConstant, the commuting
// closed form cos/sin(lambda x - Q(x)) when m = 0, adaptive embedded RK5(4)
// otherwise.  Throws StepSizeUnderflow if the integrator stalls.
C2 propagate_interval(const SpectralPoint& sp, double x0, double x1, double scale = 0.0,
                      const OdeTolerances& tol = {});

// Phi(x, lambda), the canonical fundamental system with Phi(0) = I; x in [0, a].
C2 fundamental_system(const SpectralPoint& sp, double x);
// e^{-scale x} Phi(x, lambda); use scale = |Im lambda| to avoid overflow when
// |Im lambda| a is large.
C2 fundamental_system_scaled(const SpectralPoint& sp, double x, double scale,
                             const OdeTolerances& tol = {});
// M(lambda) = Phi(a, lambda).
C2 monodromy(const SpectralPoint& sp);

// Phi sampled along [0, a] by continuation (never restarted from 0).
// matrices[j] = e^{-scale nodes[j]} Phi(nodes[j]).  coarse[j] marks the nodes
// forming the half-resolution subset (every other uniform node plus all
// breakpoints), used for Richardson refinement of sup norms.
struct Trajectory {
    cplx lambda;
    double scale = 0.0;
    std::vector<double> nodes;
    std::vector<C2> matrices;
    std::vector<unsigned char> coarse;

    // max_j |det Phi(nodes[j]) - 1|; NaN when scale * a is too large for the
    // determinant to be representable.
    double max_det_drift() const;
};

// Nodes: n_nodes uniform on [0, a] union all potential breakpoints.
Trajectory trajectory(const SpectralPoint& sp, int n_nodes, double scale = 0.0,
                      const OdeTolerances& tol = {});
// Same, on a caller-supplied strictly increasing node list starting at 0.
Trajectory trajectory_on(const SpectralPoint& sp, std::vector<double> nodes, double scale = 0.0,
                         const OdeTolerances& tol = {});

// |Im lambda| when |Im lambda| * a exceeds the comfortable unscaled range,
// else 0.
double default_scale(const SpectralPoint& sp);

}  // namespace pdirac
