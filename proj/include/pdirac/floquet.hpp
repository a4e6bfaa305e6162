#pragma once

#include <vector>

#include "pdirac/mat2.hpp"
#include "pdirac/propagator.hpp"

namespace pdirac {

// Per-lambda Floquet bundle.  For large |Im lambda| the monodromy matrix is
// stored scaled by e^{-scale a} to stay representable; the accessors rescale
// (and overflow honestly once scale * a exceeds the exp range).  k and the
// eigenvectors are always finite.
struct FloquetData {
    cplx lambda;
    double period = 1.0;
    double scale = 0.0;
    C2 monodromy_scaled;
    cplx discriminant_scaled;
    cplx rho_scaled;
    cplx k;
    double im_k = 0.0;
    Vec2 v_plus, v_minus;
    bool on_essential = false;

    C2 monodromy() const;
    cplx discriminant() const;
    cplx rho() const;
};

// Throws DegenerateMultiplierError when D(lambda) is within 1e-10 of +-2.
FloquetData floquet_data(const SpectralPoint& sp, const OdeTolerances& tol = {});

// Closed form for Im k from the discriminant alone:
// (1/2a) Arcosh(|D|^2/4 + sqrt((1 - |D|^2/4)^2 + (Im D)^2)), argument clamped
// to >= 1 against roundoff.
double imk_formula(cplx d, double a);

// phi_- evaluation route.  Direct division by e^{-ikx} amplifies roundoff by
// e^{2 Im k x}; beyond Im k * a = 6 the reflected-potential identity
// phi_-(x) = sigma_3 phi~_+(a - x) (with v~_+ = sigma_3 v_-) is used instead.
enum class MinusPath { Auto, Direct, Reflected };

struct PeriodicParts {
    std::vector<double> nodes;
    std::vector<Vec2> phi_plus, phi_minus;
    double sup_plus = 0.0, sup_minus = 0.0;
    double gamma_plus = 0.0, gamma_minus = 0.0;
    double periodicity_residual_plus = 0.0, periodicity_residual_minus = 0.0;
    double sup_refine_residual_plus = 0.0, sup_refine_residual_minus = 0.0;
    bool minus_by_reflection = false;
    bool periodicity_warning = false;
};

// Samples phi_pm on 2*n_samples+1 uniform nodes union breakpoints; the sup is
// Richardson-refined from the half-resolution node subset.
PeriodicParts periodic_parts(const SpectralPoint& sp, const FloquetData& fd,
                             int n_samples = 2048, MinusPath path = MinusPath::Auto,
                             const OdeTolerances& tol = {});

// C(lambda) = sup|phi_+| sup|phi_-| / |det(v_+, v_-)|.
double c_lambda(const PeriodicParts& pp, const FloquetData& fd);

// Single-point evaluation of the periodic parts, extended a-periodically.
Vec2 phi_plus_at(const SpectralPoint& sp, const FloquetData& fd, double x,
                 const OdeTolerances& tol = {});
Vec2 phi_minus_at(const SpectralPoint& sp, const FloquetData& fd, double x,
                  MinusPath path = MinusPath::Auto, const OdeTolerances& tol = {});

}  // namespace pdirac
