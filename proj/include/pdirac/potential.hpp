#pragma once

#include <vector>

#include "pdirac/mat2.hpp"

namespace pdirac {

enum class PotentialShape { Zero, Constant, PiecewiseConstant, Fourier, Sampled };

// Real a-periodic potential q with an exact antiderivative Q.  Immutable
// after construction; freely shared across threads.
class PeriodicPotential {
public:
    static PeriodicPotential zero(double period);
    static PeriodicPotential constant(double period, double value);
    // breakpoints strictly increasing, breakpoints[0] == 0, last < period;
    // values[i] holds on [breakpoints[i], breakpoints[i+1]).
    static PeriodicPotential piecewise_constant(double period, std::vector<double> breakpoints,
                                                std::vector<double> values);
    // q(x) = mean + sum_n cos_coeff[n-1] cos(2 pi n x / a) + sin_coeff[n-1] sin(2 pi n x / a)
    static PeriodicPotential fourier(double period, double mean, std::vector<double> cos_coeff,
                                     std::vector<double> sin_coeff);
    // values on the uniform grid x_i = i a / n (n = values.size()), linear
    // interpolation, periodic wrap back to values[0] at x = a.
    static PeriodicPotential sampled(double period, std::vector<double> values);

    double period() const { return period_; }
    PotentialShape shape() const { return shape_; }

    double eval(double x) const;  // q(x mod a)

    // Q(x) = int_0^x q, exact for the stored representation; x must lie in [0, a].
    double antiderivative(double x) const;
    // Q extended to all of R via Q(x + a) = Q(x) + Q(a).
    double antiderivative_periodized(double x) const;

    // Points in (0, a) where q jumps or kinks; empty for smooth shapes.
    const std::vector<double>& interior_breakpoints() const { return interior_breaks_; }
    // True when the propagator can use exact matrix-exponential steps.
    bool exact_stepping() const {
        return shape_ == PotentialShape::Zero || shape_ == PotentialShape::Constant ||
               shape_ == PotentialShape::PiecewiseConstant;
    }
    double sup_abs() const { return sup_abs_; }

    // The potential x -> q(period - x), same period.
    PeriodicPotential reflected() const;

    const std::vector<double>& pwc_breakpoints() const { return breakpoints_; }
    const std::vector<double>& pwc_values() const { return values_; }
    double fourier_mean() const { return fourier_mean_; }
    const std::vector<double>& fourier_cos() const { return fourier_cos_; }
    const std::vector<double>& fourier_sin() const { return fourier_sin_; }
    const std::vector<double>& samples() const { return samples_; }

private:
    PeriodicPotential() = default;
    void finalize();

    PotentialShape shape_ = PotentialShape::Zero;
    double period_ = 1.0;
    double constant_ = 0.0;
    std::vector<double> breakpoints_, values_;  // piecewise-constant
    double fourier_mean_ = 0.0;
    std::vector<double> fourier_cos_, fourier_sin_;
    std::vector<double> samples_;

    std::vector<double> interior_breaks_;
    std::vector<double> cum_;  // cumulative exact integrals at breakpoints/grid nodes
    double sup_abs_ = 0.0;
};

// Matrix perturbation V, consumed through its L^p norm only.
class PerturbationField {
public:
    static PerturbationField norm_only(double p, double norm_value);
    // Matrix samples on the uniform grid over [support_lo, support_hi]
    // (endpoints included); sample count must be odd with (n-1) % 4 == 0 so
    // the Richardson check has a half-resolution Simpson rule to compare to.
    static PerturbationField explicit_samples(double p, double support_lo, double support_hi,
                                              std::vector<C2> samples);

    double p() const { return p_; }
    bool is_norm_only() const { return norm_only_; }
    double support_lo() const { return support_lo_; }
    double support_hi() const { return support_hi_; }
    const std::vector<C2>& samples() const { return samples_; }

    // (int ||V(x)||^p dx)^(1/p); throws QuadratureError when the Richardson
    // estimate exceeds 1e-6 relative.
    double vnorm() const;

private:
    PerturbationField() = default;

    bool norm_only_ = true;
    double p_ = 1.0;
    double norm_value_ = 0.0;
    double support_lo_ = 0.0, support_hi_ = 0.0;
    std::vector<C2> samples_;
};

}  // namespace pdirac
