#include "pdirac/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pdirac/errors.hpp"

namespace pdirac {

namespace {

double reduce_mod(double x, double a) {
    double r = x - a * std::floor(x / a);
    if (r >= a) r -= a;
    if (r < 0.0) r = 0.0;
    return r;
}

}  // namespace

PeriodicPotential PeriodicPotential::zero(double period) {
    if (!(period > 0.0)) throw std::invalid_argument("potential: period must be positive");
    PeriodicPotential p;
    p.shape_ = PotentialShape::Zero;
    p.period_ = period;
    p.finalize();
    return p;
}

PeriodicPotential PeriodicPotential::constant(double period, double value) {
    if (!(period > 0.0)) throw std::invalid_argument("potential: period must be positive");
    if (!std::isfinite(value)) throw std::invalid_argument("potential: value must be finite");
    PeriodicPotential p;
    p.shape_ = PotentialShape::Constant;
    p.period_ = period;
    p.constant_ = value;
    p.finalize();
    return p;
}

PeriodicPotential PeriodicPotential::piecewise_constant(double period,
                                                        std::vector<double> breakpoints,
                                                        std::vector<double> values) {
    if (!(period > 0.0)) throw std::invalid_argument("potential: period must be positive");
    if (breakpoints.empty() || breakpoints.size() != values.size())
        throw std::invalid_argument("potential: breakpoints/values size mismatch");
    if (breakpoints.front() != 0.0)
        throw std::invalid_argument("potential: first breakpoint must be 0");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (!(breakpoints[i] < breakpoints[i + 1]))
            throw std::invalid_argument("potential: breakpoints must be strictly increasing");
    if (!(breakpoints.back() < period))
        throw std::invalid_argument("potential: breakpoints must lie in [0, period)");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("potential: values must be finite");
    PeriodicPotential p;
    p.shape_ = PotentialShape::PiecewiseConstant;
    p.period_ = period;
    p.breakpoints_ = std::move(breakpoints);
    p.values_ = std::move(values);
    p.finalize();
    return p;
}

PeriodicPotential PeriodicPotential::fourier(double period, double mean,
                                             std::vector<double> cos_coeff,
                                             std::vector<double> sin_coeff) {
    if (!(period > 0.0)) throw std::invalid_argument("potential: period must be positive");
    PeriodicPotential p;
    p.shape_ = PotentialShape::Fourier;
    p.period_ = period;
    p.fourier_mean_ = mean;
    p.fourier_cos_ = std::move(cos_coeff);
    p.fourier_sin_ = std::move(sin_coeff);
    p.fourier_cos_.resize(std::max(p.fourier_cos_.size(), p.fourier_sin_.size()), 0.0);
    p.fourier_sin_.resize(p.fourier_cos_.size(), 0.0);
    p.finalize();
    return p;
}

PeriodicPotential PeriodicPotential::sampled(double period, std::vector<double> values) {
    if (!(period > 0.0)) throw std::invalid_argument("potential: period must be positive");
    if (values.size() < 2) throw std::invalid_argument("potential: need at least 2 samples");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("potential: samples must be finite");
    PeriodicPotential p;
    p.shape_ = PotentialShape::Sampled;
    p.period_ = period;
    p.samples_ = std::move(values);
    p.finalize();
    return p;
}

void PeriodicPotential::finalize() {
    interior_breaks_.clear();
    cum_.clear();
    sup_abs_ = 0.0;
    switch (shape_) {
        case PotentialShape::Zero:
            break;
        case PotentialShape::Constant:
            sup_abs_ = std::abs(constant_);
            break;
        case PotentialShape::PiecewiseConstant: {
            for (std::size_t i = 1; i < breakpoints_.size(); ++i)
                interior_breaks_.push_back(breakpoints_[i]);
            cum_.resize(breakpoints_.size());
            cum_[0] = 0.0;
            for (std::size_t i = 1; i < breakpoints_.size(); ++i)
                cum_[i] = cum_[i - 1] + values_[i - 1] * (breakpoints_[i] - breakpoints_[i - 1]);
            for (double v : values_) sup_abs_ = std::max(sup_abs_, std::abs(v));
            break;
        }
        case PotentialShape::Fourier: {
            sup_abs_ = std::abs(fourier_mean_);
            for (std::size_t i = 0; i < fourier_cos_.size(); ++i)
                sup_abs_ += std::abs(fourier_cos_[i]) + std::abs(fourier_sin_[i]);
            break;
        }
        case PotentialShape::Sampled: {
            const std::size_t n = samples_.size();
            const double h = period_ / static_cast<double>(n);
            for (std::size_t i = 1; i < n; ++i)
                interior_breaks_.push_back(static_cast<double>(i) * h);
            cum_.resize(n + 1);
            cum_[0] = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double next = samples_[(i + 1) % n];
                cum_[i + 1] = cum_[i] + 0.5 * (samples_[i] + next) * h;
            }
            for (double v : samples_) sup_abs_ = std::max(sup_abs_, std::abs(v));
            break;
        }
    }
}

double PeriodicPotential::eval(double x) const {
    const double xr = reduce_mod(x, period_);
    switch (shape_) {
        case PotentialShape::Zero:
            return 0.0;
        case PotentialShape::Constant:
            return constant_;
        case PotentialShape::PiecewiseConstant: {
            auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), xr);
            return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
        }
        case PotentialShape::Fourier: {
            const double w = 2.0 * std::numbers::pi / period_;
            double q = fourier_mean_;
            for (std::size_t i = 0; i < fourier_cos_.size(); ++i) {
                const double arg = w * static_cast<double>(i + 1) * xr;
                q += fourier_cos_[i] * std::cos(arg) + fourier_sin_[i] * std::sin(arg);
            }
            return q;
        }
        case PotentialShape::Sampled: {
            const std::size_t n = samples_.size();
            const double pos = xr * static_cast<double>(n) / period_;
            std::size_t i = std::min(static_cast<std::size_t>(pos), n - 1);
            const double frac = pos - static_cast<double>(i);
            return samples_[i] + (samples_[(i + 1) % n] - samples_[i]) * frac;
        }
    }
    return 0.0;
}

double PeriodicPotential::antiderivative(double x) const {
    if (x < -1e-12 * period_ || x > period_ * (1.0 + 1e-12))
        throw std::domain_error("antiderivative: x outside [0, period]");
    const double xc = std::clamp(x, 0.0, period_);
    switch (shape_) {
        case PotentialShape::Zero:
            return 0.0;
        case PotentialShape::Constant:
            return constant_ * xc;
        case PotentialShape::PiecewiseConstant: {
            auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), xc);
            const std::size_t i = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
            return cum_[i] + values_[i] * (xc - breakpoints_[i]);
        }
        case PotentialShape::Fourier: {
            const double w = 2.0 * std::numbers::pi / period_;
            double q = fourier_mean_ * xc;
            for (std::size_t i = 0; i < fourier_cos_.size(); ++i) {
                const double wn = w * static_cast<double>(i + 1);
                const double arg = wn * xc;
                q += fourier_cos_[i] * std::sin(arg) / wn +
                     fourier_sin_[i] * (1.0 - std::cos(arg)) / wn;
            }
            return q;
        }
        case PotentialShape::Sampled: {
            const std::size_t n = samples_.size();
            const double h = period_ / static_cast<double>(n);
            const double pos = xc * static_cast<double>(n) / period_;
            std::size_t i = std::min(static_cast<std::size_t>(pos), n - 1);
            const double frac = pos - static_cast<double>(i);
            const double delta = samples_[(i + 1) % n] - samples_[i];
            return cum_[i] + h * (samples_[i] * frac + 0.5 * delta * frac * frac);
        }
    }
    return 0.0;
}

double PeriodicPotential::antiderivative_periodized(double x) const {
    const double k = std::floor(x / period_);
    const double xr = std::clamp(x - k * period_, 0.0, period_);
    const double q_period = (shape_ == PotentialShape::Zero) ? 0.0 : antiderivative(period_);
    return k * q_period + antiderivative(xr);
}

PeriodicPotential PeriodicPotential::reflected() const {
    switch (shape_) {
        case PotentialShape::Zero:
        case PotentialShape::Constant:
            return *this;
        case PotentialShape::PiecewiseConstant: {
            const std::size_t m = breakpoints_.size();
            std::vector<double> rb, rv;
            rb.reserve(m);
            rv.reserve(m);
            rb.push_back(0.0);
            rv.push_back(values_[m - 1]);
            for (std::size_t i = m - 1; i >= 1; --i) {
                rb.push_back(period_ - breakpoints_[i]);
                rv.push_back(values_[i - 1]);
            }
            return piecewise_constant(period_, std::move(rb), std::move(rv));
        }
        case PotentialShape::Fourier: {
            // q(a - x) = q(-x): cosine terms invariant, sine terms flip sign.
            std::vector<double> s = fourier_sin_;
            for (double& v : s) v = -v;
            return fourier(period_, fourier_mean_, fourier_cos_, std::move(s));
        }
        case PotentialShape::Sampled: {
            const std::size_t n = samples_.size();
            std::vector<double> r(n);
            for (std::size_t i = 0; i < n; ++i) r[i] = samples_[(n - i) % n];
            return sampled(period_, std::move(r));
        }
    }
    return *this;
}

PerturbationField PerturbationField::norm_only(double p, double norm_value) {
    if (!(p >= 1.0)) throw std::invalid_argument("perturbation: p must be >= 1");
    if (!(norm_value >= 0.0)) throw std::invalid_argument("perturbation: norm must be >= 0");
    PerturbationField f;
    f.norm_only_ = true;
    f.p_ = p;
    f.norm_value_ = norm_value;
    return f;
}

PerturbationField PerturbationField::explicit_samples(double p, double support_lo,
                                                      double support_hi,
                                                      std::vector<C2> samples) {
    if (!(p >= 1.0)) throw std::invalid_argument("perturbation: p must be >= 1");
    if (!(support_hi > support_lo)) throw std::invalid_argument("perturbation: empty support");
    const std::size_t n = samples.size();
    if (n < 5 || n % 2 == 0 || (n - 1) % 4 != 0)
        throw std::invalid_argument(
            "perturbation: sample count must be odd with (n-1) divisible by 4");
    for (const C2& s : samples)
        if (!s.finite()) throw std::invalid_argument("perturbation: samples must be finite");
    PerturbationField f;
    f.norm_only_ = false;
    f.p_ = p;
    f.support_lo_ = support_lo;
    f.support_hi_ = support_hi;
    f.samples_ = std::move(samples);
    return f;
}

namespace {

double simpson(const std::vector<double>& g, std::size_t stride, double h) {
    const std::size_t n = (g.size() - 1) / stride;  // number of intervals, even
    double s = g[0] + g[n * stride];
    for (std::size_t i = 1; i < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * g[i * stride];
    return s * h / 3.0;
}

}  // namespace

double PerturbationField::vnorm() const {
    if (norm_only_) return norm_value_;
    const std::size_t n = samples_.size();
    const double h = (support_hi_ - support_lo_) / static_cast<double>(n - 1);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = std::pow(operator_norm(samples_[i]), p_);
    const double fine = simpson(g, 1, h);
    const double coarse = simpson(g, 2, 2.0 * h);
    const double richardson = std::abs(fine - coarse) / 15.0;
    if (richardson > 1e-6 * std::max(std::abs(fine), 1e-300))
        throw QuadratureError("vnorm: quadrature did not converge (Richardson check failed)");
    return std::pow(std::max(fine, 0.0), 1.0 / p_);
}

}  // namespace pdirac
