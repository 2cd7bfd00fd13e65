#pragma once

#include <functional>

#include "propscore/forms.hpp"
#include "propscore/score_fn.hpp"

namespace propscore {

/// The two singular weights of the companion formulas.
enum class Weight {
  OneOver1MinusUSq,  // 1/(1-u)^2, singular at u = 1
  OneOverUSq,        // 1/u^2, singular at u = 0
};

struct WeightedIntegral {
  double value = 0.0;
  bool exact = true;
  double est_error = 0.0;  // 0 when exact
};

/// Target accuracy of the adaptive path: est_error <= kAdaptiveTolerance * (1 + |value|).
inline constexpr double kAdaptiveTolerance = 1e-10;

/// \int_lo^hi f(u) w(u) du, segment by segment.
///
/// Closed-form segments use an antiderivative table (exact = true). Opaque
/// segments are integrated adaptively after the substitution v = 1/(1-u)
/// (v = 1/u for the other weight), split dyadically toward the singular end.
///
/// Requires 0 <= lo <= hi <= 1 with the weight's singular point outside
/// [lo, hi]; otherwise DomainError. Throws NonConvergence when the adaptive
/// error bound is not met, and DomainError when a closed-form integral
/// diverges at an endpoint.
WeightedIntegral integrate_weighted(const ScoreFn& f, double lo, double hi, Weight weight);

/// Same contract for a single form over [lo, hi] inside its domain.
WeightedIntegral integrate_form(const Form& form, double lo, double hi, Weight weight);

/// Adaptive path only; `g` must be finite on (lo, hi).
WeightedIntegral integrate_adaptive(const std::function<double(double)>& g, double lo, double hi,
                                    Weight weight);

/// Closed-form antiderivative of c(u) w(u) at u, with one-sided limits at the
/// non-singular endpoint. Throws DomainError where it diverges.
double weighted_antiderivative(const Combined& c, double u, Weight weight);

}  // namespace propscore
