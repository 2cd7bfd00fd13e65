#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "propscore/grid.hpp"
#include "propscore/score_fn.hpp"

namespace propscore {

enum class Provenance { DerivedFromT, DerivedFromF, Catalog, UserSupplied };

const char* to_string(Provenance p) noexcept;

/// A (T, F) pair: T(q) is paid when the event happens, F(q) when it does not.
///
/// Derived and catalog rules carry T NonDecreasing and F NonIncreasing.
/// UserSupplied rules may carry unconstrained components so that improper
/// pairs can be represented and checked.
struct ScoringRule {
  ScoreFn T;
  ScoreFn F;
  double C = 0.0;
  double c = 0.0;
  Provenance provenance = Provenance::UserSupplied;
};

/// Completes a non-decreasing truth score to a proper rule.
///
/// For x < 1:  F(x) = C - x T(x)/(1-x) + \int_{1/2}^x T(u)/(1-u)^2 du.
/// F(1) = lim_{x->1-} F(x) - c when T is continuous at 1, NEG_INF otherwise.
///
/// Closed-form T segments yield closed-form F segments; opaque segments yield
/// opaque F segments backed by a memoized adaptive integral.
///
/// Throws ValueError (c < 0 or C not finite), NotMonotone, NonConvergence, and
/// DomainError when the completion would be +inf at 0 (T not integrable there).
ScoringRule derive_false_score(const ScoreFn& T, double C = 0.0, double c = 0.0);

/// Completes a non-increasing false score to a proper rule.
///
/// For x > 0:  T(x) = C - (1-x) F(x)/x + \int_x^{1/2} F(u)/u^2 du.
/// T(0) = lim_{x->0+} T(x) - c when F is continuous at 0, NEG_INF otherwise.
/// Computed directly with the 1/u^2 antiderivative table.
ScoringRule derive_truth_score(const ScoreFn& F, double C = 0.0, double c = 0.0);

/// The same completion computed as reflect . derive_false_score . reflect.
ScoringRule derive_truth_score_by_reflection(const ScoreFn& F, double C = 0.0, double c = 0.0);

/// (T, F) -> (F*, T*) with g*(x) = g(1 - x).
ScoringRule reflect_rule(const ScoringRule& rule);

/// T = 1_A with A = [a,1] (closed) or (a,1]. (1,1] is the empty set.
struct IndicatorA {
  double a = 0.5;
  bool closed = true;
};

/// T = -1_B with B = [0,b] (closed) or [0,b). [0,0) is the empty set.
struct NegIndicatorB {
  double b = 0.5;
  bool closed = true;
};

using BuildingBlock = std::variant<IndicatorA, NegIndicatorB>;

/// Indicator rules. IndicatorA pairs 1_A with the closed-form companion
/// -(a/(1-a)) 1_A(x) for x < 1, which is NEG_INF at 1 iff A = {1}.
/// NegIndicatorB completes -1_B through derive_false_score with C = c = 0.
/// Throws InvalidInterval for intervals outside the allowed shapes.
ScoringRule building_block_rule(const BuildingBlock& kind);

/// Sublevel set B_t = {x : T(x) <= t} of a non-decreasing T, always an
/// initial interval [0,b] or [0,b). [0,0) encodes the empty set.
struct LevelSet {
  enum class Shape { ClosedRight, OpenRight };

  double t = 0.0;
  double b = 0.0;
  Shape shape = Shape::OpenRight;

  bool contains(double x) const noexcept {
    return x < b || (x == b && shape == Shape::ClosedRight);
  }
};

/// Requires T non-decreasing (NotMonotone otherwise).
LevelSet level_set(const ScoreFn& T, double t);

/// T - sup T, so the result is non-positive.
ScoreFn normalize_nonpositive(const ScoreFn& T);

/// Rebuilds T(x) = \int_{-inf}^0 -1[x in B_t] dt from level sets alone.
///
/// Piecewise-constant T uses the exact finite sum over its distinct levels;
/// any other T is integrated adaptively in t, using that membership of x in
/// B_t is monotone in t. Throws NotNonPositive when sup T > 1e-12 and
/// NotMonotone when T is not non-decreasing.
ExtReal level_set_decomposition(const ScoreFn& T, double x);

/// Bisection width in t for the adaptive layer-cake integral.
inline constexpr double kLayerCakeTolerance = 1e-11;

/// Sampled convex function G(p) = p T(p) + (1-p) F(p) and subgradient
/// G'(p) = T(p) - F(p). Values at the endpoints may be infinite. G is also
/// sampled at the midpoint of every adjacent grid pair.
struct ConvexRep {
  std::vector<double> points;
  std::vector<double> G;
  std::vector<double> Gprime;
  std::vector<double> midpoints;
  std::vector<double> G_mid;
};

ConvexRep convex_rep(const ScoringRule& rule, const GridSpec& grid);

/// Largest G(mid) - (G(p)+G(q))/2 over adjacent grid pairs; <= 0 when convex.
double midpoint_convexity_excess(const ConvexRep& rep);

/// T^(p) = G + (1-p) G' and F^(p) = G - p G' at every interior grid point.
struct Reconstruction {
  std::vector<double> points;
  std::vector<double> T;
  std::vector<double> F;
};

Reconstruction reconstruct(const ConvexRep& rep);

}  // namespace propscore
