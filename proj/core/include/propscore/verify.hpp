#pragma once

#include <optional>
#include <span>

#include "propscore/ext_real.hpp"
#include "propscore/grid.hpp"
#include "propscore/represent.hpp"

namespace propscore {

inline constexpr double kDefaultTolerance = 1e-9;

/// p T(q) + (1-p) F(q) with 0 * NEG_INF = 0. Throws DomainError outside [0,1].
ExtReal expected_score(const ScoringRule& rule, double p, double q);

struct Witness {
  double p = 0.0;
  double q = 0.0;
  ExtReal lhs;  // S(p, p)
  ExtReal rhs;  // S(p, q)
};

/// Grid checks cannot rule out violations between grid points of opaque
/// segments, so those results are only grid-supported.
enum class Support { Certified, GridSupported };

const char* to_string(Support s) noexcept;

struct ProprietyReport {
  bool passed = true;
  /// Largest (S(p,q) - S(p,p)) / scale(p) over all pairs, clamped at 0.
  /// +inf when a finite S(p,q) beats S(p,p) = NEG_INF.
  double worst_violation = 0.0;
  std::optional<Witness> witness;
  long long checked_pairs = 0;
  Support support = Support::Certified;
};

/// Checks S(p,p) >= S(p,q) - tol * scale(p) for all grid pairs, with
/// scale(p) = 1 + |S(p,p)| (1 when S(p,p) = NEG_INF). The witness is the
/// pair with the largest violation, ties broken by smallest p, then q.
ProprietyReport propriety_check(const ScoringRule& rule, const GridSpec& grid,
                                double tol = kDefaultTolerance);

/// The same scan over tabulated component values.
ProprietyReport propriety_check_table(std::span<const double> points, std::span<const ExtReal> T,
                                      std::span<const ExtReal> F, double tol,
                                      Support support = Support::Certified);

struct UniquenessGap {
  bool is_constant = false;
  double gap = 0.0;     // mean of F - K over grid points below 1
  double spread = 0.0;  // max - min of F - K over the same points
  /// Drop at 1 of K relative to F after removing the gap: K(1) - F(1) + gap.
  /// Equals c_F - c_K for two completions; NEG_INF when either value at 1 is.
  ExtReal c_at_1;
};

inline constexpr double kConstantSpread = 1e-9;

/// Compares two completions F and K of the same T.
/// Throws PreconditionFailed unless both (T,F) and (T,K) pass propriety_check.
UniquenessGap uniqueness_gap(const ScoreFn& T, const ScoreFn& F, const ScoreFn& K,
                             const GridSpec& grid);

struct DifferenceReport {
  bool t_difference_nondecreasing = false;
  bool f_difference_nonincreasing = false;
  bool corollary_verdict = false;
  ProprietyReport grid_verdict;
  bool agree() const noexcept { return corollary_verdict == grid_verdict.passed; }
};

/// Propriety of (T1 - T2, F1 - F2), decided twice: from monotonicity of the
/// component differences, and by a grid scan over the interior grid points.
/// Throws HypothesisViolated when a component of either rule is
/// discontinuous at 0 or 1.
DifferenceReport difference_propriety(const ScoringRule& r1, const ScoringRule& r2,
                                      const GridSpec& grid, double tol = kDefaultTolerance);

}  // namespace propscore
