#include "propscore/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "propscore/error.hpp"

namespace propscore {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ExtReal combine(double p, ExtReal t, ExtReal f) { return p * t + (1.0 - p) * f; }

/// Violation of S(p,q) over S(p,p), scaled; <= 0 means no violation.
double violation(ExtReal lhs, ExtReal rhs) {
  if (rhs.is_neg_inf()) return 0.0;
  if (lhs.is_neg_inf()) return kInf;
  return (rhs.value() - lhs.value()) / (1.0 + std::abs(lhs.value()));
}

Support support_of(const ScoringRule& rule) {
  return rule.T.has_opaque() || rule.F.has_opaque() ? Support::GridSupported
                                                    : Support::Certified;
}

bool proper_on(const ScoreFn& T, const ScoreFn& F, const GridSpec& grid) {
  return propriety_check(ScoringRule{T, F}, grid).passed;
}

}  // namespace

const char* to_string(Support s) noexcept {
  return s == Support::Certified ? "certified" : "grid-supported";
}

ExtReal expected_score(const ScoringRule& rule, double p, double q) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p outside [0,1]");
  return combine(p, rule.T(q), rule.F(q));
}

ProprietyReport propriety_check_table(std::span<const double> points, std::span<const ExtReal> T,
                                      std::span<const ExtReal> F, double tol, Support support) {
  if (!(tol >= 0.0)) throw ValueError("tolerance must be >= 0");
  if (T.size() != points.size() || F.size() != points.size()) {
    throw ValueError("value tables do not match the grid");
  }
  ProprietyReport report;
  report.support = support;
  double worst = 0.0;
  std::optional<Witness> best;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double p = points[i];
    const ExtReal lhs = combine(p, T[i], F[i]);
    for (std::size_t j = 0; j < points.size(); ++j) {
      const ExtReal rhs = combine(p, T[j], F[j]);
      const double v = violation(lhs, rhs);
      ++report.checked_pairs;
      // Strict > keeps the first (smallest p, then q) among equal violations.
      if (v > worst) {
        worst = v;
        best = Witness{p, points[j], lhs, rhs};
      }
    }
  }
  report.worst_violation = worst;
  report.passed = worst <= tol;
  if (!report.passed) report.witness = best;
  return report;
}

ProprietyReport propriety_check(const ScoringRule& rule, const GridSpec& grid, double tol) {
  std::vector<ExtReal> T;
  std::vector<ExtReal> F;
  T.reserve(grid.points.size());
  F.reserve(grid.points.size());
  for (double q : grid.points) {
    T.push_back(rule.T(q));
    F.push_back(rule.F(q));
  }
  return propriety_check_table(grid.points, T, F, tol, support_of(rule));
}

UniquenessGap uniqueness_gap(const ScoreFn& T, const ScoreFn& F, const ScoreFn& K,
                             const GridSpec& grid) {
  if (!proper_on(T, F, grid)) throw PreconditionFailed("(T, F) is not proper on the grid");
  if (!proper_on(T, K, grid)) throw PreconditionFailed("(T, K) is not proper on the grid");
  double lo = kInf;
  double hi = -kInf;
  double sum = 0.0;
  std::size_t count = 0;
  for (double x : grid.points) {
    if (x >= 1.0) continue;
    const ExtReal f = F(x);
    const ExtReal k = K(x);
    if (f.is_neg_inf() || k.is_neg_inf()) {
      throw PreconditionFailed("completion is NEG_INF below 1");
    }
    const double d = f.value() - k.value();
    lo = std::min(lo, d);
    hi = std::max(hi, d);
    sum += d;
    ++count;
  }
  UniquenessGap out;
  out.gap = sum / static_cast<double>(count);
  out.spread = hi - lo;
  out.is_constant = out.spread <= kConstantSpread;
  const ExtReal f1 = F(1.0);
  const ExtReal k1 = K(1.0);
  out.c_at_1 = f1.is_neg_inf() || k1.is_neg_inf() ? kNegInf
                                                  : ExtReal(k1.value() - f1.value() + out.gap);
  return out;
}

DifferenceReport difference_propriety(const ScoringRule& r1, const ScoringRule& r2,
                                      const GridSpec& grid, double tol) {
  for (const ScoreFn* f : {&r1.T, &r1.F, &r2.T, &r2.F}) {
    if (!continuous_at_zero(*f) || !continuous_at_one(*f)) {
      throw HypothesisViolated("difference propriety needs both rules continuous at 0 and 1");
    }
  }
  DifferenceReport out;
  out.t_difference_nondecreasing =
      segments_monotone(combine_segments(r1.T, r2.T, -1.0), Direction::NonDecreasing);
  out.f_difference_nonincreasing =
      segments_monotone(combine_segments(r1.F, r2.F, -1.0), Direction::NonIncreasing);
  out.corollary_verdict = out.t_difference_nondecreasing || out.f_difference_nonincreasing;

  // With continuity at both ends the interior determines the endpoint
  // values, and the difference may be undefined (inf - inf) there.
  std::vector<double> points;
  std::vector<ExtReal> T;
  std::vector<ExtReal> F;
  for (double q : grid.points) {
    if (q <= 0.0 || q >= 1.0) continue;
    const double t = r1.T(q).value() - r2.T(q).value();
    const double f = r1.F(q).value() - r2.F(q).value();
    if (!std::isfinite(t) || !std::isfinite(f)) {
      throw PreconditionFailed("rule is not finite on the grid interior");
    }
    points.push_back(q);
    T.emplace_back(t);
    F.emplace_back(f);
  }
  const Support support =
      support_of(r1) == Support::Certified && support_of(r2) == Support::Certified
          ? Support::Certified
          : Support::GridSupported;
  out.grid_verdict = propriety_check_table(points, T, F, tol, support);
  return out;
}

}  // namespace propscore
