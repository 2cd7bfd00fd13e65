#pragma once

#include <span>
#include <vector>

#include "propscore/ext_real.hpp"
#include "propscore/forms.hpp"

namespace propscore {

/// One piece of a score function: an interval of [0,1] with explicit closure
/// flags and a form. A point segment has lo == hi with both ends closed.
struct Segment {
  Breakpoint lo;
  Breakpoint hi;
  bool lo_closed = true;
  bool hi_closed = true;
  Form form;

  bool is_point() const noexcept { return lo.x == hi.x; }
  bool contains(double x) const noexcept;
};

/// A piecewise function on [0,1] representing a truth score T or false score F.
///
/// Segments partition (0,1) in order: consecutive segments meet at a shared
/// breakpoint owned by exactly one of them. Endpoint values are data and
/// override every segment formula at x = 0 and x = 1, so closure flags at 0
/// and 1 carry no meaning and point segments there are rejected.
///
/// Construction validates the partition, finiteness on (0,1), and (when a
/// direction is given) monotonicity; it throws InvalidSegment or NotMonotone.
class ScoreFn {
 public:
  ScoreFn(std::vector<Segment> segments, ExtReal at0, ExtReal at1,
          Direction direction = Direction::Unconstrained);

  static ScoreFn constant(double c, Direction direction = Direction::Unconstrained);
  static ScoreFn single(Form form, ExtReal at0, ExtReal at1,
                        Direction direction = Direction::Unconstrained);

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  ExtReal value_at_0() const noexcept { return at0_; }
  ExtReal value_at_1() const noexcept { return at1_; }
  Direction direction() const noexcept { return direction_; }

  /// Index of the segment owning x in (0,1).
  std::size_t segment_index(double x) const;

  /// Throws DomainError outside [0,1].
  ExtReal operator()(double x) const;

  bool has_opaque() const noexcept;

  ScoreFn with_direction(Direction d) const;

 private:
  std::vector<Segment> segments_;
  ExtReal at0_;
  ExtReal at1_;
  Direction direction_;
};

inline ExtReal eval(const ScoreFn& f, double x) { return f(x); }

/// Relative slack used by every monotonicity decision: a step against the
/// direction of at most kMonotoneSlack * (1 + |value|) counts as flat.
inline constexpr double kMonotoneSlack = 1e-10;

/// Exact per-form decision (critical points of closed forms, declared flag
/// plus grid cross-check for opaque forms) across all segment boundaries and
/// both endpoint values.
bool is_monotone(const ScoreFn& f, Direction dir);

/// Monotonicity on the open interval (0,1) only; endpoint values are ignored.
bool segments_monotone(std::span<const Segment> segments, Direction dir);

/// One-sided limits at the endpoints, +-inf when divergent.
double limit_at_zero(const ScoreFn& f);
double limit_at_one(const ScoreFn& f);

/// Limit from inside equals the stored endpoint value (both -inf counts as equal).
bool continuous_at_zero(const ScoreFn& f);
bool continuous_at_one(const ScoreFn& f);

/// g(x) = f(1 - x); forms are transformed exactly, direction flips.
ScoreFn reflect(const ScoreFn& f);

/// f + k, endpoint NEG_INF preserved.
ScoreFn shifted(const ScoreFn& f, double k);

/// f + sign * g on the common refinement of both segment lists. Only the
/// interior (0,1) is produced; closure flags at 0 and 1 are arbitrary.
std::vector<Segment> combine_segments(const ScoreFn& f, const ScoreFn& g, double sign);

}  // namespace propscore
