#include "propscore/score_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "propscore/error.hpp"
#include "propscore/grid.hpp"

namespace propscore {
namespace {

constexpr int kOpaqueUniformSamples = 64;

bool finite_params(const Form& form) {
  if (const auto* op = std::get_if<Opaque>(&form)) return op->fn != nullptr;
  const Combined c = to_combined(form);
  for (double v : {c.c0, c.c1, c.c2, c.log_u, c.log_1mu, c.inv_u, c.inv_1mu}) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

/// True when `a` may precede `b` in a sequence monotone in `dir`.
bool ordered(double a, double b, Direction dir) {
  if (dir == Direction::Unconstrained) return true;
  if (dir == Direction::NonIncreasing) std::swap(a, b);
  if (a <= b) return true;
  if (std::isfinite(a) && std::isfinite(b)) {
    return a - b <= kMonotoneSlack * (1.0 + std::max(std::abs(a), std::abs(b)));
  }
  return false;
}

/// Values of one segment in increasing x order, bracketing every extremum.
/// Returns false when an opaque declaration contradicts `dir` or its samples.
bool append_segment_values(const Segment& s, Direction dir, std::vector<double>& seq) {
  if (s.is_point()) {
    seq.push_back(evaluate(s.form, s.lo.x));
    return true;
  }
  const double lo = s.lo.x;
  const double hi = s.hi.x;
  seq.push_back(limit(s.form, lo));
  if (const auto* op = std::get_if<Opaque>(&s.form)) {
    const Direction declared = op->fn->declared;
    if (dir != Direction::Unconstrained && declared == flipped(dir)) return false;
    std::vector<double> xs;
    for (double p : default_grid().points) {
      if (p > lo && p < hi) xs.push_back(p);
    }
    for (int i = 1; i < kOpaqueUniformSamples; ++i) {
      xs.push_back(lo + (hi - lo) * i / kOpaqueUniformSamples);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (double x : xs) {
      if (x <= lo || x >= hi) continue;
      const double v = op->fn->evaluate(x);
      if (!std::isfinite(v)) return false;
      seq.push_back(v);
    }
  } else {
    const Combined c = to_combined(s.form);
    for (double r : critical_points(c, lo, hi)) seq.push_back(c(r));
  }
  seq.push_back(limit(s.form, hi));
  return true;
}

bool sequence_ordered(const std::vector<double>& seq, Direction dir) {
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    if (!ordered(seq[i], seq[i + 1], dir)) return false;
  }
  return true;
}

bool same_value(double limit, double value) {
  if (limit == value) return true;
  if (!std::isfinite(limit) || !std::isfinite(value)) return false;
  return std::abs(limit - value) <= 1e-12 * (1.0 + std::abs(value));
}

}  // namespace

bool Segment::contains(double x) const noexcept {
  const bool above = x > lo.x || (x == lo.x && lo_closed);
  const bool below = x < hi.x || (x == hi.x && hi_closed);
  return above && below;
}

ScoreFn::ScoreFn(std::vector<Segment> segments, ExtReal at0, ExtReal at1, Direction direction)
    : segments_(std::move(segments)), at0_(at0), at1_(at1), direction_(direction) {
  if (segments_.empty()) throw InvalidSegment("score function needs at least one segment");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const Segment& s = segments_[i];
    if (!(s.lo.x >= 0.0 && s.lo.x <= s.hi.x && s.hi.x <= 1.0)) {
      throw InvalidSegment("segment " + std::to_string(i) + " has bounds outside [0,1] or lo > hi");
    }
    if (s.is_point()) {
      if (!s.lo_closed || !s.hi_closed) {
        throw InvalidSegment("point segment " + std::to_string(i) + " must be closed");
      }
      if (s.lo.x <= 0.0 || s.lo.x >= 1.0) {
        throw InvalidSegment("point segments at 0 or 1 are given by the endpoint values");
      }
    }
    if (!finite_params(s.form)) {
      throw InvalidSegment("segment " + std::to_string(i) + " has non-finite parameters");
    }
    if (i + 1 < segments_.size()) {
      const Segment& next = segments_[i + 1];
      if (s.hi.x != next.lo.x) {
        throw InvalidSegment("gap or overlap between segments " + std::to_string(i) + " and " +
                             std::to_string(i + 1));
      }
      if (s.hi_closed == next.lo_closed) {
        throw InvalidSegment("breakpoint " + format_number(s.hi.x) +
                             " must belong to exactly one segment");
      }
    }
  }
  if (segments_.front().lo.x != 0.0 || segments_.back().hi.x != 1.0) {
    throw InvalidSegment("segments must cover [0,1]");
  }
  if (!std::isfinite(limit_at_zero(*this)) && at0_.is_finite()) {
    throw InvalidSegment("form diverges at 0; value at 0 must be -inf");
  }
  if (!std::isfinite(limit_at_one(*this)) && at1_.is_finite()) {
    throw InvalidSegment("form diverges at 1; value at 1 must be -inf");
  }
  if (direction_ != Direction::Unconstrained && !is_monotone(*this, direction_)) {
    throw NotMonotone(std::string("score function is not ") + to_string(direction_));
  }
}

ScoreFn ScoreFn::constant(double c, Direction direction) {
  return single(Constant{c}, c, c, direction);
}

ScoreFn ScoreFn::single(Form form, ExtReal at0, ExtReal at1, Direction direction) {
  std::vector<Segment> segs;
  segs.push_back(
      Segment{Breakpoint::at(0.0), Breakpoint::at(1.0), true, true, std::move(form)});
  return ScoreFn(std::move(segs), at0, at1, direction);
}

std::size_t ScoreFn::segment_index(double x) const {
  const auto it = std::partition_point(segments_.begin(), segments_.end(), [x](const Segment& s) {
    return s.hi.x < x || (s.hi.x == x && !s.hi_closed);
  });
  if (it == segments_.end()) throw DomainError("no segment owns " + format_number(x));
  return static_cast<std::size_t>(it - segments_.begin());
}

ExtReal ScoreFn::operator()(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("evaluation point outside [0,1]");
  if (x == 0.0) return at0_;
  if (x == 1.0) return at1_;
  const double v = evaluate(segments_[segment_index(x)].form, x);
  if (!std::isfinite(v)) {
    throw DomainError("score function is not finite at " + format_number(x));
  }
  return v;
}

bool ScoreFn::has_opaque() const noexcept {
  return std::any_of(segments_.begin(), segments_.end(),
                     [](const Segment& s) { return !is_closed_form(s.form); });
}

ScoreFn ScoreFn::with_direction(Direction d) const { return ScoreFn(segments_, at0_, at1_, d); }

bool segments_monotone(std::span<const Segment> segments, Direction dir) {
  if (dir == Direction::Unconstrained) return true;
  std::vector<double> seq;
  for (const Segment& s : segments) {
    if (!append_segment_values(s, dir, seq)) return false;
  }
  return sequence_ordered(seq, dir);
}

bool is_monotone(const ScoreFn& f, Direction dir) {
  if (dir == Direction::Unconstrained) return true;
  std::vector<double> seq{f.value_at_0().value()};
  for (const Segment& s : f.segments()) {
    if (!append_segment_values(s, dir, seq)) return false;
  }
  seq.push_back(f.value_at_1().value());
  return sequence_ordered(seq, dir);
}

double limit_at_zero(const ScoreFn& f) { return limit(f.segments().front().form, 0.0); }

double limit_at_one(const ScoreFn& f) { return limit(f.segments().back().form, 1.0); }

bool continuous_at_zero(const ScoreFn& f) {
  return same_value(limit_at_zero(f), f.value_at_0().value());
}

bool continuous_at_one(const ScoreFn& f) {
  return same_value(limit_at_one(f), f.value_at_1().value());
}

ScoreFn reflect(const ScoreFn& f) {
  std::vector<Segment> out;
  out.reserve(f.segments().size());
  for (auto it = f.segments().rbegin(); it != f.segments().rend(); ++it) {
    out.push_back(Segment{it->hi.reflected(), it->lo.reflected(), it->hi_closed, it->lo_closed,
                          reflect(it->form)});
  }
  return ScoreFn(std::move(out), f.value_at_1(), f.value_at_0(), flipped(f.direction()));
}

ScoreFn shifted(const ScoreFn& f, double k) {
  std::vector<Segment> out = f.segments();
  for (Segment& s : out) s.form = shift(s.form, k);
  return ScoreFn(std::move(out), f.value_at_0() + k, f.value_at_1() + k, f.direction());
}

std::vector<Segment> combine_segments(const ScoreFn& f, const ScoreFn& g, double sign) {
  std::vector<Breakpoint> breaks;
  for (const ScoreFn* fn : {&f, &g}) {
    for (const Segment& s : fn->segments()) {
      breaks.push_back(s.lo);
      breaks.push_back(s.hi);
    }
  }
  std::stable_sort(breaks.begin(), breaks.end(),
                   [](const Breakpoint& a, const Breakpoint& b) { return a.x < b.x; });
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](const Breakpoint& a, const Breakpoint& b) { return a.x == b.x; }),
               breaks.end());

  struct Atom {
    Breakpoint lo, hi;
    bool point;
    std::size_t fi, gi;
  };
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (i > 0) {
      const double p = breaks[i].x;
      atoms.push_back({breaks[i], breaks[i], true, f.segment_index(p), g.segment_index(p)});
    }
    const double mid = 0.5 * (breaks[i].x + breaks[i + 1].x);
    atoms.push_back(
        {breaks[i], breaks[i + 1], false, f.segment_index(mid), g.segment_index(mid)});
  }

  std::vector<Segment> out;
  std::size_t i = 0;
  while (i < atoms.size()) {
    std::size_t j = i;
    while (j + 1 < atoms.size() && atoms[j + 1].fi == atoms[i].fi &&
           atoms[j + 1].gi == atoms[i].gi) {
      ++j;
    }
    const Atom& first = atoms[i];
    const Atom& last = atoms[j];
    const Form& ff = f.segments()[first.fi].form;
    const Form& gf = g.segments()[first.gi].form;
    Segment seg{first.lo, last.hi, first.point, last.point, Constant{}};
    if (i == j && first.point) {
      const double p = first.lo.x;
      seg.form = Constant{evaluate(ff, p) + sign * evaluate(gf, p)};
    } else if (is_closed_form(ff) && is_closed_form(gf)) {
      seg.form = simplify(to_combined(ff) + sign * to_combined(gf));
    } else {
      auto value = [ff, gf, sign](double x) { return evaluate(ff, x) + sign * evaluate(gf, x); };
      auto lim = [&](double x) {
        const double a = limit(ff, x);
        const double b = sign * limit(gf, x);
        return std::isnan(a + b) ? std::numeric_limits<double>::quiet_NaN() : a + b;
      };
      seg.form = make_opaque(value, Direction::Unconstrained, seg.lo, seg.hi, lim(seg.lo.x),
                             lim(seg.hi.x));
    }
    out.push_back(std::move(seg));
    i = j + 1;
  }
  return out;
}

}  // namespace propscore
