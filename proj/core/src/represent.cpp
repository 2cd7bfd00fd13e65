#include "propscore/represent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "propscore/error.hpp"
#include "propscore/quadrature.hpp"

namespace propscore {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBasePoint = 0.5;
constexpr int kTailDepth = 20;
constexpr double kTailTolerance = 1e-13;
constexpr double kGeometricRatio = 0.85;

/// Write-once cache in front of an expensive evaluator.
class Memo {
 public:
  explicit Memo(std::function<double(double)> f) : f_(std::move(f)) {}

  double operator()(double x) const {
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(x); it != cache_.end()) return it->second;
    }
    const double v = f_(x);
    std::lock_guard lock(mutex_);
    cache_.emplace(x, v);
    return v;
  }

 private:
  std::function<double(double)> f_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<double, double> cache_;
};

// Kernels: an antiderivative of the companion's derivative on one segment.
// For the false side F' = -x T'/(1-x); for the truth side T' = -(1-x) F'/x.
// Constants are dropped: the caller re-anchors at the segment's base point.

std::optional<Combined> false_kernel(const Combined& e) {
  if (e.inv_1mu != 0.0) return std::nullopt;
  Combined r;
  r.c1 = e.c1 + 2.0 * e.c2;
  r.c2 = e.c2;
  r.log_u = e.inv_u;
  r.log_1mu = e.c1 + 2.0 * e.c2 + e.log_u + e.log_1mu - e.inv_u;
  r.inv_1mu = e.log_1mu;
  return r;
}

std::optional<Combined> truth_kernel(const Combined& e) {
  if (e.inv_u != 0.0) return std::nullopt;
  Combined q;
  q.c1 = e.c1 - 2.0 * e.c2;
  q.c2 = e.c2;
  q.log_u = -e.c1 + e.log_u + e.log_1mu - e.inv_1mu;
  q.log_1mu = e.inv_1mu;
  q.inv_u = e.log_u;
  return q;
}

/// Which completion is being built. The companion at x is
///   C - moving(x, v(x)) + sigma * \int_{1/2}^x v(u) w(u) du
/// where v is the given component.
struct Side {
  Weight weight;
  double sigma;
  double special_end;  // endpoint governed by the continuity rule
  double plain_end;    // endpoint where the moving term vanishes
  Direction input_dir;
  Direction output_dir;
  std::optional<Combined> (*kernel)(const Combined&);

  double moving(double x, double v) const {
    return special_end == 1.0 ? x * v / (1.0 - x) : (1.0 - x) * v / x;
  }
};

constexpr Side kFalseSide{Weight::OneOver1MinusUSq,  1.0,  1.0, 0.0, Direction::NonDecreasing,
                          Direction::NonIncreasing, &false_kernel};
constexpr Side kTruthSide{Weight::OneOverUSq,        -1.0, 0.0, 1.0, Direction::NonIncreasing,
                          Direction::NonDecreasing, &truth_kernel};

double signed_integral(const ScoreFn& f, double from, double to, Weight w) {
  if (from == to) return 0.0;
  if (from < to) return integrate_weighted(f, from, to, w).value;
  return -integrate_weighted(f, to, from, w).value;
}

double signed_adaptive(const std::function<double(double)>& g, double from, double to, Weight w) {
  if (from == to) return 0.0;
  if (from < to) return integrate_adaptive(g, from, to, w).value;
  return -integrate_adaptive(g, to, from, w).value;
}

/// Limit of the companion at the special end:
///   base - moving(a, v_end) + sigma * \int_a^end (v(u) - v_end) w(u) du.
/// The integrand has one sign for monotone v, so the tail either converges or
/// diverges to -inf. It is summed over dyadic pieces toward the end; a
/// geometrically decaying tail is extrapolated, a non-decaying one diverges.
double special_limit(const Form& input, const Side& side, double base, double a) {
  const double end = side.special_end;
  const double v_end = limit(input, end);
  if (!std::isfinite(v_end)) {
    throw DomainError("input is not finite at " + format_number(end));
  }
  auto tail = [&input, v_end](double u) { return evaluate(input, u) - v_end; };
  std::vector<double> pieces;
  double sum = 0.0;
  double from = a;
  for (int k = 2; k <= kTailDepth; ++k) {
    const double h = std::ldexp(1.0, -k);
    const double to = end == 1.0 ? 1.0 - h : h;
    if (std::abs(end - to) >= std::abs(end - from)) continue;
    const double piece = side.sigma * signed_adaptive(tail, from, to, side.weight);
    pieces.push_back(piece);
    sum += piece;
    from = to;
  }
  const double head = base - side.moving(a, v_end);
  const std::size_t n = pieces.size();
  const double last = n > 0 ? pieces[n - 1] : 0.0;
  if (std::abs(last) <= kTailTolerance * (1.0 + std::abs(sum))) return head + sum;
  if (n >= 3 && pieces[n - 2] != 0.0 && pieces[n - 3] != 0.0) {
    const double r = last / pieces[n - 2];
    const double r_prev = pieces[n - 2] / pieces[n - 3];
    if (r > 0.0 && r <= kGeometricRatio && std::abs(r - r_prev) <= 0.1) {
      return head + sum + last * r / (1.0 - r);
    }
    if (r > kGeometricRatio && last < 0.0) return -kInf;
  }
  throw NonConvergence("limit at " + format_number(end) + " could not be classified");
}

double anchor_of(const Segment& s) {
  if (s.lo.x <= kBasePoint && kBasePoint <= s.hi.x) return kBasePoint;
  return s.hi.x < kBasePoint ? s.hi.x : s.lo.x;
}

/// Companion segment for an opaque input segment (or a closed form whose
/// kernel leaves the Combined family). Uses the cancellation-free form
///   C + J - moving(a, v(x)) + sigma * \int_a^x (v(u) - v(x)) w(u) du.
Form opaque_companion(const Segment& s, const Side& side, double base, double a) {
  const Form input = s.form;
  const Weight w = side.weight;
  const double sigma = side.sigma;

  auto stable = [input, side, base, a, w, sigma](double x, double vx) {
    auto diff = [&input, vx](double u) { return evaluate(input, u) - vx; };
    return base - side.moving(a, vx) + sigma * signed_adaptive(diff, a, x, w);
  };
  auto memo = std::make_shared<Memo>(
      [stable, input](double x) { return stable(x, evaluate(input, x)); });
  std::function<double(double)> value = [memo](double x) { return (*memo)(x); };

  auto limit_at = [&](double x) {
    if (x == side.plain_end) {
      auto plain = [&input](double u) { return evaluate(input, u); };
      return base + sigma * signed_adaptive(plain, a, x, w);
    }
    if (x == side.special_end) return special_limit(input, side, base, a);
    return stable(x, limit(input, x));
  };
  return make_opaque(value, side.output_dir, s.lo, s.hi, limit_at(s.lo.x), limit_at(s.hi.x));
}

struct Completion {
  ScoreFn input;
  ScoreFn companion;
};

Completion complete(const ScoreFn& given, double C, double c, const Side& side) {
  if (!std::isfinite(C)) throw ValueError("C must be finite");
  if (!(c >= 0.0) || !std::isfinite(c)) throw ValueError("c must be finite and >= 0");
  if (!is_monotone(given, side.input_dir)) {
    throw NotMonotone(std::string("input score function is not ") + to_string(side.input_dir));
  }

  std::vector<Segment> out;
  out.reserve(given.segments().size());
  for (const Segment& s : given.segments()) {
    Segment seg{s.lo, s.hi, s.lo_closed, s.hi_closed, Constant{}};
    if (s.is_point()) {
      const double p = s.lo.x;
      const double J = side.sigma * signed_integral(given, kBasePoint, p, side.weight);
      seg.form = Constant{C + J - side.moving(p, evaluate(s.form, p))};
      out.push_back(std::move(seg));
      continue;
    }
    const double a = anchor_of(s);
    const double base = C + side.sigma * signed_integral(given, kBasePoint, a, side.weight);
    std::optional<Combined> kernel;
    if (is_closed_form(s.form)) kernel = side.kernel(to_combined(s.form));
    if (kernel) {
      const double shift = base - (*kernel)(a) - side.moving(a, limit(s.form, a));
      Combined k = *kernel;
      k.c0 += shift;
      seg.form = simplify(k);
    } else {
      seg.form = opaque_companion(s, side, base, a);
    }
    out.push_back(std::move(seg));
  }

  const Segment& plain_seg = side.plain_end == 0.0 ? out.front() : out.back();
  const Segment& special_seg = side.special_end == 1.0 ? out.back() : out.front();
  const double plain_value = limit(plain_seg.form, side.plain_end);
  if (plain_value == kInf || std::isnan(plain_value)) {
    throw DomainError("completion diverges to +inf at " + format_number(side.plain_end));
  }

  const bool continuous = side.special_end == 1.0 ? continuous_at_one(given)
                                                  : continuous_at_zero(given);
  ExtReal special_value = kNegInf;
  if (continuous) {
    const double lim = limit(special_seg.form, side.special_end);
    if (lim == kInf || std::isnan(lim)) {
      throw DomainError("completion diverges to +inf at " + format_number(side.special_end));
    }
    special_value = ExtReal(lim) + (-c);
  }

  const ExtReal at0 = side.plain_end == 0.0 ? ExtReal(plain_value) : special_value;
  const ExtReal at1 = side.plain_end == 1.0 ? ExtReal(plain_value) : special_value;
  return {given.with_direction(side.input_dir),
          ScoreFn(std::move(out), at0, at1, side.output_dir)};
}

Provenance mirrored(Provenance p) {
  if (p == Provenance::DerivedFromT) return Provenance::DerivedFromF;
  if (p == Provenance::DerivedFromF) return Provenance::DerivedFromT;
  return p;
}

ScoreFn two_piece(double cut, bool left_owns_cut, double left, double right, ExtReal at0,
                  ExtReal at1, Direction dir) {
  std::vector<Segment> segs;
  segs.push_back(
      Segment{Breakpoint::at(0.0), Breakpoint::at(cut), true, left_owns_cut, Constant{left}});
  segs.push_back(
      Segment{Breakpoint::at(cut), Breakpoint::at(1.0), !left_owns_cut, true, Constant{right}});
  return ScoreFn(std::move(segs), at0, at1, dir);
}

ScoringRule indicator_a(const IndicatorA& k) {
  const double a = k.a;
  if (!(a >= 0.0 && a <= 1.0) || (k.closed && a == 0.0)) {
    throw InvalidInterval("IndicatorA needs A = [a,1] with a in (0,1] or (a,1] with a in [0,1]");
  }
  constexpr auto up = Direction::NonDecreasing;
  constexpr auto down = Direction::NonIncreasing;
  if (a == 1.0 && !k.closed) {  // A is empty
    return {ScoreFn::constant(0.0, up), ScoreFn::constant(0.0, down), 0.0, 0.0,
            Provenance::Catalog};
  }
  if (a == 1.0) {  // A = {1}
    return {ScoreFn::single(Constant{0.0}, 0.0, 1.0, up),
            ScoreFn::single(Constant{0.0}, 0.0, kNegInf, down), 0.0, 0.0, Provenance::Catalog};
  }
  const double level = a == 0.0 ? 0.0 : -(a / (1.0 - a));
  if (a == 0.0) {  // A = (0,1]
    return {ScoreFn::single(Constant{1.0}, 0.0, 1.0, up), ScoreFn::constant(0.0, down), 0.0, 0.0,
            Provenance::Catalog};
  }
  // [a,1] puts a in the right piece; (a,1] leaves it in the left one.
  const bool left_owns_cut = !k.closed;
  return {two_piece(a, left_owns_cut, 0.0, 1.0, 0.0, 1.0, up),
          two_piece(a, left_owns_cut, 0.0, level, 0.0, level, down), 0.0, 0.0,
          Provenance::Catalog};
}

ScoreFn neg_indicator_b(const NegIndicatorB& k) {
  const double b = k.b;
  if (!(b >= 0.0 && b <= 1.0)) throw InvalidInterval("NegIndicatorB needs b in [0,1]");
  constexpr auto up = Direction::NonDecreasing;
  if (b == 0.0) {
    return ScoreFn::single(Constant{0.0}, k.closed ? -1.0 : 0.0, 0.0, up);
  }
  if (b == 1.0) {
    return ScoreFn::single(Constant{-1.0}, -1.0, k.closed ? -1.0 : 0.0, up);
  }
  return two_piece(b, k.closed, -1.0, 0.0, -1.0, 0.0, up);
}

void add_compensated(double v, double& sum, double& comp) {
  const double t = sum + v;
  if (std::abs(sum) >= std::abs(v)) {
    comp += (sum - t) + v;
  } else {
    comp += (v - t) + sum;
  }
  sum = t;
}

LevelSet level_set_unchecked(const ScoreFn& T, double t) {
  if (T.value_at_1() <= ExtReal(t)) return {t, 1.0, LevelSet::Shape::ClosedRight};
  auto shape_at = [&T, t](double b) {
    return T(b).value() <= t ? LevelSet::Shape::ClosedRight : LevelSet::Shape::OpenRight;
  };
  const auto& segs = T.segments();
  for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
    const Segment& s = *it;
    const double lower = s.is_point() ? evaluate(s.form, s.lo.x) : limit(s.form, s.lo.x);
    if (lower > t) continue;
    const double upper = s.is_point() ? lower : limit(s.form, s.hi.x);
    if (upper <= t) return {t, s.hi.x, shape_at(s.hi.x)};
    double lo = s.lo.x;
    double hi = s.hi.x;
    for (int i = 0; i < 2000; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (evaluate(s.form, mid) <= t) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return {t, lo, shape_at(lo)};
  }
  return {t, 0.0, T.value_at_0() <= ExtReal(t) ? LevelSet::Shape::ClosedRight
                                                : LevelSet::Shape::OpenRight};
}

bool all_constant(const ScoreFn& T) {
  return std::all_of(T.segments().begin(), T.segments().end(),
                     [](const Segment& s) { return std::holds_alternative<Constant>(s.form); });
}

double layer_cake_steps(const ScoreFn& T, double x) {
  std::vector<double> levels{T.value_at_0().value(), T.value_at_1().value()};
  for (const Segment& s : T.segments()) levels.push_back(std::get<Constant>(s.form).c);
  std::erase_if(levels, [](double v) { return v > 0.0; });
  levels.push_back(0.0);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  if (std::isinf(levels.front())) {
    // Below every finite level, B_t = {y : T(y) = -inf}.
    if (level_set_unchecked(T, -std::numeric_limits<double>::max()).contains(x)) return -kInf;
    levels.erase(levels.begin());
  }
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    if (!level_set_unchecked(T, levels[i]).contains(x)) continue;
    // Width of the layer [levels[i], levels[i+1]) as an exact two-term sum.
    const double a = levels[i + 1];
    const double b = -levels[i];
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    add_compensated(-s, sum, comp);
    add_compensated(-err, sum, comp);
  }
  return sum + comp;
}

double layer_cake_adaptive(const ScoreFn& T, double x) {
  auto member = [&T, x](double t) { return level_set_unchecked(T, t).contains(x); };
  double t_in = 0.0;
  if (!member(t_in)) throw NotNonPositive("x is not in the level set at t = 0");
  double t_out = T.value_at_0().is_finite() ? T.value_at_0().value() - 1.0 : -1.0;
  while (member(t_out)) {
    t_out *= 2.0;
    if (!std::isfinite(t_out)) throw NonConvergence("level sets never exclude x");
  }
  // Membership of x in B_t is monotone in t, so the integrand is a single
  // step; refine the layer that contains the step.
  while (t_in - t_out > kLayerCakeTolerance) {
    const double mid = 0.5 * (t_in + t_out);
    if (mid <= t_out || mid >= t_in) break;
    if (member(mid)) {
      t_in = mid;
    } else {
      t_out = mid;
    }
  }
  return -(0.0 - 0.5 * (t_in + t_out));
}

}  // namespace

const char* to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::DerivedFromT:
      return "derived_from_t";
    case Provenance::DerivedFromF:
      return "derived_from_f";
    case Provenance::Catalog:
      return "catalog";
    case Provenance::UserSupplied:
      break;
  }
  return "user_supplied";
}

ScoringRule derive_false_score(const ScoreFn& T, double C, double c) {
  Completion done = complete(T, C, c, kFalseSide);
  return {std::move(done.input), std::move(done.companion), C, c, Provenance::DerivedFromT};
}

ScoringRule derive_truth_score(const ScoreFn& F, double C, double c) {
  Completion done = complete(F, C, c, kTruthSide);
  return {std::move(done.companion), std::move(done.input), C, c, Provenance::DerivedFromF};
}

ScoringRule derive_truth_score_by_reflection(const ScoreFn& F, double C, double c) {
  const ScoringRule mirrored_rule = derive_false_score(reflect(F), C, c);
  return {reflect(mirrored_rule.F), F.with_direction(Direction::NonIncreasing), C, c,
          Provenance::DerivedFromF};
}

ScoringRule reflect_rule(const ScoringRule& rule) {
  return {reflect(rule.F), reflect(rule.T), rule.C, rule.c, mirrored(rule.provenance)};
}

ScoringRule building_block_rule(const BuildingBlock& kind) {
  if (const auto* a = std::get_if<IndicatorA>(&kind)) return indicator_a(*a);
  return derive_false_score(neg_indicator_b(std::get<NegIndicatorB>(kind)), 0.0, 0.0);
}

LevelSet level_set(const ScoreFn& T, double t) {
  if (!is_monotone(T, Direction::NonDecreasing)) throw NotMonotone("T is not non-decreasing");
  return level_set_unchecked(T, t);
}

ScoreFn normalize_nonpositive(const ScoreFn& T) {
  if (!is_monotone(T, Direction::NonDecreasing)) throw NotMonotone("T is not non-decreasing");
  return shifted(T, -T.value_at_1().value());
}

ExtReal level_set_decomposition(const ScoreFn& T, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("x outside [0,1]");
  if (!is_monotone(T, Direction::NonDecreasing)) throw NotMonotone("T is not non-decreasing");
  if (T.value_at_1().value() > 1e-12) {
    throw NotNonPositive("sup T = " + format_number(T.value_at_1()) + " > 0; normalize first");
  }
  if (x == 0.0 && T.value_at_0().is_neg_inf()) return kNegInf;
  const double v = all_constant(T) ? layer_cake_steps(T, x) : layer_cake_adaptive(T, x);
  return std::isinf(v) ? kNegInf : ExtReal(v);
}

ConvexRep convex_rep(const ScoringRule& rule, const GridSpec& grid) {
  ConvexRep rep;
  rep.points = grid.points;
  auto g_at = [&rule](double p) { return (p * rule.T(p) + (1.0 - p) * rule.F(p)).value(); };
  for (double p : grid.points) {
    rep.G.push_back(g_at(p));
    rep.Gprime.push_back(rule.T(p).value() - rule.F(p).value());
  }
  for (std::size_t i = 0; i + 1 < grid.points.size(); ++i) {
    const double m = 0.5 * (grid.points[i] + grid.points[i + 1]);
    rep.midpoints.push_back(m);
    rep.G_mid.push_back(g_at(m));
  }
  return rep;
}

double midpoint_convexity_excess(const ConvexRep& rep) {
  double worst = -kInf;
  for (std::size_t i = 0; i < rep.midpoints.size(); ++i) {
    const double excess = rep.G_mid[i] - 0.5 * (rep.G[i] + rep.G[i + 1]);
    if (std::isnan(excess)) return kInf;
    worst = std::max(worst, excess);
  }
  return worst;
}

Reconstruction reconstruct(const ConvexRep& rep) {
  Reconstruction out;
  for (std::size_t i = 0; i < rep.points.size(); ++i) {
    const double p = rep.points[i];
    if (p <= 0.0 || p >= 1.0) continue;
    out.points.push_back(p);
    out.T.push_back(rep.G[i] + (1.0 - p) * rep.Gprime[i]);
    out.F.push_back(rep.G[i] - p * rep.Gprime[i]);
  }
  return out;
}

}  // namespace propscore
