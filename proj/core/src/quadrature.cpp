#include "propscore/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <utility>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "propscore/error.hpp"

namespace propscore {
namespace {

constexpr int kMaxPanels = 400;
constexpr double kPanelTolerance = 1e-13;
constexpr int kDyadicDepth = 60;

std::string interval_text(double lo, double hi) {
  return "[" + format_number(lo) + ", " + format_number(hi) + "]";
}

void check_interval(double lo, double hi, Weight weight) {
  if (!(lo >= 0.0 && lo <= hi && hi <= 1.0)) {
    throw DomainError("integration interval " + interval_text(lo, hi) + " is not inside [0,1]");
  }
  if (weight == Weight::OneOver1MinusUSq && hi >= 1.0) {
    throw DomainError("weight 1/(1-u)^2 is singular inside " + interval_text(lo, hi));
  }
  if (weight == Weight::OneOverUSq && lo <= 0.0) {
    throw DomainError("weight 1/u^2 is singular inside " + interval_text(lo, hi));
  }
}

double antiderivative_one_minus(const Combined& c, double u) {
  const double w = 1.0 - u;
  const double lw = std::log1p(-u);
  double v = c.c0 / w + c.c1 * (1.0 / w + lw) + c.c2 * (1.0 / w + 2.0 * lw - w);
  if (c.log_u != 0.0 && u > 0.0) v += c.log_u * (u * std::log(u) / w + lw);
  if (c.log_1mu != 0.0) v += c.log_1mu * (lw / w + 1.0 / w);
  if (c.inv_u != 0.0) {
    if (u <= 0.0) throw DomainError("integral of 1/u against 1/(1-u)^2 diverges at 0");
    v += c.inv_u * (std::log(u) - lw + 1.0 / w);
  }
  if (c.inv_1mu != 0.0) v += c.inv_1mu / (2.0 * w * w);
  return v;
}

double antiderivative_u(const Combined& c, double u) {
  const double lu = std::log(u);
  double v = -c.c0 / u + c.c1 * lu + c.c2 * u;
  if (c.log_u != 0.0) v += c.log_u * (-(lu + 1.0) / u);
  if (c.log_1mu != 0.0 && u < 1.0) v += c.log_1mu * (-std::log1p(-u) * (1.0 - u) / u - lu);
  if (c.inv_u != 0.0) v += -c.inv_u / (2.0 * u * u);
  if (c.inv_1mu != 0.0) {
    if (u >= 1.0) throw DomainError("integral of 1/(1-u) against 1/u^2 diverges at 1");
    v += c.inv_1mu * (-1.0 / u + lu - std::log1p(-u));
  }
  return v;
}

struct Leaf {
  double a;
  double b;
  double value;
  double err;
  bool operator<(const Leaf& o) const noexcept { return err < o.err; }
};

/// One GK15 panel on [a, b], evaluated on the reference interval [-1, 1].
/// Boost 1.74 reports panel errors without the interval scale, so panels are
/// always mapped before the rule is applied and subdivision is done here.
template <class F>
Leaf panel(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      [&f, mid, half](double t) { return half * f(mid + half * t); }, -1.0, 1.0, 0, 0.0, &err);
  return {a, b, v, err};
}

/// Globally adaptive GK15: bisect the panel with the largest error estimate.
template <class F>
std::pair<double, double> gk15(const F& f, double a, double b) {
  std::priority_queue<Leaf> heap;
  heap.push(panel(f, a, b));
  double total = heap.top().value;
  double err = heap.top().err;
  for (int i = 0; i < kMaxPanels && err > kPanelTolerance * (1.0 + std::abs(total)); ++i) {
    const Leaf worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    const Leaf left = panel(f, worst.a, mid);
    const Leaf right = panel(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
  }
  total = 0.0;
  err = 0.0;
  for (; !heap.empty(); heap.pop()) {
    total += heap.top().value;
    err += heap.top().err;
  }
  return {total, err};
}

}  // namespace

double weighted_antiderivative(const Combined& c, double u, Weight weight) {
  return weight == Weight::OneOver1MinusUSq ? antiderivative_one_minus(c, u)
                                            : antiderivative_u(c, u);
}

WeightedIntegral integrate_adaptive(const std::function<double(double)>& g, double lo, double hi,
                                    Weight weight) {
  check_interval(lo, hi, weight);
  if (lo == hi) return {0.0, false, 0.0};

  std::vector<double> cuts{lo, hi};
  for (int k = 1; k <= kDyadicDepth; ++k) {
    const double h = std::ldexp(1.0, -k);
    for (double p : {h, 1.0 - h}) {
      if (p > lo && p < hi) cuts.push_back(p);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double p = cuts[i];
    const double q = cuts[i + 1];
    std::pair<double, double> piece;
    try {
      if (weight == Weight::OneOver1MinusUSq) {
        if (p >= 0.5) {
          // v = 1/(1-u): g(u) du / (1-u)^2 = g(1 - 1/v) dv
          piece = gk15([&g](double v) { return g(1.0 - 1.0 / v); }, 1.0 / (1.0 - p),
                       1.0 / (1.0 - q));
        } else {
          piece = gk15([&g](double u) { return g(u) / ((1.0 - u) * (1.0 - u)); }, p, q);
        }
      } else {
        if (q <= 0.5) {
          // v = 1/u: g(u) du / u^2 = -g(1/v) dv
          piece = gk15([&g](double v) { return g(1.0 / v); }, 1.0 / q, 1.0 / p);
        } else {
          piece = gk15([&g](double u) { return g(u) / (u * u); }, p, q);
        }
      }
    } catch (const std::exception& e) {
      throw NonConvergence("adaptive quadrature failed on " + interval_text(p, q) + ": " +
                           e.what());
    }
    total += piece.first;
    total_err += piece.second;
  }
  if (!std::isfinite(total) || total_err > kAdaptiveTolerance * (1.0 + std::abs(total))) {
    throw NonConvergence("adaptive quadrature on " + interval_text(lo, hi) +
                         " did not reach tolerance (error estimate " + format_number(total_err) +
                         ")");
  }
  return {total, false, total_err};
}

WeightedIntegral integrate_form(const Form& form, double lo, double hi, Weight weight) {
  check_interval(lo, hi, weight);
  if (const auto* op = std::get_if<Opaque>(&form)) {
    return integrate_adaptive(op->fn->evaluate, lo, hi, weight);
  }
  if (lo == hi) return {};
  const Combined c = to_combined(form);
  return {weighted_antiderivative(c, hi, weight) - weighted_antiderivative(c, lo, weight), true,
          0.0};
}

WeightedIntegral integrate_weighted(const ScoreFn& f, double lo, double hi, Weight weight) {
  check_interval(lo, hi, weight);
  WeightedIntegral out;
  for (const Segment& s : f.segments()) {
    if (s.is_point()) continue;
    const double a = std::max(lo, s.lo.x);
    const double b = std::min(hi, s.hi.x);
    if (!(a < b)) continue;
    const WeightedIntegral part = integrate_form(s.form, a, b, weight);
    out.value += part.value;
    out.exact = out.exact && part.exact;
    out.est_error += part.est_error;
  }
  return out;
}

}  // namespace propscore
