#include "polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace propscore::detail {
namespace {

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0.0) p.pop_back();
}

int sign(double v) noexcept { return (v > 0.0) - (v < 0.0); }

double bisect(const Poly& p, double a, double b) {
  int sa = sign(evaluate(p, a));
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const int sm = sign(evaluate(p, m));
    if (sm == 0) return m;
    if (sm == sa) {
      a = m;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

Poly multiply(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Poly add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Poly scale(double k, const Poly& a) {
  Poly out(a);
  for (double& c : out) c *= k;
  return out;
}

Poly derivative(const Poly& p) {
  if (p.size() <= 1) return {};
  Poly out(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) out[i - 1] = static_cast<double>(i) * p[i];
  return out;
}

double evaluate(const Poly& p, double x) noexcept {
  double acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<double> real_roots(Poly p, double lo, double hi) {
  trim(p);
  std::vector<double> roots;
  if (p.size() <= 1 || !(lo < hi)) return roots;
  if (p.size() == 2) {
    const double r = -p[0] / p[1];
    if (r > lo && r < hi) roots.push_back(r);
    return roots;
  }

  std::vector<double> knots{lo};
  for (double c : real_roots(derivative(p), lo, hi)) knots.push_back(c);
  knots.push_back(hi);

  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i];
    const double b = knots[i + 1];
    const double fa = evaluate(p, a);
    const double fb = evaluate(p, b);
    if (fa == 0.0 && a > lo && a < hi) roots.push_back(a);
    if (sign(fa) * sign(fb) < 0) roots.push_back(bisect(p, a, b));
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

}  // namespace propscore::detail
