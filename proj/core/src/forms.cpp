#include "propscore/forms.hpp"

#include <cmath>
#include <limits>

#include "polynomial.hpp"
#include "propscore/error.hpp"

namespace propscore {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double log_term(double coeff, double value) noexcept { return coeff == 0.0 ? 0.0 : coeff * value; }

double combined_limit_at_zero(const Combined& c) noexcept {
  if (c.inv_u != 0.0) return std::copysign(kInf, c.inv_u);
  if (c.log_u != 0.0) return c.log_u > 0.0 ? -kInf : kInf;
  return c.c0 + c.inv_1mu;
}

double combined_limit_at_one(const Combined& c) noexcept {
  if (c.inv_1mu != 0.0) return std::copysign(kInf, c.inv_1mu);
  if (c.log_1mu != 0.0) return c.log_1mu > 0.0 ? -kInf : kInf;
  return c.c0 + c.c1 + c.c2 + c.inv_u;
}

}  // namespace

Direction flipped(Direction d) noexcept {
  switch (d) {
    case Direction::NonDecreasing:
      return Direction::NonIncreasing;
    case Direction::NonIncreasing:
      return Direction::NonDecreasing;
    case Direction::Unconstrained:
      break;
  }
  return Direction::Unconstrained;
}

const char* to_string(Direction d) noexcept {
  switch (d) {
    case Direction::NonDecreasing:
      return "nondecreasing";
    case Direction::NonIncreasing:
      return "nonincreasing";
    case Direction::Unconstrained:
      break;
  }
  return "unconstrained";
}

double Combined::operator()(double u) const noexcept {
  double v = c0 + u * (c1 + u * c2);
  if (log_u != 0.0) v += log_u * std::log(u);
  if (log_1mu != 0.0) v += log_1mu * std::log1p(-u);
  if (inv_u != 0.0) v += inv_u / u;
  if (inv_1mu != 0.0) v += inv_1mu / (1.0 - u);
  return v;
}

double Combined::derivative(double u) const noexcept {
  const double w = 1.0 - u;
  return c1 + 2.0 * c2 * u + log_u / u - log_1mu / w - inv_u / (u * u) + inv_1mu / (w * w);
}

Combined operator+(const Combined& a, const Combined& b) noexcept {
  return {a.c0 + b.c0,       a.c1 + b.c1,           a.c2 + b.c2,          a.log_u + b.log_u,
          a.log_1mu + b.log_1mu, a.inv_u + b.inv_u, a.inv_1mu + b.inv_1mu};
}

Combined operator*(double k, const Combined& a) noexcept {
  return {k * a.c0, k * a.c1, k * a.c2, k * a.log_u, k * a.log_1mu, k * a.inv_u, k * a.inv_1mu};
}

Opaque make_opaque(std::function<double(double)> evaluate, Direction declared, Breakpoint lo,
                   Breakpoint hi, double limit_lo, double limit_hi, std::string tag) {
  if (!evaluate) throw InvalidSegment("opaque segment needs an evaluator");
  auto fn = std::make_shared<OpaqueFunction>();
  fn->evaluate = std::move(evaluate);
  fn->declared = declared;
  fn->lo = lo;
  fn->hi = hi;
  fn->limit_lo = limit_lo;
  fn->limit_hi = limit_hi;
  fn->tag = std::move(tag);
  return Opaque{std::move(fn)};
}

bool is_closed_form(const Form& f) noexcept { return !std::holds_alternative<Opaque>(f); }

Combined to_combined(const Form& f) {
  return std::visit(
      Overloaded{
          [](const Constant& k) { return Combined{.c0 = k.c}; },
          [](const Affine& k) { return Combined{.c0 = k.b, .c1 = k.a}; },
          [](const LogForm& k) { return Combined{.c0 = k.c, .log_u = k.a, .log_1mu = k.b}; },
          [](const Quadratic& k) { return Combined{.c0 = k.c, .c1 = k.b, .c2 = k.a}; },
          [](const Combined& k) { return k; },
          [](const Opaque&) -> Combined {
            throw InvalidSegment("opaque segment has no closed form");
          },
      },
      f);
}

Form simplify(const Combined& c) {
  if (c.inv_u != 0.0 || c.inv_1mu != 0.0) return c;
  if (c.log_u == 0.0 && c.log_1mu == 0.0) {
    if (c.c2 != 0.0) return Quadratic{c.c2, c.c1, c.c0};
    if (c.c1 != 0.0) return Affine{c.c1, c.c0};
    return Constant{c.c0};
  }
  if (c.c1 == 0.0 && c.c2 == 0.0) return LogForm{c.log_u, c.log_1mu, c.c0};
  return c;
}

double evaluate(const Form& f, double u) {
  return std::visit(
      Overloaded{
          [](const Constant& k) { return k.c; },
          [u](const Affine& k) { return k.a * u + k.b; },
          [u](const LogForm& k) {
            return log_term(k.a, std::log(u)) + log_term(k.b, std::log1p(-u)) + k.c;
          },
          [u](const Quadratic& k) { return (k.a * u + k.b) * u + k.c; },
          [u](const Combined& k) { return k(u); },
          [u](const Opaque& k) { return k.fn->evaluate(u); },
      },
      f);
}

double limit(const Form& f, double u) {
  if (const auto* op = std::get_if<Opaque>(&f)) {
    if (u == op->fn->lo.x) return op->fn->limit_lo;
    if (u == op->fn->hi.x) return op->fn->limit_hi;
    return op->fn->evaluate(u);
  }
  if (u > 0.0 && u < 1.0) return evaluate(f, u);
  const Combined c = to_combined(f);
  return u <= 0.0 ? combined_limit_at_zero(c) : combined_limit_at_one(c);
}

Form reflect(const Form& f) {
  return std::visit(
      Overloaded{
          [](const Constant& k) -> Form { return k; },
          [](const Affine& k) -> Form { return Affine{-k.a, k.a + k.b}; },
          [](const LogForm& k) -> Form { return LogForm{k.b, k.a, k.c}; },
          [](const Quadratic& k) -> Form {
            return Quadratic{k.a, -2.0 * k.a - k.b, k.a + k.b + k.c};
          },
          [](const Combined& k) -> Form {
            return Combined{k.c0 + k.c1 + k.c2, -k.c1 - 2.0 * k.c2, k.c2, k.log_1mu,
                            k.log_u,           k.inv_1mu,           k.inv_u};
          },
          [](const Opaque& k) -> Form {
            const auto& src = *k.fn;
            auto eval = src.evaluate;
            return make_opaque([eval](double u) { return eval(1.0 - u); }, flipped(src.declared),
                               src.hi.reflected(), src.lo.reflected(), src.limit_hi, src.limit_lo,
                               src.tag.empty() ? std::string{} : "reflect:" + src.tag);
          },
      },
      f);
}

Form shift(const Form& f, double k) {
  return std::visit(
      Overloaded{
          [k](const Constant& s) -> Form { return Constant{s.c + k}; },
          [k](const Affine& s) -> Form { return Affine{s.a, s.b + k}; },
          [k](const LogForm& s) -> Form { return LogForm{s.a, s.b, s.c + k}; },
          [k](const Quadratic& s) -> Form { return Quadratic{s.a, s.b, s.c + k}; },
          [k](const Combined& s) -> Form {
            Combined out = s;
            out.c0 += k;
            return out;
          },
          [k](const Opaque& s) -> Form {
            const auto& src = *s.fn;
            auto eval = src.evaluate;
            return make_opaque([eval, k](double u) { return eval(u) + k; }, src.declared, src.lo,
                               src.hi, src.limit_lo + k, src.limit_hi + k);
          },
      },
      f);
}

std::vector<double> critical_points(const Combined& c, double lo, double hi) {
  using detail::Poly;
  // f'(u) * u^2 (1-u)^2, a polynomial of degree <= 5 with the same sign as f'.
  const Poly one_minus_sq{1.0, -2.0, 1.0};
  const Poly u_sq{0.0, 0.0, 1.0};
  const Poly u_one_minus_sq{0.0, 1.0, -2.0, 1.0};
  const Poly u_sq_one_minus{0.0, 0.0, 1.0, -1.0};
  const Poly u_sq_one_minus_sq{0.0, 0.0, 1.0, -2.0, 1.0};

  Poly p = detail::multiply(Poly{c.c1, 2.0 * c.c2}, u_sq_one_minus_sq);
  p = detail::add(p, detail::scale(c.log_u, u_one_minus_sq));
  p = detail::add(p, detail::scale(-c.log_1mu, u_sq_one_minus));
  p = detail::add(p, detail::scale(-c.inv_u, one_minus_sq));
  p = detail::add(p, detail::scale(c.inv_1mu, u_sq));
  return detail::real_roots(std::move(p), lo, hi);
}

}  // namespace propscore
