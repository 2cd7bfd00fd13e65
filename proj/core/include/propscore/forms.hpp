#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace propscore {

enum class Direction { NonDecreasing, NonIncreasing, Unconstrained };

Direction flipped(Direction d) noexcept;
const char* to_string(Direction d) noexcept;

/// A breakpoint in [0,1] that carries its complement 1 - x.
///
/// Reflection swaps the two fields, so reflecting twice restores the exact
/// bit pattern even when 1 - (1 - x) != x in floating point.
struct Breakpoint {
  double x = 0.0;
  double complement = 1.0;

  static Breakpoint at(double x) noexcept { return {x, 1.0 - x}; }
  Breakpoint reflected() const noexcept { return {complement, x}; }
};

struct Constant {
  double c = 0.0;
};

/// a*u + b
struct Affine {
  double a = 0.0;
  double b = 0.0;
};

/// a*ln(u) + b*ln(1-u) + c
struct LogForm {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// a*u^2 + b*u + c
struct Quadratic {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// c0 + c1*u + c2*u^2 + log_u*ln(u) + log_1mu*ln(1-u) + inv_u/u + inv_1mu/(1-u)
///
/// The smallest family containing the four named forms that is closed under
/// reflection and under the companion construction (see represent.hpp). All
/// closed-form arithmetic happens here; the named forms are views of it.
struct Combined {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double log_u = 0.0;
  double log_1mu = 0.0;
  double inv_u = 0.0;
  double inv_1mu = 0.0;

  double operator()(double u) const noexcept;
  /// Derivative at u in (0,1).
  double derivative(double u) const noexcept;

  friend Combined operator+(const Combined& a, const Combined& b) noexcept;
  friend Combined operator*(double k, const Combined& a) noexcept;
  friend bool operator==(const Combined&, const Combined&) = default;
};

/// A black-box segment function with declared behaviour.
///
/// `evaluate` must be finite and continuous on the open interval (lo, hi).
/// The one-sided limits at lo and hi are declared, not inferred; they may be
/// -inf (or +inf for functions that are not score components).
struct OpaqueFunction {
  std::function<double(double)> evaluate;
  Direction declared = Direction::Unconstrained;
  Breakpoint lo;
  Breakpoint hi;
  double limit_lo = 0.0;
  double limit_hi = 0.0;
  /// Registry name used by the rule-spec format; empty when not serializable.
  std::string tag;
};

struct Opaque {
  std::shared_ptr<const OpaqueFunction> fn;
};

using Form = std::variant<Constant, Affine, LogForm, Quadratic, Combined, Opaque>;

Opaque make_opaque(std::function<double(double)> evaluate, Direction declared, Breakpoint lo,
                   Breakpoint hi, double limit_lo, double limit_hi, std::string tag = {});

bool is_closed_form(const Form& f) noexcept;

/// Throws InvalidSegment for Opaque.
Combined to_combined(const Form& f);

/// The most specific named form that represents `c` exactly.
Form simplify(const Combined& c);

/// Value at u in (0,1).
double evaluate(const Form& f, double u);

/// One-sided limit at u from inside the form's domain; +-inf when divergent.
/// For u in (0,1) this is the value at u (closed forms are continuous there).
double limit(const Form& f, double u);

/// g(u) = f(1 - u), transformed in closed form where possible.
Form reflect(const Form& f);

/// f + k
Form shift(const Form& f, double k);

/// Points in (lo, hi) where the derivative of `c` changes sign. Every local
/// extremum of `c` in the open interval is included; extra points are harmless.
std::vector<double> critical_points(const Combined& c, double lo, double hi);

}  // namespace propscore
