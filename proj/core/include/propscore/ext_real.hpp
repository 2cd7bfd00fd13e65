#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <string>
#include <string_view>

#include "propscore/error.hpp"

namespace propscore {

/// A real number or negative infinity. Positive infinity and NaN are rejected.
///
/// Arithmetic follows the scoring convention: NEG_INF absorbs finite
/// addends, k * NEG_INF = NEG_INF for k > 0, and 0 * NEG_INF = 0.
class ExtReal {
 public:
  constexpr ExtReal() = default;

  // Implicit so that plain doubles flow into score arithmetic.
  ExtReal(double v) : v_(v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
      throw DomainError("ExtReal cannot hold +inf or NaN");
    }
  }

  static constexpr ExtReal neg_inf() noexcept {
    ExtReal r;
    r.v_ = -std::numeric_limits<double>::infinity();
    return r;
  }

  constexpr bool is_neg_inf() const noexcept {
    return v_ == -std::numeric_limits<double>::infinity();
  }
  constexpr bool is_finite() const noexcept { return !is_neg_inf(); }

  /// The value as a double; NEG_INF maps to -infinity.
  constexpr double value() const noexcept { return v_; }

  friend constexpr bool operator==(ExtReal a, ExtReal b) noexcept { return a.v_ == b.v_; }
  friend constexpr std::partial_ordering operator<=>(ExtReal a, ExtReal b) noexcept {
    return a.v_ <=> b.v_;
  }

  friend ExtReal operator+(ExtReal a, ExtReal b) noexcept {
    if (a.is_neg_inf() || b.is_neg_inf()) return neg_inf();
    return ExtReal::unchecked(a.v_ + b.v_);
  }

  /// Scaling by a non-negative weight, with 0 * NEG_INF = 0.
  friend ExtReal operator*(double k, ExtReal a) {
    if (k < 0.0 || std::isnan(k)) throw DomainError("ExtReal scale factor must be >= 0");
    if (a.is_neg_inf()) return k == 0.0 ? ExtReal(0.0) : neg_inf();
    return ExtReal(k * a.v_);
  }

  /// a - b; throws when the result would be +inf or undefined.
  friend ExtReal operator-(ExtReal a, ExtReal b) {
    if (b.is_neg_inf()) throw DomainError("subtracting NEG_INF is not representable");
    if (a.is_neg_inf()) return neg_inf();
    return ExtReal(a.v_ - b.v_);
  }

 private:
  static constexpr ExtReal unchecked(double v) noexcept {
    ExtReal r;
    r.v_ = v;
    return r;
  }

  double v_ = 0.0;
};

inline constexpr ExtReal kNegInf = ExtReal::neg_inf();

/// Shortest round-trippable text: 17 significant digits, `-inf` for NEG_INF.
std::string format_number(double v);
inline std::string format_number(ExtReal v) { return format_number(v.value()); }

/// Parses a decimal real or the literal `-inf`. Returns false on malformed text.
bool parse_ext_real(std::string_view text, ExtReal& out);

}  // namespace propscore
