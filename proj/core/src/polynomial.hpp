#pragma once

#include <vector>

namespace propscore::detail {

/// Dense polynomial, coefficients from the constant term upward.
using Poly = std::vector<double>;

Poly multiply(const Poly& a, const Poly& b);
Poly add(const Poly& a, const Poly& b);
Poly scale(double k, const Poly& a);
Poly derivative(const Poly& p);
double evaluate(const Poly& p, double x) noexcept;

/// Sign-changing real roots of p inside the open interval (lo, hi), sorted.
/// Roots of the derivative isolate monotone pieces, each bisected to full
/// precision; touching roots without a sign change may be omitted.
std::vector<double> real_roots(Poly p, double lo, double hi);

}  // namespace propscore::detail
