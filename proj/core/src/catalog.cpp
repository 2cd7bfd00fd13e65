#include "propscore/catalog.hpp"

#include <cmath>

namespace propscore {
namespace {

constexpr std::string_view kReflectPrefix = "reflect:";

double spherical_norm(double x) noexcept { return std::hypot(x, 1.0 - x); }

}  // namespace

const char* to_string(CatalogName name) noexcept {
  switch (name) {
    case CatalogName::LogRule:
      return "log";
    case CatalogName::BrierRule:
      return "brier";
    case CatalogName::SphericalRule:
      break;
  }
  return "spherical";
}

std::optional<CatalogName> parse_catalog_name(std::string_view text) noexcept {
  for (CatalogName n : kCatalogNames) {
    if (text == to_string(n)) return n;
  }
  return std::nullopt;
}

double spherical_truth(double x) noexcept { return x / spherical_norm(x) - 1.0; }
double spherical_false(double x) noexcept { return (1.0 - x) / spherical_norm(x) - 1.0; }

std::optional<Opaque> opaque_from_tag(std::string_view tag, Breakpoint lo, Breakpoint hi) {
  if (tag == "spherical_truth") {
    return make_opaque(&spherical_truth, Direction::NonDecreasing, lo, hi,
                       spherical_truth(lo.x), spherical_truth(hi.x), std::string(tag));
  }
  if (tag == "spherical_false") {
    return make_opaque(&spherical_false, Direction::NonIncreasing, lo, hi,
                       spherical_false(lo.x), spherical_false(hi.x), std::string(tag));
  }
  if (tag.starts_with(kReflectPrefix)) {
    auto inner = opaque_from_tag(tag.substr(kReflectPrefix.size()), hi.reflected(), lo.reflected());
    if (!inner) return std::nullopt;
    return std::get<Opaque>(reflect(Form{*inner}));
  }
  return std::nullopt;
}

ScoringRule catalog_rule(CatalogName name) {
  constexpr auto up = Direction::NonDecreasing;
  constexpr auto down = Direction::NonIncreasing;
  switch (name) {
    case CatalogName::LogRule:
      return {ScoreFn::single(LogForm{1.0, 0.0, 0.0}, kNegInf, 0.0, up),
              ScoreFn::single(LogForm{0.0, 1.0, 0.0}, 0.0, kNegInf, down), 0.0, 0.0,
              Provenance::Catalog};
    case CatalogName::BrierRule:
      return {ScoreFn::single(Quadratic{-1.0, 2.0, -1.0}, -1.0, 0.0, up),
              ScoreFn::single(Quadratic{-1.0, 0.0, 0.0}, 0.0, -1.0, down), 0.0, 0.0,
              Provenance::Catalog};
    case CatalogName::SphericalRule:
      break;
  }
  const Breakpoint lo = Breakpoint::at(0.0);
  const Breakpoint hi = Breakpoint::at(1.0);
  return {ScoreFn::single(*opaque_from_tag("spherical_truth", lo, hi), -1.0, 0.0, up),
          ScoreFn::single(*opaque_from_tag("spherical_false", lo, hi), 0.0, -1.0, down), 0.0,
          0.0, Provenance::Catalog};
}

std::string catalog_notes(CatalogName name) {
  switch (name) {
    case CatalogName::LogRule:
      return "logarithmic score (ln x, ln(1-x))";
    case CatalogName::BrierRule:
      return "quadratic score (-(1-x)^2, -x^2)";
    case CatalogName::SphericalRule:
      break;
  }
  return "spherical score (x/|v|, (1-x)/|v|) with |v| = sqrt(x^2+(1-x)^2), both components "
         "shifted by -1";
}

}  // namespace propscore
