#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "propscore/represent.hpp"

namespace propscore {

enum class CatalogName { LogRule, BrierRule, SphericalRule };

inline constexpr CatalogName kCatalogNames[] = {CatalogName::LogRule, CatalogName::BrierRule,
                                                 CatalogName::SphericalRule};

/// "log", "brier", "spherical"
const char* to_string(CatalogName name) noexcept;
std::optional<CatalogName> parse_catalog_name(std::string_view text) noexcept;

/// LogRule: (ln x, ln(1-x)). BrierRule: (-(1-x)^2, -x^2).
/// SphericalRule: the spherical score shifted by -1, with opaque components.
ScoringRule catalog_rule(CatalogName name);

/// One-line description, including any shift applied to the textbook form.
std::string catalog_notes(CatalogName name);

/// Spherical score components after the shift, on [0,1].
double spherical_truth(double x) noexcept;
double spherical_false(double x) noexcept;

/// Opaque form registered under `tag` restricted to [lo, hi]. Known tags are
/// `spherical_truth`, `spherical_false` and `reflect:<tag>`. Returns nullopt
/// for unknown tags.
std::optional<Opaque> opaque_from_tag(std::string_view tag, Breakpoint lo, Breakpoint hi);

}  // namespace propscore
