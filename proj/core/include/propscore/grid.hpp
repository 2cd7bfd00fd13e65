#pragma once

#include <vector>

namespace propscore {

/// Deterministic probe grid on [0,1].
///
/// `n` uniform points i/(n-1), merged with 1/2 and the endpoint-accumulating
/// points 2^-k and 1 - 2^-k for k = 1..20. Endpoints 0 and 1 are dropped when
/// `include_endpoints` is false. Points are strictly increasing.
struct GridSpec {
  int n = 201;
  bool include_endpoints = true;
  std::vector<double> points;
};

inline constexpr int kDefaultGridN = 201;
inline constexpr int kAccumulationDepth = 20;

/// Throws ValueError when n < 3.
GridSpec make_grid(int n = kDefaultGridN, bool include_endpoints = true);

const GridSpec& default_grid();

}  // namespace propscore
