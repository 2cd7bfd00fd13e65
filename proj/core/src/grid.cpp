#include "propscore/grid.hpp"

#include <algorithm>
#include <cmath>

#include "propscore/error.hpp"

namespace propscore {

GridSpec make_grid(int n, bool include_endpoints) {
  if (n < 3) throw ValueError("grid needs n >= 3 points, got " + std::to_string(n));
  GridSpec g{n, include_endpoints, {}};
  g.points.reserve(static_cast<std::size_t>(n) + 2 * kAccumulationDepth + 1);
  for (int i = 0; i < n; ++i) g.points.push_back(static_cast<double>(i) / (n - 1));
  g.points.push_back(0.5);
  for (int k = 1; k <= kAccumulationDepth; ++k) {
    const double h = std::ldexp(1.0, -k);
    g.points.push_back(h);
    g.points.push_back(1.0 - h);
  }
  std::sort(g.points.begin(), g.points.end());
  g.points.erase(std::unique(g.points.begin(), g.points.end()), g.points.end());
  if (!include_endpoints) {
    std::erase_if(g.points, [](double p) { return p <= 0.0 || p >= 1.0; });
  }
  return g;
}

const GridSpec& default_grid() {
  static const GridSpec grid = make_grid();
  return grid;
}

}  // namespace propscore
