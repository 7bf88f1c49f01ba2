#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace nlfp {

/// Cell-centered grid on [-L, L] with N equal cells.
struct SpatialGrid {
  double L = 8.0;
  std::size_t n_cells = 400;

  double h() const { return 2.0 * L / (double)n_cells; }
  double x(std::size_t i) const { return -L + ((double)i + 0.5) * h(); }
  bool operator==(const SpatialGrid&) const = default;
};

/// Sampled function on a SpatialGrid. Densities carry midpoint mass
/// sum(values) * h; signed fields are permitted where documented.
struct Field1D {
  SpatialGrid grid;
  std::vector<double> values;

  Field1D() = default;
  Field1D(SpatialGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.n_cells)
      throw std::invalid_argument("Field1D: value count does not match grid");
  }

  double mass() const {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum * grid.h();
  }
  double min_value() const {
    double m = values.empty() ? 0.0 : values[0];
    for (double v : values) m = v < m ? v : m;
    return m;
  }
};

}  // namespace nlfp
