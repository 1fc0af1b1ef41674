#pragma once

// Small independent helpers for the unit tests: plain central differences
// (never routed through the library's own differentiation) and point utilities.

#include <functional>
#include <vector>

#include "tfv/types.hpp"

namespace oracles {

inline tfv::Point pt(std::initializer_list<double> xs) {
  tfv::Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return tfv::Point{v};
}

// d/dx_i of a scalar function of a coordinate vector, central difference.
inline double fd_partial(const std::function<double(const std::vector<double>&)>& f,
                         std::vector<double> x, int i, double h = 1e-6) {
  x[i] += h;
  const double up = f(x);
  x[i] -= 2 * h;
  const double dn = f(x);
  return (up - dn) / (2 * h);
}

}  // namespace oracles
