#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfv {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Base class for all recoverable engine errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A point left the chart's validity region (or a field's domain).
struct DomainError : Error {
  using Error::Error;
};

/// Bad user input: unknown space/field id, malformed flags, inconsistent
/// options.
struct ConfigError : Error {
  using Error::Error;
};

/// A numeric primitive failed (singular solve, rank-deficient least squares).
struct NumericError : Error {
  using Error::Error;
};

/// A geometric quantity is undefined at the query (degenerate 2-plane,
/// vanishing vector where a unit direction is required).
struct DegeneracyError : Error {
  using Error::Error;
};

/// Caller violated a documented precondition.
struct PreconditionError : Error {
  using Error::Error;
};

/// Internal invariant violated; indicates a bug, not bad input.
struct InternalError : Error {
  using Error::Error;
};

/// The gradient flow ran into a critical point of the potential.
struct CriticalPointError : Error {
  using Error::Error;
};

/// A chart point. Just a coordinate vector; which chart it lives in is
/// carried by context (the ModelSpace in play).
struct Point {
  Vec x;

  int dim() const { return static_cast<int>(x.size()); }
};

/// A tangent vector attached to a base point, components in chart coordinates.
struct TangentVector {
  Point base;
  Vec v;
};

/// A one-form attached to a base point, components in chart coordinates.
struct OneForm {
  Point base;
  Vec w;
};

/// Metric tensor evaluated at a point (symmetric positive definite).
struct MetricValue {
  Mat g;
};

/// Christoffel symbols of the second kind at a point, Gamma^k_{ij}
/// symmetric in (i, j). Stored flat, indexed (k, i, j).
struct ChristoffelValue {
  int n = 0;
  std::vector<double> gamma;  // size n^3

  ChristoffelValue() = default;
  explicit ChristoffelValue(int dim)
      : n(dim), gamma(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}

  double& operator()(int k, int i, int j) {
    return gamma[(static_cast<std::size_t>(k) * n + i) * n + j];
  }
  double operator()(int k, int i, int j) const {
    return gamma[(static_cast<std::size_t>(k) * n + i) * n + j];
  }
};

inline std::vector<double> to_std(const Vec& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

inline Vec to_eigen(const std::vector<double>& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = v[static_cast<std::size_t>(i)];
  return out;
}

}  // namespace tfv
