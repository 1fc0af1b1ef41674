#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tfv/fields.hpp"
#include "tfv/types.hpp"

namespace tfv {

/// Axis-aligned sampling box plus an optional acceptance predicate for
/// excluded sets (margins around removed hypersurfaces etc.).
struct SampleBounds {
  Vec lo;
  Vec hi;
  std::function<bool(const Vec&)> keep;  // may be empty
};

/// Isometric embedding of a chart into a flat ambient space with diagonal
/// signature. quadric_sign: +1 when the image satisfies <P,P> = +1 (sphere),
/// -1 for <P,P> = -1 (hyperboloid upper sheet), 0 when the image is not a
/// centered quadric (trivial/flat embeddings).
struct Embedding {
  int ambient_dim = 0;
  AmbientMap map;
  Vec signature;
  double quadric_sign = 0;
};

enum class SpaceKind { intrinsic_chart, embedded };

struct ModelSpace {
  std::string name;
  int n = 0;
  SpaceKind kind = SpaceKind::intrinsic_chart;
  MetricField metric;  // for embedded spaces this is the pullback metric
  std::function<bool(const Vec&)> valid;
  SampleBounds bounds;
  std::optional<Embedding> embedding;

  bool is_valid(const Point& p) const { return p.dim() == n && (!valid || valid(p.x)); }
  void require_valid(const Point& p) const;
};

ModelSpace make_euclidean(int n);
ModelSpace make_uhs(int n);
ModelSpace make_hyperboloid(int n);
ModelSpace make_sphere(int n, bool north_chart);
ModelSpace make_twisted(int n);  // default twisting e^s
ModelSpace make_twisted(int n, ScalarField lambda, std::string name);

/// Factory by CLI name: euclidean | uhs | hyperboloid | sphere (north chart) |
/// sphere_north | sphere_south | twisted. Throws ConfigError on unknown name
/// or dimension outside [2, 8].
ModelSpace make_space(const std::string& name, int n);

/// All charts covered by a space name: "sphere" expands to both graph
/// charts, every other name to its single chart.
std::vector<ModelSpace> resolve_charts(const std::string& name, int n);

/// Signature-weighted ambient inner product.
double ambient_inner(const Embedding& e, const Vec& a, const Vec& b);

Vec embed_point(const ModelSpace& s, const Point& p);

/// m x n Jacobian dE/du of the embedding at p (exact differentiation).
Mat embedding_jacobian(const ModelSpace& s, const Point& p);

/// Project an ambient vector onto the tangent space at p and return chart
/// components. For quadric embeddings the normal is the position itself:
/// A_t = A - quadric_sign * <A, Phi> Phi. Throws InternalError when the
/// projected vector fails to lie in the Jacobian's column span.
TangentVector tangential_projection(const ModelSpace& s, const Vec& ambient_a, const Point& p);

/// Gauss-formula residual at p: ambient derivative of Y along X minus the
/// pushed-forward chart covariant derivative minus the second fundamental
/// form term -quadric_sign * <X,Y> Phi. Near zero for correct embeddings.
double gauss_consistency(const ModelSpace& s, const VectorField& X, const VectorField& Y,
                         const Point& p);

/// Deterministic rejection sampler over the given box/predicate intersected
/// with the chart validity region.
std::vector<Point> sample_points(const ModelSpace& s, int count, std::uint64_t seed,
                                 const SampleBounds& bounds);
std::vector<Point> sample_points(const ModelSpace& s, int count, std::uint64_t seed);

/// Convert a field given in ambient components (as a function of ambient
/// position) into a chart vector field. Components are recovered through a
/// least-squares solve against the embedding Jacobian; the residual doubles
/// as a tangency check and throws InternalError when it is not negligible.
VectorField chart_field_from_ambient(const ModelSpace& space, AmbientVectorField field);

}  // namespace tfv
