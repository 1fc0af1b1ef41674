#include "tfv/model_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tfv/linalg.hpp"
#include "tfv/rng.hpp"
#include "tfv/tensor_core.hpp"

namespace tfv {

namespace {

std::string point_str(const Vec& x) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

void check_dim(const std::string& name, int n) {
  if (n < 2 || n > 8)
    throw ConfigError("space " + name + ": dimension " + std::to_string(n) +
                      " outside supported range [2, 8]");
}

/// Pullback of the ambient flat metric through the embedding Jacobian,
/// J^T diag(signature) J, with the Jacobian taken by exact differentiation.
/// Spends one dual level, so it is evaluable up to depth 2.
MetricField pullback_metric(Embedding emb, int n) {
  return MetricField([emb, n](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    if constexpr (dual_depth_v<T> > 2) {
      throw InternalError("pullback metric: dual depth exhausted");
      return linalg::MatT<T>{};
    } else {
      const int m = emb.ambient_dim;
      std::vector<std::vector<T>> cols(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        auto Ei = emb.map(seeded(x, static_cast<std::size_t>(i)));
        auto& col = cols[static_cast<std::size_t>(i)];
        col.resize(static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k) col[static_cast<std::size_t>(k)] = Ei[static_cast<std::size_t>(k)].b;
      }
      linalg::MatT<T> g(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          T s = T(0);
          for (int k = 0; k < m; ++k)
            s += emb.signature[k] * (cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                                     cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]);
          g(i, j) = s;
          g(j, i) = s;
        }
      return g;
    }
  });
}

}  // namespace

void ModelSpace::require_valid(const Point& p) const {
  if (p.dim() != n)
    throw DomainError("space " + name + ": point has dimension " + std::to_string(p.dim()) +
                      ", chart has " + std::to_string(n));
  if (valid && !valid(p.x))
    throw DomainError("space " + name + ": point " + point_str(p.x) +
                      " outside the chart validity region");
}

ModelSpace make_euclidean(int n) {
  check_dim("euclidean", n);
  ModelSpace s;
  s.name = "euclidean";
  s.n = n;
  s.kind = SpaceKind::embedded;  // trivially embedded in itself
  s.metric = MetricField([n](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    (void)x;
    linalg::MatT<T> g(n, n);
    for (int i = 0; i < n; ++i) g(i, i) = T(1);
    return g;
  });
  s.valid = nullptr;
  s.bounds.lo = Vec::Constant(n, -3.0);
  s.bounds.hi = Vec::Constant(n, 3.0);
  Embedding e;
  e.ambient_dim = n;
  e.map = AmbientMap([](const auto& x) { return x; });
  e.signature = Vec::Ones(n);
  e.quadric_sign = 0;
  s.embedding = e;
  return s;
}

ModelSpace make_uhs(int n) {
  check_dim("uhs", n);
  ModelSpace s;
  s.name = "uhs";
  s.n = n;
  s.kind = SpaceKind::intrinsic_chart;
  s.metric = MetricField([n](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    linalg::MatT<T> g(n, n);
    T w = 1.0 / (x[static_cast<std::size_t>(n - 1)] * x[static_cast<std::size_t>(n - 1)]);
    for (int i = 0; i < n; ++i) g(i, i) = w;
    return g;
  });
  s.valid = [n](const Vec& x) { return x[n - 1] > 0; };
  s.bounds.lo = Vec::Constant(n, -3.0);
  s.bounds.hi = Vec::Constant(n, 3.0);
  s.bounds.lo[n - 1] = 0.1;
  s.bounds.hi[n - 1] = 10.0;
  return s;
}

ModelSpace make_hyperboloid(int n) {
  check_dim("hyperboloid", n);
  ModelSpace s;
  s.name = "hyperboloid";
  s.n = n;
  s.kind = SpaceKind::embedded;
  Embedding e;
  e.ambient_dim = n + 1;
  // upper sheet as a graph over the spatial coordinates:
  // u = (x_2, ..., x_{n+1}), x_1 = sqrt(1 + |u|^2)
  e.map = AmbientMap([n](const auto& x) {
    using std::sqrt;
    using T = typename std::decay_t<decltype(x)>::value_type;
    std::vector<T> P(static_cast<std::size_t>(n + 1));
    T s2 = T(0);
    for (int i = 0; i < n; ++i) s2 += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    P[0] = sqrt(1.0 + s2);
    for (int i = 0; i < n; ++i) P[static_cast<std::size_t>(i + 1)] = x[static_cast<std::size_t>(i)];
    return P;
  });
  e.signature = Vec::Ones(n + 1);
  e.signature[0] = -1.0;  // Lorentzian time direction
  e.quadric_sign = -1.0;
  s.metric = pullback_metric(e, n);
  s.embedding = e;
  s.valid = nullptr;
  s.bounds.lo = Vec::Constant(n, -3.0);
  s.bounds.hi = Vec::Constant(n, 3.0);
  return s;
}

ModelSpace make_sphere(int n, bool north_chart) {
  check_dim("sphere", n);
  ModelSpace s;
  s.name = north_chart ? "sphere_north" : "sphere_south";
  s.n = n;
  s.kind = SpaceKind::embedded;
  const double pole = north_chart ? 1.0 : -1.0;
  Embedding e;
  e.ambient_dim = n + 1;
  // graph chart over the open unit ball, pole on the last ambient axis
  e.map = AmbientMap([n, pole](const auto& x) {
    using std::sqrt;
    using T = typename std::decay_t<decltype(x)>::value_type;
    std::vector<T> P(static_cast<std::size_t>(n + 1));
    T s2 = T(0);
    for (int i = 0; i < n; ++i) {
      P[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
      s2 += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    }
    P[static_cast<std::size_t>(n)] = pole * sqrt(1.0 - s2);
    return P;
  });
  e.signature = Vec::Ones(n + 1);
  e.quadric_sign = 1.0;
  s.metric = pullback_metric(e, n);
  s.embedding = e;
  s.valid = [](const Vec& x) { return x.squaredNorm() < 1.0 - 1e-9; };
  // sampling keeps away from the equator: |x_pole| >= 0.1 <=> |u|^2 <= 0.99
  s.bounds.lo = Vec::Constant(n, -0.995);
  s.bounds.hi = Vec::Constant(n, 0.995);
  s.bounds.keep = [](const Vec& x) { return x.squaredNorm() <= 0.99; };
  return s;
}

ModelSpace make_twisted(int n, ScalarField lambda, std::string name) {
  check_dim(name, n);
  ModelSpace s;
  s.name = std::move(name);
  s.n = n;
  s.kind = SpaceKind::intrinsic_chart;
  // coordinates (s, q_1, ..., q_{n-1}); metric ds^2 + lambda(s,q)^2 * flat
  s.metric = MetricField([n, lambda](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    linalg::MatT<T> g(n, n);
    T l = lambda(x);
    T l2 = l * l;
    g(0, 0) = T(1);
    for (int i = 1; i < n; ++i) g(i, i) = l2;
    return g;
  });
  s.valid = nullptr;
  s.bounds.lo = Vec::Constant(n, -1.3);
  s.bounds.hi = Vec::Constant(n, 1.3);
  s.bounds.lo[0] = -1.0;
  s.bounds.hi[0] = 1.0;
  return s;
}

ModelSpace make_twisted(int n) {
  ScalarField lambda([](const auto& x) {
    using std::exp;
    return exp(x[0]);
  });
  return make_twisted(n, std::move(lambda), "twisted");
}

ModelSpace make_space(const std::string& name, int n) {
  if (name == "euclidean") return make_euclidean(n);
  if (name == "uhs") return make_uhs(n);
  if (name == "hyperboloid") return make_hyperboloid(n);
  if (name == "sphere" || name == "sphere_north") return make_sphere(n, true);
  if (name == "sphere_south") return make_sphere(n, false);
  if (name == "twisted") return make_twisted(n);
  throw ConfigError("unknown space '" + name +
                    "' (expected euclidean | uhs | hyperboloid | sphere | sphere_north | "
                    "sphere_south | twisted)");
}

std::vector<ModelSpace> resolve_charts(const std::string& name, int n) {
  if (name == "sphere") return {make_sphere(n, true), make_sphere(n, false)};
  return {make_space(name, n)};
}

double ambient_inner(const Embedding& e, const Vec& a, const Vec& b) {
  double s = 0;
  for (int k = 0; k < e.ambient_dim; ++k) s += e.signature[k] * a[k] * b[k];
  return s;
}

Vec embed_point(const ModelSpace& s, const Point& p) {
  if (!s.embedding) throw PreconditionError("space " + s.name + " has no embedding");
  s.require_valid(p);
  return to_eigen(s.embedding->map(to_std(p.x)));
}

Mat embedding_jacobian(const ModelSpace& s, const Point& p) {
  if (!s.embedding) throw PreconditionError("space " + s.name + " has no embedding");
  s.require_valid(p);
  const Embedding& e = *s.embedding;
  Mat J(e.ambient_dim, s.n);
  std::vector<double> x = to_std(p.x);
  for (int j = 0; j < s.n; ++j) {
    auto Ej = e.map(seeded(x, static_cast<std::size_t>(j)));
    for (int k = 0; k < e.ambient_dim; ++k) J(k, j) = Ej[static_cast<std::size_t>(k)].b;
  }
  return J;
}

TangentVector tangential_projection(const ModelSpace& s, const Vec& ambient_a, const Point& p) {
  if (!s.embedding) throw PreconditionError("space " + s.name + " has no embedding");
  const Embedding& e = *s.embedding;
  if (ambient_a.size() != e.ambient_dim)
    throw PreconditionError("tangential_projection: ambient vector has wrong dimension");
  Vec phi = embed_point(s, p);
  Vec at = ambient_a;
  if (e.quadric_sign != 0) at -= e.quadric_sign * ambient_inner(e, ambient_a, phi) * phi;
  Mat J = embedding_jacobian(s, p);
  Eigen::ColPivHouseholderQR<Mat> qr(J);
  Vec v = qr.solve(at);
  double resid = (J * v - at).norm();
  if (resid > 1e-8 * std::max(1.0, at.norm()))
    throw InternalError("tangential_projection: projected vector is not in the tangent span "
                        "(residual " +
                        std::to_string(resid) + ")");
  return {p, v};
}

double gauss_consistency(const ModelSpace& s, const VectorField& X, const VectorField& Y,
                         const Point& p) {
  if (!s.embedding) throw PreconditionError("space " + s.name + " has no embedding");
  const Embedding& e = *s.embedding;
  const int n = s.n;
  const int m = e.ambient_dim;
  s.require_valid(p);
  std::vector<double> x0 = to_std(p.x);

  // ambient image of Y as a function of the chart point: F(u) = dE(u) Y(u)
  auto F = [&](const auto& u) {
    using T = typename std::decay_t<decltype(u)>::value_type;
    auto Yu = Y(u);
    std::vector<T> out(static_cast<std::size_t>(m), T(0));
    for (int j = 0; j < n; ++j) {
      auto Ej = e.map(seeded(u, static_cast<std::size_t>(j)));
      for (int k = 0; k < m; ++k)
        out[static_cast<std::size_t>(k)] += Ej[static_cast<std::size_t>(k)].b * Yu[static_cast<std::size_t>(j)];
    }
    return out;
  };

  Vec Xp = to_eigen(X(x0));
  Vec Yp = to_eigen(Y(x0));

  // flat ambient derivative of E_*Y along X
  Vec lhs = Vec::Zero(m);
  for (int i = 0; i < n; ++i) {
    auto Fi = F(seeded(x0, static_cast<std::size_t>(i)));
    for (int k = 0; k < m; ++k) lhs[k] += Xp[i] * Fi[static_cast<std::size_t>(k)].b;
  }

  // tangential part: chart covariant derivative pushed forward
  TangentVector cov = covariant_derivative(s, X, Y, p);
  Mat J = embedding_jacobian(s, p);
  Vec rhs = J * cov.v;

  // second fundamental form of the quadric: h(X,Y) = -quadric_sign <X,Y> Phi
  if (e.quadric_sign != 0) {
    Mat g = metric_at(s, p).g;
    double xy = Xp.dot(g * Yp);
    rhs += -e.quadric_sign * xy * embed_point(s, p);
  }
  return (lhs - rhs).norm();
}

std::vector<Point> sample_points(const ModelSpace& s, int count, std::uint64_t seed,
                                 const SampleBounds& bounds) {
  if (count < 1) throw ConfigError("sample_points: count must be >= 1");
  if (bounds.lo.size() != s.n || bounds.hi.size() != s.n)
    throw ConfigError("sample_points: bounds dimension does not match chart dimension");
  Rng rng(seed);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(count));
  const long cap = 1000L * count + 1000;
  long attempts = 0;
  while (static_cast<int>(pts.size()) < count) {
    if (++attempts > cap)
      throw ConfigError("sample_points: feasible region for space " + s.name +
                        " looks empty (rejection cap hit)");
    Vec x(s.n);
    for (int i = 0; i < s.n; ++i) x[i] = rng.uniform(bounds.lo[i], bounds.hi[i]);
    if (bounds.keep && !bounds.keep(x)) continue;
    if (s.valid && !s.valid(x)) continue;
    pts.push_back(Point{x});
  }
  return pts;
}

std::vector<Point> sample_points(const ModelSpace& s, int count, std::uint64_t seed) {
  return sample_points(s, count, seed, s.bounds);
}

VectorField chart_field_from_ambient(const ModelSpace& space, AmbientVectorField field) {
  if (!space.embedding)
    throw PreconditionError("space " + space.name + " has no embedding for an ambient field");
  const Embedding e = *space.embedding;
  const int n = space.n;
  return VectorField([e, n, field](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    if constexpr (dual_depth_v<T> > 2) {
      throw InternalError("chart_field_from_ambient: dual depth exhausted");
      return std::vector<T>{};
    } else {
      const int m = e.ambient_dim;
      auto E = e.map(x);
      auto A = field(E);
      linalg::MatT<T> J(m, n);
      for (int j = 0; j < n; ++j) {
        auto Ej = e.map(seeded(x, static_cast<std::size_t>(j)));
        for (int k = 0; k < m; ++k) J(k, j) = Ej[static_cast<std::size_t>(k)].b;
      }
      double scale = 0;
      for (int k = 0; k < m; ++k) scale = std::max(scale, std::abs(value(A[static_cast<std::size_t>(k)])));
      double resid = 0;
      auto v = linalg::lstsq(J, A, &resid);
      if (resid > 1e-10 * std::max(1.0, scale))
        throw InternalError("ambient field is not tangent to " + std::string("the embedded chart") +
                            " (tangency residual " + std::to_string(resid) + ")");
      return v;
    }
  });
}

}  // namespace tfv
