#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "tfv/rng.hpp"
#include "tfv/tensor_core.hpp"

using namespace tfv;

namespace {

TangentVector tv(const Point& p, std::initializer_list<double> c) {
  return TangentVector{p, to_eigen(std::vector<double>(c))};
}

// Closed form for the upper half-space: Gamma^k_ij = -(d_jk d_in + d_ik d_jn
// - d_ij d_kn) / x_n (indices 0-based, n-1 the vertical axis).
double uhs_gamma(int k, int i, int j, double xn, int n) {
  const int v = n - 1;
  const double d_jk = j == k, d_in = i == v, d_ik = i == k, d_jn = j == v, d_ij = i == j,
               d_kn = k == v;
  return -(d_jk * d_in + d_ik * d_jn - d_ij * d_kn) / xn;
}

}  // namespace

TEST_CASE("upper half-space christoffels match the closed form") {
  const ModelSpace s = make_uhs(3);
  for (const Point& p : {oracles::pt({0.0, 0.0, 1.0}), oracles::pt({1.5, -2.0, 0.3})}) {
    const ChristoffelValue c = christoffel_at(s, p);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          CHECK(c(k, i, j) == doctest::Approx(uhs_gamma(k, i, j, p.x[2], 3)).epsilon(1e-12));
  }
}

TEST_CASE("euclidean space is flat") {
  const ModelSpace s = make_euclidean(4);
  const Point p = oracles::pt({1.0, -2.0, 0.5, 3.0});
  const ChristoffelValue c = christoffel_at(s, p);
  for (double g : c.gamma) CHECK(g == 0.0);
  for (double r : riemann_components(s, p)) CHECK(std::abs(r) < 1e-14);
}

TEST_CASE("finite differences agree with exact derivatives") {
  const DiffOptions fd{DiffBackend::finite_difference, 1e-5};
  for (const char* name : {"uhs", "hyperboloid", "twisted"}) {
    const ModelSpace s = make_space(name, 3);
    for (const Point& p : sample_points(s, 5, 77)) {
      const ChristoffelValue a = christoffel_at(s, p);
      const ChristoffelValue b = christoffel_at(s, p, fd);
      double dev = 0, mag = 1;
      for (std::size_t t = 0; t < a.gamma.size(); ++t) {
        dev = std::max(dev, std::abs(a.gamma[t] - b.gamma[t]));
        mag = std::max(mag, std::abs(a.gamma[t]));
      }
      CHECK(dev / mag < 1e-6);
    }
  }
}

TEST_CASE("gradient raises the differential") {
  const ModelSpace s = make_uhs(3);
  const Point p = oracles::pt({0.0, 0.0, 2.0});
  const TangentVector g = gradient(s, coordinate_field(2), p);
  CHECK(g.v[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(g.v[1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(g.v[2] == doctest::Approx(4.0).epsilon(1e-13));

  const ScalarField f([](const auto& x) { return x[0] * x[2]; });
  const double d = directional_derivative(s, f, tv(oracles::pt({1.0, 0.0, 2.0}), {1.0, 2.0, 3.0}));
  CHECK(d == doctest::Approx(2.0 * 1.0 + 1.0 * 3.0).epsilon(1e-13));
}

TEST_CASE("sectional curvature hits the model-space constants") {
  Rng rng(5);
  auto random_plane = [&](const ModelSpace& s, const Point& p) {
    Vec a(s.n), b(s.n);
    for (int i = 0; i < s.n; ++i) {
      a[i] = rng.uniform(-1, 1);
      b[i] = rng.uniform(-1, 1);
    }
    return std::pair{TangentVector{p, a}, TangentVector{p, b}};
  };
  const struct {
    const char* name;
    double k;
  } cases[] = {{"euclidean", 0.0}, {"uhs", -1.0}, {"hyperboloid", -1.0},
               {"sphere_north", 1.0}, {"sphere_south", 1.0}, {"twisted", -1.0}};
  for (const auto& c : cases) {
    const ModelSpace s = make_space(c.name, 3);
    for (const Point& p : sample_points(s, 3, 11)) {
      const auto [x, y] = random_plane(s, p);
      CHECK(sectional_curvature(s, x, y, p) == doctest::Approx(c.k).epsilon(1e-9));
    }
  }
}

TEST_CASE("degenerate planes are rejected") {
  const ModelSpace s = make_uhs(3);
  const Point p = oracles::pt({0.0, 0.0, 1.0});
  CHECK_THROWS_AS(
      sectional_curvature(s, tv(p, {1.0, 2.0, 0.0}), tv(p, {2.0, 4.0, 0.0}), p),
      DegeneracyError);
}

TEST_CASE("curvature operator is antisymmetric in the plane") {
  const ModelSpace s = make_hyperboloid(3);
  const Point p = oracles::pt({0.6, -0.4, 1.1});
  const TangentVector x = tv(p, {1.0, 0.3, -0.2});
  const TangentVector z = tv(p, {0.5, -1.0, 0.8});
  CHECK(riemann(s, x, x, z, p).v.norm() < 1e-11);
  const Vec rxy = riemann(s, x, z, x, p).v;
  const Vec ryx = riemann(s, z, x, x, p).v;
  CHECK((rxy + ryx).norm() < 1e-11);
}

TEST_CASE("covariant derivative uses the connection") {
  const ModelSpace u = make_uhs(3);
  const Point p = oracles::pt({0.0, 0.0, 1.0});
  // nabla_{d1} d1 = Gamma^k_11 d_k = +d3 at x3 = 1
  const TangentVector r =
      covariant_derivative(u, tv(p, {1.0, 0.0, 0.0}), constant_vector({1.0, 0.0, 0.0}));
  CHECK(r.v.isApprox(to_eigen({0.0, 0.0, 1.0}), 1e-12));

  // field-in-first-slot overload agrees with the pointwise one
  const VectorField X([](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    return std::vector<T>{x[2], sin(x[0]), T(1.0)};
  });
  const VectorField V([](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    return std::vector<T>{x[0] * x[1], T(2.0), exp(x[1])};
  });
  const Point q = oracles::pt({0.4, -0.3, 0.9});
  const TangentVector via_field = covariant_derivative(u, X, V, q);
  const TangentVector via_point = covariant_derivative(u, TangentVector{q, to_eigen(X(to_std(q.x)))}, V);
  CHECK(via_field.v.isApprox(via_point.v, 1e-12));
}

TEST_CASE("exterior derivative and closedness of differentials") {
  const ModelSpace s = make_euclidean(3);
  const Point p = oracles::pt({0.7, -0.2, 1.3});
  const OneFormField w([](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    return std::vector<T>{x[1], T(0.0), T(0.0)};  // x2 dx1
  });
  const Mat dw = exterior_derivative(s, w, p);
  CHECK(dw(1, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dw(0, 1) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(std::abs(dw(2, 0)) < 1e-14);

  const ScalarField f([](const auto& x) { return sin(x[0]) * x[1] + x[2] * x[2]; });
  const Mat ddf = exterior_derivative(s, differential(f), p);
  CHECK(ddf.norm() < 1e-13);
}

TEST_CASE("flat and sharp are mutually inverse") {
  const ModelSpace s = make_hyperboloid(3);
  const Point p = oracles::pt({0.4, 0.9, -1.2});
  const TangentVector x = tv(p, {1.2, -0.7, 0.3});
  const TangentVector back = sharp(s, flat(s, x));
  CHECK(back.v.isApprox(x.v, 1e-12));
  CHECK(inner(s, x, x) == doctest::Approx(norm(s, x) * norm(s, x)).epsilon(1e-12));
  // the musical pairing reproduces the metric inner product
  const TangentVector y = tv(p, {0.2, 0.5, 1.0});
  CHECK(flat(s, x).w.dot(y.v) == doctest::Approx(inner(s, x, y)).epsilon(1e-12));
}
