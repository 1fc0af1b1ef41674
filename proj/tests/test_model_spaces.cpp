#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "tfv/catalog.hpp"
#include "tfv/model_space.hpp"
#include "tfv/tensor_core.hpp"

using namespace tfv;

TEST_CASE("upper half-space metric is conformally flat") {
  const ModelSpace s = make_uhs(3);
  const Point p = oracles::pt({0.0, 0.0, 2.0});
  const Mat g = metric_at(s, p).g;
  CHECK(g.isApprox(0.25 * Mat::Identity(3, 3), 1e-14));
  CHECK(s.is_valid(p));
  CHECK_FALSE(s.is_valid(oracles::pt({0.0, 0.0, -1.0})));
}

TEST_CASE("hyperboloid pullback metric") {
  const ModelSpace s = make_hyperboloid(3);
  const Point p = oracles::pt({1.0, 1.0, 1.0});
  const Mat g = metric_at(s, p).g;
  Mat want(3, 3);
  want << 0.75, -0.25, -0.25, -0.25, 0.75, -0.25, -0.25, -0.25, 0.75;
  CHECK(g.isApprox(want, 1e-14));
}

TEST_CASE("sphere graph-chart pullback metric") {
  const ModelSpace s = make_sphere(3, true);
  const Vec u = to_eigen({0.3, -0.2, 0.1});
  const Mat g = metric_at(s, Point{u}).g;
  const double q = 1.0 - u.squaredNorm();
  const Mat want = Mat::Identity(3, 3) + (u * u.transpose()) / q;
  CHECK(g.isApprox(want, 1e-13));
}

TEST_CASE("twisted product metric") {
  const ModelSpace s = make_twisted(3);
  const Point p = oracles::pt({0.4, 0.5, -0.2});
  const Mat g = metric_at(s, p).g;
  const double l2 = std::exp(2 * 0.4);
  CHECK(g(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g(1, 1) == doctest::Approx(l2).epsilon(1e-14));
  CHECK(g(2, 2) == doctest::Approx(l2).epsilon(1e-14));
  CHECK(std::abs(g(0, 1)) < 1e-15);

  const ModelSpace flat = make_twisted(3, ScalarField([](const auto& x) {
                                         using T = typename std::decay_t<decltype(x)>::value_type;
                                         (void)x;
                                         return T(1.0);
                                       }),
                                       "twisted_unit");
  CHECK(metric_at(flat, p).g.isApprox(Mat::Identity(3, 3), 1e-15));
}

TEST_CASE("embeddings land on the quadric") {
  for (int n : {2, 4}) {
    const ModelSpace h = make_hyperboloid(n);
    const Point p{Vec::LinSpaced(n, -0.7, 1.3)};
    const Vec P = embed_point(h, p);
    CHECK(ambient_inner(*h.embedding, P, P) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(P[0] > 0);

    const ModelSpace sp = make_sphere(n, false);
    const Point q{Vec::Constant(n, 0.3)};
    const Vec Q = embed_point(sp, q);
    CHECK(ambient_inner(*sp.embedding, Q, Q) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(Q[n] < 0);  // south chart, pole coordinate on the last axis
  }
}

TEST_CASE("tangential projection is metric-compatible") {
  const ModelSpace s = make_hyperboloid(3);
  const Point p = oracles::pt({0.5, -0.3, 0.8});
  const Vec P = embed_point(s, p);
  const Vec A = to_eigen({1.0, -2.0, 0.5, 0.7});
  const TangentVector t = tangential_projection(s, A, p);
  const Mat J = embedding_jacobian(s, p);
  const Vec pushed = J * t.v;
  const Vec expect = A + ambient_inner(*s.embedding, A, P) * P;  // quadric_sign = -1
  CHECK((pushed - expect).norm() < 1e-10);
  // the projection is ambient-orthogonal to the position normal
  CHECK(std::abs(ambient_inner(*s.embedding, pushed, P)) < 1e-10);
}

TEST_CASE("gauss formula consistency on embedded charts") {
  const VectorField X = constant_vector({0.3, -0.4, 0.9});
  const VectorField Y([](const auto& u) {
    using T = typename std::decay_t<decltype(u)>::value_type;
    return std::vector<T>{sin(u[1]), u[0] * u[2], T(1.0) + u[0] * u[0]};
  });
  const Point p = oracles::pt({0.4, 0.1, -0.6});
  CHECK(gauss_consistency(make_hyperboloid(3), X, Y, p) < 1e-8);
  CHECK(gauss_consistency(make_sphere(3, true), X, Y, p) < 1e-8);
}

TEST_CASE("sampling is deterministic and honors the region") {
  const ModelSpace s = make_uhs(3);
  const auto a = sample_points(s, 40, 1234);
  const auto b = sample_points(s, 40, 1234);
  const auto c = sample_points(s, 40, 999);
  REQUIRE(a.size() == 40);
  bool identical = true, differs = false;
  for (int i = 0; i < 40; ++i) {
    identical = identical && a[i].x == b[i].x;
    differs = differs || a[i].x != c[i].x;
    CHECK(s.is_valid(a[i]));
    CHECK(a[i].x[2] >= 0.1);
    CHECK(a[i].x[2] <= 10.0);
  }
  CHECK(identical);
  CHECK(differs);

  SampleBounds infeasible = s.bounds;
  infeasible.keep = [](const Vec&) { return false; };
  CHECK_THROWS_AS(sample_points(s, 5, 1, infeasible), ConfigError);
  CHECK_THROWS_AS(sample_points(s, 0, 1), ConfigError);
}

TEST_CASE("factory names and dimension limits") {
  CHECK(make_space("euclidean", 4).n == 4);
  CHECK(make_space("sphere", 2).name == make_sphere(2, true).name);
  CHECK(resolve_charts("sphere", 3).size() == 2);
  CHECK(resolve_charts("uhs", 3).size() == 1);
  CHECK_THROWS_AS(make_space("nosuch", 3), ConfigError);
  CHECK_THROWS_AS(make_space("uhs", 1), ConfigError);
  CHECK_THROWS_AS(make_space("uhs", 9), ConfigError);
}

TEST_CASE("ambient fields convert to chart fields") {
  // On the sphere the field A(P) = e1 - <e1, P> P is tangent; its chart
  // components must push forward back to the ambient values.
  const ModelSpace s = make_sphere(3, true);
  const AmbientVectorField amb([](const auto& P) {
    using T = typename std::decay_t<decltype(P)>::value_type;
    std::vector<T> a(P.size(), T(0.0));
    a[0] = T(1.0);
    for (std::size_t i = 0; i < P.size(); ++i) a[i] -= P[0] * P[i];
    return a;
  });
  const VectorField V = chart_field_from_ambient(s, amb);
  const Point p = oracles::pt({0.3, 0.2, -0.4});
  const auto v = V(to_std(p.x));
  const Mat J = embedding_jacobian(s, p);
  const Vec P = embed_point(s, p);
  Vec want(4);
  want.setZero();
  want[0] = 1.0;
  want -= P[0] * P;
  CHECK((J * to_eigen(v) - want).norm() < 1e-10);

  // a non-tangent ambient field must be rejected
  const AmbientVectorField off([](const auto& P) {
    using T = typename std::decay_t<decltype(P)>::value_type;
    return std::vector<T>(P.size(), T(1.0));
  });
  const VectorField W = chart_field_from_ambient(s, off);
  CHECK_THROWS_AS(W(to_std(p.x)), InternalError);
}

TEST_CASE("validity guards reject out-of-chart points") {
  const ModelSpace s = make_sphere(3, true);
  CHECK_THROWS_AS(s.require_valid(oracles::pt({0.8, 0.8, 0.0})), DomainError);
  CHECK_THROWS_AS(s.require_valid(oracles::pt({0.1, 0.1})), DomainError);
  CHECK_NOTHROW(s.require_valid(oracles::pt({0.3, 0.1, -0.2})));
}
