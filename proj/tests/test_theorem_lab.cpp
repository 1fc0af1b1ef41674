#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "tfv/catalog.hpp"
#include "tfv/theorem_lab.hpp"

using namespace tfv;

TEST_CASE("curvature identity holds on the half-space") {
  const CatalogEntry e = catalog_entry("uhs_en", 3);
  const auto& cb = e.charts[0];
  const auto pts = sample_points(cb.space, 20, 77, cb.bounds);
  const ObstructionReport r = curvature_identity_check(cb.space, cb.V, pts, 4, 99, 1e-7);
  CHECK(r.pass);
  CHECK(r.max_residual < 1e-9);
  CHECK(r.check_id == "curvature-identity");
  CHECK(r.residuals.size() == pts.size());
}

TEST_CASE("curvature identity rejects flat space unless run as a control") {
  const CatalogEntry e = catalog_entry("euclid_position", 3);
  const auto& cb = e.charts[0];
  const auto pts = sample_points(cb.space, 15, 31, cb.bounds);
  CHECK_THROWS_AS(curvature_identity_check(cb.space, cb.V, pts, 3, 7, 1e-7), PreconditionError);
  const ObstructionReport r =
      curvature_identity_check(cb.space, cb.V, pts, 3, 7, 1e-7, /*require=*/false);
  CHECK_FALSE(r.pass);
  CHECK(r.max_residual > 1e-3);  // R = 0 leaves the full <X,V>Y - <Y,V>X term
}

TEST_CASE("torqued obstruction identities on the hyperboloid") {
  const CatalogEntry e = catalog_entry("hyp_torqued", 3);
  const auto& cb = e.charts[0];
  const auto pts = sample_points(cb.space, 25, 404, cb.bounds);
  const ObstructionPair r = torqued_obstruction_check(cb.space, cb.V, cb.expected_f,
                                                      cb.expected_omega, pts, 1e-6, 1e-9);
  CHECK(r.gradient.pass);
  CHECK(r.closedness.pass);
  CHECK(r.gradient.check_id == "torqued-gradient-identity");
  CHECK(r.closedness.check_id == "torqued-domega");

  // a non-torqued field must be refused before any residual is computed
  const CatalogEntry anti = catalog_entry("hyp_antitorqued", 3);
  const auto pts2 = sample_points(anti.charts[0].space, 10, 405, anti.charts[0].bounds);
  CHECK_THROWS_AS(torqued_obstruction_check(anti.charts[0].space, anti.charts[0].V,
                                            anti.charts[0].expected_f,
                                            anti.charts[0].expected_omega, pts2, 1e-6, 1e-9),
                  PreconditionError);

  // so must formulas that disagree with the recovered decomposition
  const ScalarField wrong_f([](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    (void)x;
    return T(5.0);
  });
  CHECK_THROWS_AS(
      torqued_obstruction_check(cb.space, cb.V, wrong_f, cb.expected_omega, pts, 1e-6, 1e-9),
      PreconditionError);
}

TEST_CASE("anti-torqued obstruction identities on the half-space") {
  const CatalogEntry e = catalog_entry("uhs_en", 3);
  const auto& cb = e.charts[0];
  const auto pts = sample_points(cb.space, 25, 11, cb.bounds);
  const ObstructionPair r =
      antitorqued_obstruction_check(cb.space, cb.V, cb.expected_f, pts, 1e-10, 1e-10);
  CHECK(r.gradient.pass);
  CHECK(r.closedness.pass);
  CHECK(r.gradient.max_residual < 1e-12);
  CHECK(r.closedness.max_residual < 1e-12);
  CHECK(r.gradient.check_id == "antitorqued-gradient-identity");
  CHECK(r.closedness.check_id == "antitorqued-dnu");

  const CatalogEntry tq = catalog_entry("hyp_torqued", 3);
  const auto pts2 = sample_points(tq.charts[0].space, 10, 12, tq.charts[0].bounds);
  CHECK_THROWS_AS(antitorqued_obstruction_check(tq.charts[0].space, tq.charts[0].V,
                                                tq.charts[0].expected_f, pts2, 1e-10, 1e-10),
                  PreconditionError);
}

TEST_CASE("gradient flow is linear in t on flat space") {
  const ModelSpace s = make_euclidean(3);
  const FlowTrace tr = gradient_flow_check(s, coordinate_field(0), oracles::pt({0.0, 0.0, 0.0}),
                                           2.0, 1e-3);
  REQUIRE(!tr.times.empty());
  CHECK_FALSE(tr.truncated);
  CHECK(tr.linearity_error < 1e-12);
  CHECK(tr.times.back() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(tr.points.back().x[0] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(tr.points.back().x[1] == doctest::Approx(0.0).epsilon(1e-12));
  for (std::size_t i = 1; i < tr.times.size(); ++i) CHECK(tr.times[i] > tr.times[i - 1]);
  CHECK(tr.f_values.size() == tr.times.size());
  CHECK(tr.points.size() == tr.times.size());
}

TEST_CASE("gradient flow respects the hyperbolic metric") {
  const ModelSpace s = make_uhs(3);
  const FlowTrace tr = gradient_flow_check(s, coordinate_field(2), oracles::pt({0.0, 0.0, 1.0}),
                                           1.0, 1e-3);
  CHECK_FALSE(tr.truncated);
  CHECK(tr.linearity_error < 1e-8);
  CHECK(tr.points.back().x[2] == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("gradient flow guards its inputs") {
  const ModelSpace s = make_euclidean(2);
  CHECK_THROWS_AS(gradient_flow_check(s, coordinate_field(0), oracles::pt({0.0, 0.0}), -1.0, 1e-3),
                  ConfigError);
  CHECK_THROWS_AS(gradient_flow_check(s, coordinate_field(0), oracles::pt({0.0, 0.0}), 1.0, 0.0),
                  ConfigError);
  const ScalarField constant([](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    (void)x;
    return T(3.0);
  });
  CHECK_THROWS_AS(gradient_flow_check(s, constant, oracles::pt({0.0, 0.0}), 1.0, 1e-3),
                  CriticalPointError);
}

TEST_CASE("gradient flow truncates at the chart boundary") {
  // on the sphere graph chart the flow of x1 moves at unit chart speed along
  // the first axis and must stop where the chart ends
  const ModelSpace s = make_sphere(3, true);
  const FlowTrace tr = gradient_flow_check(s, coordinate_field(0), oracles::pt({0.2, 0.0, 0.0}),
                                           2.0, 1e-3);
  CHECK(tr.truncated);
  CHECK(tr.times.back() < 2.0);
  CHECK(tr.times.back() > 0.5);
  CHECK(s.is_valid(tr.points.back()));
  CHECK(tr.linearity_error < 1e-8);
}

TEST_CASE("scope note text is stable") {
  const std::string note = theorem_scope_note();
  CHECK(note.find("local obstruction verified") != std::string::npos);
  CHECK(note.find("topological") != std::string::npos);
}
