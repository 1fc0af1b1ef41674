#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "tfv/catalog.hpp"
#include "tfv/classifier.hpp"

using namespace tfv;

TEST_CASE("decomposition recovers the closed form on the half-space") {
  const CatalogEntry e = catalog_entry("uhs_en", 3);
  const ModelSpace& s = e.charts[0].space;
  const Point p = oracles::pt({0.0, 0.0, 2.0});
  const TorseDecomposition dec = decompose_at(s, e.charts[0].V, p);
  CHECK(dec.residual < 1e-12);
  CHECK(dec.rank_ok);
  CHECK(dec.f == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(dec.omega.w.isApprox(to_eigen({0.0, 0.0, 0.5}), 1e-10));
}

TEST_CASE("decomposition is frame-invariant") {
  const CatalogEntry e = catalog_entry("uhs_en", 3);
  const ModelSpace& s = e.charts[0].space;
  const Point p = oracles::pt({0.4, -1.1, 0.7});
  const double c = std::cos(0.6), sn = std::sin(0.6);
  Mat q(3, 3);
  q << c, -sn, 0, sn, c, 0, 0, 0, 1;
  const TorseDecomposition plain = decompose_at(s, e.charts[0].V, p);
  const TorseDecomposition rotated = decompose_at(s, e.charts[0].V, p, {}, &q);
  CHECK(rotated.f == doctest::Approx(plain.f).epsilon(1e-11));
  CHECK(rotated.omega.w.isApprox(plain.omega.w, 1e-10));
  CHECK(rotated.residual < 1e-11);

  Mat bad = Mat::Identity(3, 3);
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(decompose_at(s, e.charts[0].V, p, {}, &bad), ConfigError);
}

TEST_CASE("position field is concircular but not proper") {
  const CatalogEntry e = catalog_entry("euclid_position", 3);
  const PointVerdict v = classify_at(e.charts[0].space, e.charts[0].V, oracles::pt({1.0, 1.0, 1.0}));
  CHECK(v.flags.torse_forming);
  CHECK(v.flags.concircular);
  CHECK_FALSE(v.flags.recurrent);
  CHECK_FALSE(v.flags.parallel);
  CHECK_FALSE(v.flags.proper);
  CHECK_FALSE(v.flags.torqued);
  CHECK_FALSE(v.flags.anti_torqued);
  CHECK(v.dec.f == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v.omega_norm < 1e-12);
}

TEST_CASE("rotation field fails the fit with a computable residual") {
  const CatalogEntry e = catalog_entry("rot2d", 2);
  const PointVerdict v = classify_at(e.charts[0].space, e.charts[0].V, oracles::pt({1.0, 0.0}));
  CHECK_FALSE(v.flags.torse_forming);
  // the 2x2 skew derivative leaves exactly one unmatchable unit equation
  // out of n^2 = 4, so the RMS residual is 1/2
  CHECK(v.dec.residual == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("vanishing fields are rejected") {
  const ModelSpace s = make_euclidean(2);
  CHECK_THROWS_AS(decompose_at(s, constant_vector({0.0, 0.0}), oracles::pt({1.0, 1.0})),
                  DegeneracyError);
}

TEST_CASE("region classification aggregates deterministically") {
  const CatalogEntry e = catalog_entry("uhs_en", 3);
  const auto& cb = e.charts[0];
  const auto pts = sample_points(cb.space, 60, 2024, cb.bounds);
  const RegionVerdict a = classify_region(cb.space, cb.V, pts);
  const RegionVerdict b = classify_region(cb.space, cb.V, pts);
  CHECK(a.samples == 60);
  CHECK(a.flags.torse_forming);
  CHECK(a.flags.anti_torqued);
  CHECK(a.flags.proper);
  CHECK_FALSE(a.flags.concircular);
  CHECK(a.failures.empty());
  CHECK(a.max_residual == b.max_residual);
  CHECK(a.min_f == b.min_f);
  CHECK(a.max_anti_gap == b.max_anti_gap);
  CHECK(a.min_f == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(a.max_f == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(a.min_v_norm == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(classify_region(cb.space, cb.V, {}), ConfigError);
}

TEST_CASE("anti-torqued reconstruction residual separates the classes") {
  const CatalogEntry anti = catalog_entry("uhs_en", 3);
  const double good =
      anti_eq2_residual(anti.charts[0].space, anti.charts[0].V, oracles::pt({0.5, 0.5, 1.5}));
  CHECK(good < 1e-10);
  const CatalogEntry conc = catalog_entry("euclid_position", 3);
  const double bad =
      anti_eq2_residual(conc.charts[0].space, conc.charts[0].V, oracles::pt({1.0, 1.0, 1.0}));
  CHECK(bad > 1e-1);
}

TEST_CASE("length and geodesic report on the unit frame leg") {
  const CatalogEntry e = catalog_entry("uhs_en", 3);
  const auto& cb = e.charts[0];
  const auto pts = sample_points(cb.space, 40, 555, cb.bounds);
  const LengthGeodesicReport r = length_and_geodesic(cb.space, cb.V, pts);
  CHECK(r.unit);
  CHECK(r.max_unit_dev < 1e-10);
  CHECK(r.length_constant);
  CHECK(r.geodesic);
  CHECK(r.max_nabla_vv < 1e-9);

  const CatalogEntry pos = catalog_entry("euclid_position", 3);
  const auto pts2 = sample_points(pos.charts[0].space, 40, 556, pos.charts[0].bounds);
  const LengthGeodesicReport r2 = length_and_geodesic(pos.charts[0].space, pos.charts[0].V, pts2);
  CHECK_FALSE(r2.length_constant);
  CHECK_FALSE(r2.geodesic);
  CHECK_FALSE(r2.unit);
  CHECK(r2.length_max > r2.length_min + 0.1);
}

TEST_CASE("finite-difference backend reproduces the exact verdicts") {
  const Tolerances cmp{1e-6, 1e-5};
  const DiffOptions fd{DiffBackend::finite_difference, 1e-5};
  for (const char* id : {"twisted_torqued", "uhs_en", "euclid_position"}) {
    const CatalogEntry e = catalog_entry(id, 3);
    const auto& cb = e.charts[0];
    for (const Point& p : sample_points(cb.space, 8, 91, cb.bounds)) {
      const PointFlags a = classify_at(cb.space, cb.V, p, cmp).flags;
      const PointFlags b = classify_at(cb.space, cb.V, p, cmp, fd).flags;
      CHECK(a.torse_forming == b.torse_forming);
      CHECK(a.concircular == b.concircular);
      CHECK(a.recurrent == b.recurrent);
      CHECK(a.parallel == b.parallel);
      CHECK(a.torqued == b.torqued);
      CHECK(a.anti_torqued == b.anti_torqued);
      CHECK(a.proper == b.proper);
    }
  }
}

TEST_CASE("twisted product field carries its advertised decomposition") {
  const CatalogEntry e = catalog_entry("twisted_torqued", 3);
  const auto& cb = e.charts[0];
  const Point p = oracles::pt({0.3, 0.4, -0.5});
  const TorseDecomposition dec = decompose_at(cb.space, cb.V, p);
  CHECK(dec.residual < 1e-10);
  const auto x = to_std(p.x);
  CHECK(dec.f == doctest::Approx(cb.expected_f(x)).epsilon(1e-9));
  CHECK(dec.omega.w.isApprox(to_eigen(cb.expected_omega(x)), 1e-8));
  const PointVerdict v = classify_at(cb.space, cb.V, p);
  CHECK(v.flags.torqued);
  CHECK(v.flags.proper);
  CHECK(std::abs(v.omega_v) < 1e-10);
}
