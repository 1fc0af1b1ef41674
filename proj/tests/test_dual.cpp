#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "tfv/dual.hpp"

using tfv::D1;
using tfv::D2;
using tfv::D3;
using tfv::Dual;

namespace {

template <class T>
T testfn(const T& x) {
  using std::exp;
  using std::sin;
  using std::sqrt;
  return exp(sin(x)) * sqrt(x) + 1.0 / x;
}

double testfn_d(double x) {
  // analytic derivative of exp(sin x) sqrt(x) + 1/x
  return std::exp(std::sin(x)) * (std::cos(x) * std::sqrt(x) + 0.5 / std::sqrt(x)) - 1.0 / (x * x);
}

}  // namespace

TEST_CASE("dual depth traits") {
  static_assert(tfv::dual_depth_v<double> == 0);
  static_assert(tfv::dual_depth_v<D1> == 1);
  static_assert(tfv::dual_depth_v<D2> == 2);
  static_assert(tfv::dual_depth_v<D3> == 3);
  CHECK(tfv::value(D3(D2(D1(2.5)))) == 2.5);
}

TEST_CASE("first derivative is exact") {
  const double x0 = 1.3;
  const D1 r = testfn(D1(x0, 1.0));
  CHECK(r.a == doctest::Approx(testfn(x0)).epsilon(1e-15));
  CHECK(r.b == doctest::Approx(testfn_d(x0)).epsilon(1e-14));
}

TEST_CASE("second derivative matches central differences") {
  const double x0 = 0.9, h = 1e-4;
  const D2 x(D1(x0, 1.0), D1(1.0, 0.0));
  const D2 r = testfn(x);
  CHECK(r.a.b == doctest::Approx(r.b.a).epsilon(1e-14));  // mixed parts agree
  const double fd2 = (testfn(x0 + h) - 2 * testfn(x0) + testfn(x0 - h)) / (h * h);
  CHECK(r.b.b == doctest::Approx(fd2).epsilon(1e-6));
}

TEST_CASE("third derivative matches differenced second derivatives") {
  const double x0 = 1.1, h = 1e-5;
  auto second = [](double x) {
    const D2 v(D1(x, 1.0), D1(1.0, 0.0));
    return testfn(v).b.b;
  };
  const D3 x(D2(D1(x0, 1.0), D1(1.0, 0.0)), D2(D1(1.0, 0.0), D1(0.0, 0.0)));
  const D3 r = testfn(x);
  const double fd3 = (second(x0 + h) - second(x0 - h)) / (2 * h);
  CHECK(r.b.b.b == doctest::Approx(fd3).epsilon(1e-5));
}

TEST_CASE("division and log chain rules") {
  const double x0 = 2.0;
  const D1 inv = 1.0 / D1(x0, 1.0);
  CHECK(inv.a == 0.5);
  CHECK(inv.b == -0.25);
  const D1 lg = log(D1(x0, 1.0));
  CHECK(lg.b == 0.5);
  D1 acc(3.0, 1.0);
  acc /= D1(2.0);
  CHECK(acc.a == 1.5);
  CHECK(acc.b == 0.5);
}

TEST_CASE("abs follows the sign of the value part") {
  const D1 n = abs(D1(-2.0, 1.0));
  CHECK(n.a == 2.0);
  CHECK(n.b == -1.0);
  const D1 p = abs(D1(2.0, 1.0));
  CHECK(p.b == 1.0);
}

TEST_CASE("seeded and promoted vectors") {
  const std::vector<double> x = {1.0, 2.0, 3.0};
  const auto s = tfv::seeded(x, 1);
  CHECK(s[0].b == 0.0);
  CHECK(s[1].b == 1.0);
  CHECK(s[2].b == 0.0);
  CHECK(s[1].a == 2.0);
  const auto p = tfv::promoted(x);
  CHECK(p[2].a == 3.0);
  CHECK(p[2].b == 0.0);
}

TEST_CASE("comparisons use the value part") {
  CHECK(D1(1.0, 100.0) < D1(2.0, -100.0));
  CHECK(D1(3.0) > D1(2.0));
  CHECK(D1(2.0) <= D1(2.0));
  CHECK(D1(2.0) >= D1(2.0));
}
