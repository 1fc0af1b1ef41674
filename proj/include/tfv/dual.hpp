#pragma once

#include <cmath>
#include <cstddef>
#include <type_traits>
#include <utility>
#include <vector>

namespace tfv {

/// First-order perturbation scalar: value plus one tangent direction.
/// Nesting (Dual<Dual<double>>, ...) gives exact higher-order derivatives.
template <class T>
struct Dual {
  T a{};  // value
  T b{};  // derivative along the seeded direction

  Dual() = default;

  template <class U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
  Dual(U v) : a(static_cast<double>(v)) {}

  Dual(T value) : a(std::move(value)) {}
  Dual(T value, T deriv) : a(std::move(value)), b(std::move(deriv)) {}

  Dual& operator+=(const Dual& o) {
    a += o.a;
    b += o.b;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    a -= o.a;
    b -= o.b;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    b = b * o.a + a * o.b;
    a = a * o.a;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    a = a / o.a;
    b = (b - a * o.b) / o.a;
    return *this;
  }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

template <class T>
inline constexpr int dual_depth_v = 0;
template <class T>
inline constexpr int dual_depth_v<Dual<T>> = dual_depth_v<T> + 1;

inline double value(double x) { return x; }
template <class T>
double value(const Dual<T>& d) {
  return value(d.a);
}

template <class T>
Dual<T> operator+(Dual<T> x, const Dual<T>& y) {
  return x += y;
}
template <class T>
Dual<T> operator-(Dual<T> x, const Dual<T>& y) {
  return x -= y;
}
template <class T>
Dual<T> operator-(const Dual<T>& x) {
  return Dual<T>(-x.a, -x.b);
}
template <class T>
Dual<T> operator*(const Dual<T>& x, const Dual<T>& y) {
  return Dual<T>(x.a * y.a, x.b * y.a + x.a * y.b);
}
template <class T>
Dual<T> operator/(const Dual<T>& x, const Dual<T>& y) {
  T q = x.a / y.a;
  return Dual<T>(q, (x.b - q * y.b) / y.a);
}

// mixed arithmetic with plain numbers
template <class T, class U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
Dual<T> operator+(const Dual<T>& x, U c) {
  return x + Dual<T>(c);
}
template <class T, class U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
Dual<T> operator+(U c, const Dual<T>& x) {
  return Dual<T>(c) + x;
}
template <class T, class U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
Dual<T> operator-(const Dual<T>& x, U c) {
  return x - Dual<T>(c);
}
template <class T, class U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
Dual<T> operator-(U c, const Dual<T>& x) {
  return Dual<T>(c) - x;
}
template <class T, class U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
Dual<T> operator*(const Dual<T>& x, U c) {
  return x * Dual<T>(c);
}
template <class T, class U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
Dual<T> operator*(U c, const Dual<T>& x) {
  return Dual<T>(c) * x;
}
template <class T, class U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
Dual<T> operator/(const Dual<T>& x, U c) {
  return x / Dual<T>(c);
}
template <class T, class U, std::enable_if_t<std::is_arithmetic_v<U>, int> = 0>
Dual<T> operator/(U c, const Dual<T>& x) {
  return Dual<T>(c) / x;
}

// comparisons act on the value part
template <class T>
bool operator<(const Dual<T>& x, const Dual<T>& y) {
  return value(x) < value(y);
}
template <class T>
bool operator>(const Dual<T>& x, const Dual<T>& y) {
  return value(x) > value(y);
}
template <class T>
bool operator<=(const Dual<T>& x, const Dual<T>& y) {
  return value(x) <= value(y);
}
template <class T>
bool operator>=(const Dual<T>& x, const Dual<T>& y) {
  return value(x) >= value(y);
}

template <class T>
Dual<T> abs(const Dual<T>& x) {
  return value(x) < 0 ? -x : x;
}

template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  T s = sqrt(x.a);
  return Dual<T>(s, x.b / (2.0 * s));
}

template <class T>
Dual<T> exp(const Dual<T>& x) {
  using std::exp;
  T e = exp(x.a);
  return Dual<T>(e, x.b * e);
}

template <class T>
Dual<T> log(const Dual<T>& x) {
  using std::log;
  return Dual<T>(log(x.a), x.b / x.a);
}

template <class T>
Dual<T> sin(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return Dual<T>(sin(x.a), x.b * cos(x.a));
}

template <class T>
Dual<T> cos(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return Dual<T>(cos(x.a), -x.b * sin(x.a));
}

/// Promote chart coordinates one dual level, seeding direction `dir`.
template <class T>
std::vector<Dual<T>> seeded(const std::vector<T>& x, std::size_t dir) {
  std::vector<Dual<T>> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = Dual<T>(x[i], T(i == dir ? 1 : 0));
  return out;
}

/// Promote without seeding (all derivative parts zero).
template <class T>
std::vector<Dual<T>> promoted(const std::vector<T>& x) {
  std::vector<Dual<T>> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = Dual<T>(x[i]);
  return out;
}

}  // namespace tfv
