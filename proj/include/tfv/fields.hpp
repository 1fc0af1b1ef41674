#pragma once

#include <memory>
#include <type_traits>
#include <utility>
#include <vector>

#include "tfv/dual.hpp"
#include "tfv/linalg.hpp"
#include "tfv/types.hpp"

namespace tfv {

// Fields are stored type-erased but evaluable at four scalar levels: plain
// double and dual chains one to three deep. Level 3 exists so an embedding
// can be differentiated under a pullback metric that is itself being
// differentiated twice (Christoffel -> curvature). Composite fields that
// internally need one level more than they are called at guard the top level
// with a constexpr throw; public entry points never reach it.

namespace detail {

struct ScalarErased {
  virtual ~ScalarErased() = default;
  virtual double eval0(const std::vector<double>& x) const = 0;
  virtual D1 eval1(const std::vector<D1>& x) const = 0;
  virtual D2 eval2(const std::vector<D2>& x) const = 0;
  virtual D3 eval3(const std::vector<D3>& x) const = 0;
};

template <class F>
struct ScalarModel final : ScalarErased {
  F f;
  explicit ScalarModel(F fn) : f(std::move(fn)) {}
  double eval0(const std::vector<double>& x) const override { return f(x); }
  D1 eval1(const std::vector<D1>& x) const override { return f(x); }
  D2 eval2(const std::vector<D2>& x) const override { return f(x); }
  D3 eval3(const std::vector<D3>& x) const override { return f(x); }
};

struct VecErased {
  virtual ~VecErased() = default;
  virtual std::vector<double> eval0(const std::vector<double>& x) const = 0;
  virtual std::vector<D1> eval1(const std::vector<D1>& x) const = 0;
  virtual std::vector<D2> eval2(const std::vector<D2>& x) const = 0;
  virtual std::vector<D3> eval3(const std::vector<D3>& x) const = 0;
};

template <class F>
struct VecModel final : VecErased {
  F f;
  explicit VecModel(F fn) : f(std::move(fn)) {}
  std::vector<double> eval0(const std::vector<double>& x) const override { return f(x); }
  std::vector<D1> eval1(const std::vector<D1>& x) const override { return f(x); }
  std::vector<D2> eval2(const std::vector<D2>& x) const override { return f(x); }
  std::vector<D3> eval3(const std::vector<D3>& x) const override { return f(x); }
};

struct MatErased {
  virtual ~MatErased() = default;
  virtual linalg::MatT<double> eval0(const std::vector<double>& x) const = 0;
  virtual linalg::MatT<D1> eval1(const std::vector<D1>& x) const = 0;
  virtual linalg::MatT<D2> eval2(const std::vector<D2>& x) const = 0;
  virtual linalg::MatT<D3> eval3(const std::vector<D3>& x) const = 0;
};

template <class F>
struct MatModel final : MatErased {
  F f;
  explicit MatModel(F fn) : f(std::move(fn)) {}
  linalg::MatT<double> eval0(const std::vector<double>& x) const override { return f(x); }
  linalg::MatT<D1> eval1(const std::vector<D1>& x) const override { return f(x); }
  linalg::MatT<D2> eval2(const std::vector<D2>& x) const override { return f(x); }
  linalg::MatT<D3> eval3(const std::vector<D3>& x) const override { return f(x); }
};

// Dispatch helper shared by the wrappers below.
template <class Erased, class T>
decltype(auto) dispatch(const Erased& e, const std::vector<T>& x) {
  if constexpr (dual_depth_v<T> == 0)
    return e.eval0(x);
  else if constexpr (dual_depth_v<T> == 1)
    return e.eval1(x);
  else if constexpr (dual_depth_v<T> == 2)
    return e.eval2(x);
  else
    return e.eval3(x);
}

struct VecFieldBase {
  VecFieldBase() = default;

  template <class F,
            class = std::enable_if_t<!std::is_base_of_v<VecFieldBase, std::decay_t<F>> &&
                                     std::is_invocable_v<F&, const std::vector<double>&>>>
  VecFieldBase(F f) : impl_(std::make_shared<VecModel<std::decay_t<F>>>(std::forward<F>(f))) {}

  template <class T>
  std::vector<T> operator()(const std::vector<T>& x) const {
    if (!impl_) throw InternalError("field: evaluating an empty field");
    return dispatch(*impl_, x);
  }

  explicit operator bool() const { return impl_ != nullptr; }

 private:
  std::shared_ptr<const VecErased> impl_;
};

}  // namespace detail

class ScalarField {
 public:
  ScalarField() = default;

  template <class F,
            class = std::enable_if_t<!std::is_same_v<std::decay_t<F>, ScalarField> &&
                                     std::is_invocable_v<F&, const std::vector<double>&>>>
  ScalarField(F f)
      : impl_(std::make_shared<detail::ScalarModel<std::decay_t<F>>>(std::forward<F>(f))) {}

  template <class T>
  T operator()(const std::vector<T>& x) const {
    if (!impl_) throw InternalError("field: evaluating an empty scalar field");
    return detail::dispatch(*impl_, x);
  }

  explicit operator bool() const { return impl_ != nullptr; }

 private:
  std::shared_ptr<const detail::ScalarErased> impl_;
};

/// Vector field in chart components.
struct VectorField : detail::VecFieldBase {
  using VecFieldBase::VecFieldBase;
};

/// One-form in chart components.
struct OneFormField : detail::VecFieldBase {
  using VecFieldBase::VecFieldBase;
};

/// Chart -> ambient coordinate map.
struct AmbientMap : detail::VecFieldBase {
  using VecFieldBase::VecFieldBase;
};

/// Vector field given in ambient components as a function of the ambient
/// position.
struct AmbientVectorField : detail::VecFieldBase {
  using VecFieldBase::VecFieldBase;
};

class MetricField {
 public:
  MetricField() = default;

  template <class F,
            class = std::enable_if_t<!std::is_same_v<std::decay_t<F>, MetricField> &&
                                     std::is_invocable_v<F&, const std::vector<double>&>>>
  MetricField(F f)
      : impl_(std::make_shared<detail::MatModel<std::decay_t<F>>>(std::forward<F>(f))) {}

  template <class T>
  linalg::MatT<T> operator()(const std::vector<T>& x) const {
    if (!impl_) throw InternalError("field: evaluating an empty metric field");
    return detail::dispatch(*impl_, x);
  }

  explicit operator bool() const { return impl_ != nullptr; }

 private:
  std::shared_ptr<const detail::MatErased> impl_;
};

/// The i-th coordinate as a scalar field.
inline ScalarField coordinate_field(int i) {
  return ScalarField([i](const auto& x) { return x[static_cast<std::size_t>(i)]; });
}

/// Vector field with constant chart components.
inline VectorField constant_vector(std::vector<double> c) {
  return VectorField([c = std::move(c)](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    std::vector<T> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = T(c[i]);
    return out;
  });
}

/// Coordinate differential df as a one-form field, components by forward AD.
/// Evaluable up to dual depth 2 (one level is spent on the derivative).
inline OneFormField differential(ScalarField f) {
  return OneFormField([f = std::move(f)](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    if constexpr (dual_depth_v<T> > 2) {
      throw InternalError("differential: dual depth exhausted");
      return std::vector<T>{};
    } else {
      const int n = static_cast<int>(x.size());
      std::vector<T> w(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = f(seeded(x, i)).b;
      return w;
    }
  });
}

}  // namespace tfv
