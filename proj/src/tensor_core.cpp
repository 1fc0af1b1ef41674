#include "tfv/tensor_core.hpp"

#include <cmath>

#include "tfv/linalg.hpp"

namespace tfv {

namespace {

Mat to_mat(const linalg::MatT<double>& m) {
  Mat out(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out(i, j) = m(i, j);
  return out;
}

/// Christoffel symbols over an arbitrary scalar level; spends one dual level
/// on the metric partials. Flat-indexed (k*n+i)*n+j.
template <class T>
std::vector<T> christoffel_generic(const MetricField& metric, int n, const std::vector<T>& x) {
  std::vector<linalg::MatT<T>> dg(static_cast<std::size_t>(n));
  linalg::MatT<T> g(n, n);
  for (int l = 0; l < n; ++l) {
    auto gl = metric(seeded(x, static_cast<std::size_t>(l)));
    auto& d = dg[static_cast<std::size_t>(l)];
    d = linalg::MatT<T>(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        d(i, j) = gl(i, j).b;
        if (l == 0) g(i, j) = gl(i, j).a;
      }
  }
  auto ginv = linalg::inverse(g);
  std::vector<T> gamma(static_cast<std::size_t>(n) * n * n, T(0));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        T s = T(0);
        for (int l = 0; l < n; ++l)
          s += ginv(k, l) * (dg[static_cast<std::size_t>(i)](j, l) +
                             dg[static_cast<std::size_t>(j)](i, l) -
                             dg[static_cast<std::size_t>(l)](i, j));
        s = 0.5 * s;
        gamma[(static_cast<std::size_t>(k) * n + i) * n + j] = s;
        gamma[(static_cast<std::size_t>(k) * n + j) * n + i] = s;
      }
  return gamma;
}

ChristoffelValue christoffel_fd(const ModelSpace& s, const Point& p, double h) {
  const int n = s.n;
  std::vector<Mat> dg(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    Point hi{p.x}, lo{p.x};
    hi.x[l] += h;
    lo.x[l] -= h;
    dg[static_cast<std::size_t>(l)] =
        (to_mat(s.metric(to_std(hi.x))) - to_mat(s.metric(to_std(lo.x)))) / (2 * h);
  }
  Mat g = to_mat(s.metric(to_std(p.x)));
  Eigen::FullPivLU<Mat> lu(g);
  if (!lu.isInvertible()) throw NumericError("christoffel: singular metric");
  Mat ginv = lu.inverse();
  ChristoffelValue out(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double acc = 0;
        for (int l = 0; l < n; ++l)
          acc += ginv(k, l) * (dg[static_cast<std::size_t>(i)](j, l) +
                               dg[static_cast<std::size_t>(j)](i, l) -
                               dg[static_cast<std::size_t>(l)](i, j));
        out(k, i, j) = 0.5 * acc;
        out(k, j, i) = out(k, i, j);
      }
  return out;
}

}  // namespace

MetricValue metric_at(const ModelSpace& s, const Point& p) {
  s.require_valid(p);
  return {to_mat(s.metric(to_std(p.x)))};
}

ChristoffelValue christoffel_at(const ModelSpace& s, const Point& p, const DiffOptions& opt) {
  s.require_valid(p);
  if (opt.backend == DiffBackend::finite_difference) return christoffel_fd(s, p, opt.fd_step);
  auto flat_gamma = christoffel_generic<double>(s.metric, s.n, to_std(p.x));
  ChristoffelValue out(s.n);
  out.gamma = std::move(flat_gamma);
  return out;
}

TangentVector covariant_derivative(const ModelSpace& s, const TangentVector& X,
                                   const VectorField& V, const DiffOptions& opt) {
  const Point& p = X.base;
  s.require_valid(p);
  const int n = s.n;
  std::vector<double> x = to_std(p.x);
  Vec Vp = to_eigen(V(x));
  // dV(i, k) = d_i V^k
  Mat dV(n, n);
  if (opt.backend == DiffBackend::exact) {
    for (int i = 0; i < n; ++i) {
      auto Vi = V(seeded(x, static_cast<std::size_t>(i)));
      for (int k = 0; k < n; ++k) dV(i, k) = Vi[static_cast<std::size_t>(k)].b;
    }
  } else {
    const double h = opt.fd_step;
    for (int i = 0; i < n; ++i) {
      std::vector<double> hi = x, lo = x;
      hi[static_cast<std::size_t>(i)] += h;
      lo[static_cast<std::size_t>(i)] -= h;
      Vec vh = to_eigen(V(hi)), vl = to_eigen(V(lo));
      for (int k = 0; k < n; ++k) dV(i, k) = (vh[k] - vl[k]) / (2 * h);
    }
  }
  ChristoffelValue gamma = christoffel_at(s, p, opt);
  Vec out = Vec::Zero(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      double t = dV(i, k);
      for (int j = 0; j < n; ++j) t += gamma(k, i, j) * Vp[j];
      out[k] += X.v[i] * t;
    }
  return {p, out};
}

TangentVector covariant_derivative(const ModelSpace& s, const VectorField& X,
                                   const VectorField& V, const Point& p,
                                   const DiffOptions& opt) {
  return covariant_derivative(s, TangentVector{p, to_eigen(X(to_std(p.x)))}, V, opt);
}

std::vector<double> riemann_components(const ModelSpace& s, const Point& p,
                                       const DiffOptions& opt) {
  s.require_valid(p);
  const int n = s.n;
  std::vector<double> x = to_std(p.x);
  std::vector<double> gamma;                 // Gamma^k_ij at p
  std::vector<std::vector<double>> dgamma(static_cast<std::size_t>(n));  // d_i Gamma
  if (opt.backend == DiffBackend::exact) {
    for (int i = 0; i < n; ++i) {
      auto gi = christoffel_generic<D1>(s.metric, n, seeded(x, static_cast<std::size_t>(i)));
      auto& d = dgamma[static_cast<std::size_t>(i)];
      d.resize(gi.size());
      for (std::size_t t = 0; t < gi.size(); ++t) d[t] = gi[t].b;
      if (i == 0) {
        gamma.resize(gi.size());
        for (std::size_t t = 0; t < gi.size(); ++t) gamma[t] = gi[t].a;
      }
    }
  } else {
    const double h = opt.fd_step;
    gamma = christoffel_at(s, p, opt).gamma;
    for (int i = 0; i < n; ++i) {
      Point hi{p.x}, lo{p.x};
      hi.x[i] += h;
      lo.x[i] -= h;
      auto gh = christoffel_at(s, hi, opt).gamma;
      auto gl = christoffel_at(s, lo, opt).gamma;
      auto& d = dgamma[static_cast<std::size_t>(i)];
      d.resize(gh.size());
      for (std::size_t t = 0; t < gh.size(); ++t) d[t] = (gh[t] - gl[t]) / (2 * h);
    }
  }
  auto G = [&](int k, int i, int j) { return gamma[(static_cast<std::size_t>(k) * n + i) * n + j]; };
  auto dG = [&](int d, int k, int i, int j) {
    return dgamma[static_cast<std::size_t>(d)][(static_cast<std::size_t>(k) * n + i) * n + j];
  };
  std::vector<double> R(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double acc = dG(i, l, j, k) - dG(j, l, i, k);
          for (int m = 0; m < n; ++m) acc += G(l, i, m) * G(m, j, k) - G(l, j, m) * G(m, i, k);
          R[((static_cast<std::size_t>(l) * n + k) * n + i) * n + j] = acc;
        }
  return R;
}

TangentVector riemann(const ModelSpace& s, const TangentVector& X, const TangentVector& Y,
                      const TangentVector& Z, const Point& p, const DiffOptions& opt) {
  const int n = s.n;
  auto R = riemann_components(s, p, opt);
  Vec out = Vec::Zero(n);
  for (int l = 0; l < n; ++l) {
    double acc = 0;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          acc += R[((static_cast<std::size_t>(l) * n + k) * n + i) * n + j] * Z.v[k] * X.v[i] * Y.v[j];
    out[l] = acc;
  }
  return {p, out};
}

double sectional_curvature(const ModelSpace& s, const TangentVector& x, const TangentVector& y,
                           const Point& p, const DiffOptions& opt) {
  Mat g = metric_at(s, p).g;
  double gxx = x.v.dot(g * x.v);
  double gyy = y.v.dot(g * y.v);
  double gxy = x.v.dot(g * y.v);
  double den = gxx * gyy - gxy * gxy;
  if (den < 1e-12 * gxx * gyy || !(den > 0))
    throw DegeneracyError("sectional_curvature: degenerate plane section");
  TangentVector rxy_y = riemann(s, x, y, y, p, opt);
  double num = rxy_y.v.dot(g * x.v);
  return num / den;
}

TangentVector gradient(const ModelSpace& s, const ScalarField& f, const Point& p,
                       const DiffOptions& opt) {
  s.require_valid(p);
  const int n = s.n;
  std::vector<double> x = to_std(p.x);
  Vec df(n);
  if (opt.backend == DiffBackend::exact) {
    for (int i = 0; i < n; ++i) df[i] = f(seeded(x, static_cast<std::size_t>(i))).b;
  } else {
    const double h = opt.fd_step;
    for (int i = 0; i < n; ++i) {
      std::vector<double> hi = x, lo = x;
      hi[static_cast<std::size_t>(i)] += h;
      lo[static_cast<std::size_t>(i)] -= h;
      df[i] = (f(hi) - f(lo)) / (2 * h);
    }
  }
  Mat g = metric_at(s, p).g;
  Eigen::FullPivLU<Mat> lu(g);
  if (!lu.isInvertible()) throw NumericError("gradient: singular metric");
  return {p, lu.solve(df)};
}

double directional_derivative(const ModelSpace& s, const ScalarField& f, const TangentVector& X,
                              const DiffOptions& opt) {
  s.require_valid(X.base);
  std::vector<double> x = to_std(X.base.x);
  double acc = 0;
  if (opt.backend == DiffBackend::exact) {
    for (int i = 0; i < X.base.dim(); ++i)
      acc += X.v[i] * f(seeded(x, static_cast<std::size_t>(i))).b;
  } else {
    const double h = opt.fd_step;
    for (int i = 0; i < X.base.dim(); ++i) {
      std::vector<double> hi = x, lo = x;
      hi[static_cast<std::size_t>(i)] += h;
      lo[static_cast<std::size_t>(i)] -= h;
      acc += X.v[i] * (f(hi) - f(lo)) / (2 * h);
    }
  }
  return acc;
}

Mat exterior_derivative(const ModelSpace& s, const OneFormField& omega, const Point& p,
                        const DiffOptions& opt) {
  s.require_valid(p);
  const int n = s.n;
  std::vector<double> x = to_std(p.x);
  Mat dw(n, n);  // dw(i, k) = d_i omega_k
  if (opt.backend == DiffBackend::exact) {
    for (int i = 0; i < n; ++i) {
      auto wi = omega(seeded(x, static_cast<std::size_t>(i)));
      for (int k = 0; k < n; ++k) dw(i, k) = wi[static_cast<std::size_t>(k)].b;
    }
  } else {
    const double h = opt.fd_step;
    for (int i = 0; i < n; ++i) {
      std::vector<double> hi = x, lo = x;
      hi[static_cast<std::size_t>(i)] += h;
      lo[static_cast<std::size_t>(i)] -= h;
      Vec wh = to_eigen(omega(hi)), wl = to_eigen(omega(lo));
      for (int k = 0; k < n; ++k) dw(i, k) = (wh[k] - wl[k]) / (2 * h);
    }
  }
  Mat out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = dw(i, j) - dw(j, i);
  return out;
}

OneForm flat(const ModelSpace& s, const TangentVector& X) {
  Mat g = metric_at(s, X.base).g;
  return {X.base, g * X.v};
}

TangentVector sharp(const ModelSpace& s, const OneForm& w) {
  Mat g = metric_at(s, w.base).g;
  Eigen::FullPivLU<Mat> lu(g);
  if (!lu.isInvertible()) throw NumericError("sharp: singular metric");
  return {w.base, lu.solve(w.w)};
}

double inner(const ModelSpace& s, const TangentVector& X, const TangentVector& Y) {
  Mat g = metric_at(s, X.base).g;
  return X.v.dot(g * Y.v);
}

double norm(const ModelSpace& s, const TangentVector& X) {
  return std::sqrt(std::max(0.0, inner(s, X, X)));
}

}  // namespace tfv
