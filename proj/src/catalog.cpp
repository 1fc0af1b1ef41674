#include "tfv/catalog.hpp"

#include <cmath>

namespace tfv {

namespace {

SampleBounds with_keep(SampleBounds b, std::function<bool(const Vec&)> extra) {
  if (b.keep) {
    auto prev = b.keep;
    b.keep = [prev, extra](const Vec& x) { return prev(x) && extra(x); };
  } else {
    b.keep = std::move(extra);
  }
  return b;
}

ScalarField constant_scalar(double c) {
  return ScalarField([c](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    (void)x;
    return T(c);
  });
}

CatalogEntry make_uhs_en(int n) {
  CatalogEntry e;
  e.id = "uhs_en";
  e.space_name = "uhs";
  e.n = n;
  e.expected.torse_forming = true;
  e.expected.anti_torqued = true;
  e.expected.proper = true;
  ChartBinding cb;
  cb.space = make_uhs(n);
  cb.V = uhs_frame_field(n, n);
  cb.bounds = cb.space.bounds;
  cb.expected_f = constant_scalar(1.0);
  cb.expected_omega = OneFormField([n](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    std::vector<T> w(static_cast<std::size_t>(n), T(0));
    w[static_cast<std::size_t>(n - 1)] = 1.0 / x[static_cast<std::size_t>(n - 1)];
    return w;
  });
  e.charts.push_back(std::move(cb));
  e.domain_note = "whole chart x_n > 0";
  return e;
}

CatalogEntry make_hyp_torqued(int n) {
  CatalogEntry e;
  e.id = "hyp_torqued";
  e.space_name = "hyperboloid";
  e.n = n;
  e.expected.torse_forming = true;
  e.expected.torqued = true;
  e.expected.proper = true;
  ChartBinding cb;
  cb.space = make_hyperboloid(n);
  // V = e^g (P0 + <P0,Phi> Phi), P0 the second ambient axis, g = x_1/x_{n+1}
  AmbientVectorField amb([](const auto& P) {
    using std::exp;
    using T = typename std::decay_t<decltype(P)>::value_type;
    const std::size_t m = P.size();
    T eg = exp(P[0] / P[m - 1]);
    T x2 = P[1];
    std::vector<T> A(m);
    for (std::size_t k = 0; k < m; ++k) A[k] = eg * (x2 * P[k]);
    A[1] += eg;
    return A;
  });
  cb.V = chart_field_from_ambient(cb.space, amb);
  cb.bounds = with_keep(cb.space.bounds, [n](const Vec& u) {
    double x2 = u[0];
    double xl = u[n - 1];
    double x1 = std::sqrt(1.0 + u.squaredNorm());
    return std::abs(x2) >= 0.05 && std::abs(xl) >= 0.05 && std::abs(x1 - xl) >= 0.05 &&
           std::abs(x1 / xl) <= 2.5;
  });
  AmbientMap map = cb.space.embedding->map;
  cb.expected_f = ScalarField([map](const auto& u) {
    using std::exp;
    auto P = map(u);
    const std::size_t m = P.size();
    return P[1] * exp(P[0] / P[m - 1]);
  });
  cb.expected_omega = differential(ScalarField([map](const auto& u) {
    auto P = map(u);
    return P[0] / P[P.size() - 1];
  }));
  e.charts.push_back(std::move(cb));
  e.domain_note =
      "x_2 and x_{n+1} kept 0.05 away from zero (the removed hypersurfaces); the ratio "
      "x_1/x_{n+1} is additionally capped at 2.5 so the exponential stays numerically tame";
  return e;
}

CatalogEntry make_hyp_antitorqued(int n) {
  CatalogEntry e;
  e.id = "hyp_antitorqued";
  e.space_name = "hyperboloid";
  e.n = n;
  e.expected.torse_forming = true;
  e.expected.anti_torqued = true;
  e.expected.proper = true;
  ChartBinding cb;
  cb.space = make_hyperboloid(n);
  // V = (1/x_{n+1})(d_{n+1} + x_{n+1} Phi) = Phi + (1/x_{n+1}) d_{n+1}
  AmbientVectorField amb([](const auto& P) {
    using T = typename std::decay_t<decltype(P)>::value_type;
    const std::size_t m = P.size();
    std::vector<T> A(m);
    for (std::size_t k = 0; k < m; ++k) A[k] = P[k];
    A[m - 1] += 1.0 / P[m - 1];
    return A;
  });
  cb.V = chart_field_from_ambient(cb.space, amb);
  cb.bounds = with_keep(cb.space.bounds,
                        [n](const Vec& u) { return std::abs(u[n - 1]) >= 0.05; });
  cb.expected_f = constant_scalar(1.0);
  // omega = -f nu = -flat(V)
  MetricField metric = cb.space.metric;
  VectorField V = cb.V;
  cb.expected_omega = OneFormField([metric, V, n](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    auto g = metric(x);
    auto v = V(x);
    std::vector<T> w(static_cast<std::size_t>(n), T(0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(i)] -= g(i, j) * v[static_cast<std::size_t>(j)];
    return w;
  });
  e.charts.push_back(std::move(cb));
  e.domain_note = "x_{n+1} kept 0.05 away from zero";
  return e;
}

CatalogEntry make_euclid_position(int n) {
  CatalogEntry e;
  e.id = "euclid_position";
  e.space_name = "euclidean";
  e.n = n;
  e.expected.torse_forming = true;
  e.expected.concircular = true;
  ChartBinding cb;
  cb.space = make_euclidean(n);
  cb.V = VectorField([](const auto& x) { return x; });
  cb.bounds = with_keep(cb.space.bounds, [](const Vec& x) { return x.norm() >= 0.1; });
  cb.expected_f = constant_scalar(1.0);
  cb.expected_omega = OneFormField([n](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    (void)x;
    return std::vector<T>(static_cast<std::size_t>(n), T(0));
  });
  e.charts.push_back(std::move(cb));
  e.domain_note = "origin (where the field vanishes) excluded with margin 0.1";
  return e;
}

CatalogEntry make_sphere_torse(int n) {
  if (n < 3)
    throw ConfigError("sphere_torse: needs n >= 3 (the sphere chart must be at least "
                      "2-dimensional)");
  CatalogEntry e;
  e.id = "sphere_torse";
  e.space_name = "sphere";
  e.n = n;
  e.expected.torse_forming = true;
  e.expected.proper = true;
  for (bool north : {true, false}) {
    ChartBinding cb;
    cb.space = make_sphere(n - 1, north);
    // V = e^{-x_1}(d_1 - x_1 Phi) on the unit sphere of R^n
    AmbientVectorField amb([](const auto& P) {
      using std::exp;
      using T = typename std::decay_t<decltype(P)>::value_type;
      const std::size_t m = P.size();
      T x1 = P[0];
      T s = exp(-x1);
      std::vector<T> A(m);
      for (std::size_t k = 0; k < m; ++k) A[k] = s * (-x1 * P[k]);
      A[0] += s;
      return A;
    });
    cb.V = chart_field_from_ambient(cb.space, amb);
    // x_1 is the first chart coordinate in both graph charts (pole on the
    // last axis), so the conformal scalar is kept away from its zero set
    // by a margin on u_1
    cb.bounds = with_keep(cb.space.bounds, [](const Vec& u) { return std::abs(u[0]) >= 0.05; });
    cb.expected_f = ScalarField([](const auto& u) {
      using std::exp;
      return -u[0] * exp(-u[0]);
    });
    const int chart_dim = n - 1;
    cb.expected_omega = OneFormField([chart_dim](const auto& x) {
      using T = typename std::decay_t<decltype(x)>::value_type;
      (void)x;
      std::vector<T> w(static_cast<std::size_t>(chart_dim), T(0));
      w[0] = T(-1);
      return w;
    });
    e.charts.push_back(std::move(cb));
  }
  e.domain_note =
      "both graph charts, staying 0.1 away from the equator; x_1 kept 0.05 away from zero "
      "(the conformal scalar's zero set)";
  return e;
}

CatalogEntry make_twisted_torqued(int n) {
  CatalogEntry e;
  e.id = "twisted_torqued";
  e.space_name = "twisted";
  e.n = n;
  e.expected.torse_forming = true;
  e.expected.torqued = true;
  e.expected.proper = true;
  ChartBinding cb;
  cb.space = make_twisted(n);
  // V = lambda mu d_s with lambda = e^s and mu = 1 + sin(q_1)/4
  cb.V = VectorField([n](const auto& x) {
    using std::exp;
    using std::sin;
    using T = typename std::decay_t<decltype(x)>::value_type;
    std::vector<T> v(static_cast<std::size_t>(n), T(0));
    v[0] = exp(x[0]) * (1.0 + 0.25 * sin(x[1]));
    return v;
  });
  cb.bounds = with_keep(cb.space.bounds,
                        [](const Vec& x) { return std::abs(std::cos(x[1])) >= 0.2; });
  // d_s(lambda mu) with lambda = e^s reproduces lambda mu itself
  cb.expected_f = ScalarField([](const auto& x) {
    using std::exp;
    using std::sin;
    return exp(x[0]) * (1.0 + 0.25 * sin(x[1]));
  });
  cb.expected_omega = OneFormField([n](const auto& x) {
    using std::cos;
    using std::sin;
    using T = typename std::decay_t<decltype(x)>::value_type;
    std::vector<T> w(static_cast<std::size_t>(n), T(0));
    w[1] = 0.25 * cos(x[1]) / (1.0 + 0.25 * sin(x[1]));
    return w;
  });
  e.charts.push_back(std::move(cb));
  e.domain_note = "q_1 kept away from the zeros of cos(q_1) so the generating form stays nonzero";
  return e;
}

CatalogEntry make_rot2d() {
  CatalogEntry e;
  e.id = "rot2d";
  e.space_name = "euclidean";
  e.n = 2;
  // negative control: no flag is expected to hold
  ChartBinding cb;
  cb.space = make_euclidean(2);
  cb.V = VectorField([](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    return std::vector<T>{-x[1], x[0]};
  });
  cb.bounds = with_keep(cb.space.bounds, [](const Vec& x) { return x.norm() >= 0.1; });
  e.charts.push_back(std::move(cb));
  e.domain_note = "origin excluded with margin 0.1; expected to fail the torse-forming fit";
  return e;
}

}  // namespace

CatalogEntry catalog_entry(const std::string& id, int n) {
  if (id == "uhs_en") return make_uhs_en(n);
  if (id == "hyp_torqued") return make_hyp_torqued(n);
  if (id == "hyp_antitorqued") return make_hyp_antitorqued(n);
  if (id == "euclid_position") return make_euclid_position(n);
  if (id == "sphere_torse") return make_sphere_torse(n);
  if (id == "twisted_torqued") return make_twisted_torqued(n);
  if (id == "rot2d") return make_rot2d();
  std::string known;
  for (const auto& k : catalog_ids()) known += (known.empty() ? "" : ", ") + k;
  throw ConfigError("unknown field '" + id + "' (known: " + known + ")");
}

std::vector<std::string> catalog_ids() {
  return {"uhs_en",       "hyp_torqued",     "hyp_antitorqued", "euclid_position",
          "sphere_torse", "twisted_torqued", "rot2d"};
}

ScalarField catalog_scalar(const std::string& id, const ModelSpace& space) {
  if (id == "f_torqued" || id == "g_torqued") {
    if (space.name != "hyperboloid" || !space.embedding)
      throw ConfigError("scalar '" + id + "' lives on the hyperboloid chart");
    AmbientMap map = space.embedding->map;
    if (id == "g_torqued")
      return ScalarField([map](const auto& u) {
        auto P = map(u);
        return P[0] / P[P.size() - 1];
      });
    return ScalarField([map](const auto& u) {
      using std::exp;
      auto P = map(u);
      return P[1] * exp(P[0] / P[P.size() - 1]);
    });
  }
  if (id.size() >= 2 && id[0] == 'x') {
    int k = 0;
    try {
      k = std::stoi(id.substr(1));
    } catch (...) {
      k = 0;
    }
    if (k >= 1 && k <= space.n) return coordinate_field(k - 1);
    throw ConfigError("coordinate scalar '" + id + "' out of range for a " +
                      std::to_string(space.n) + "-dimensional chart");
  }
  throw ConfigError("unknown scalar field '" + id +
                    "' (known: f_torqued, g_torqued, x1..x" + std::to_string(space.n) + ")");
}

VectorField uhs_frame_field(int j, int n) {
  if (j < 1 || j > n) throw ConfigError("uhs_frame_field: index out of range");
  return VectorField([j, n](const auto& x) {
    using T = typename std::decay_t<decltype(x)>::value_type;
    std::vector<T> v(static_cast<std::size_t>(n), T(0));
    T xn = x[static_cast<std::size_t>(n - 1)];
    v[static_cast<std::size_t>(j - 1)] = (j == n) ? T(-1) * xn : xn;
    return v;
  });
}

}  // namespace tfv
