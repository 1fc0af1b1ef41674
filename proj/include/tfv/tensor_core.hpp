#pragma once

#include "tfv/model_space.hpp"
#include "tfv/types.hpp"

namespace tfv {

/// Exact forward-mode differentiation is the default everywhere; central
/// finite differences are kept as an independent cross-check oracle.
enum class DiffBackend { exact, finite_difference };

struct DiffOptions {
  DiffBackend backend = DiffBackend::exact;
  double fd_step = 1e-5;
};

MetricValue metric_at(const ModelSpace& s, const Point& p);

/// Levi-Civita symbols Gamma^k_ij = 1/2 g^{kl}(d_i g_jl + d_j g_il - d_l g_ij).
ChristoffelValue christoffel_at(const ModelSpace& s, const Point& p, const DiffOptions& opt = {});

/// (nabla_X V)^k = X^i (d_i V^k + Gamma^k_ij V^j) with X a fixed tangent
/// vector at p (the connection is tensorial in X).
TangentVector covariant_derivative(const ModelSpace& s, const TangentVector& X,
                                   const VectorField& V, const DiffOptions& opt = {});
TangentVector covariant_derivative(const ModelSpace& s, const VectorField& X,
                                   const VectorField& V, const Point& p,
                                   const DiffOptions& opt = {});

/// Curvature components R^l_kij at p (convention R(d_i,d_j)d_k = R^l_kij d_l),
/// flat-indexed ((l*n+k)*n+i)*n+j.
std::vector<double> riemann_components(const ModelSpace& s, const Point& p,
                                       const DiffOptions& opt = {});

/// R(X,Y)Z at p for fixed tangent vectors.
TangentVector riemann(const ModelSpace& s, const TangentVector& X, const TangentVector& Y,
                      const TangentVector& Z, const Point& p, const DiffOptions& opt = {});

/// K(x,y) = <R(x,y)y, x> / (<x,x><y,y> - <x,y>^2). Throws DegeneracyError for
/// a degenerate plane (denominator below 1e-12 relative to the norm product).
double sectional_curvature(const ModelSpace& s, const TangentVector& x, const TangentVector& y,
                           const Point& p, const DiffOptions& opt = {});

/// Metric gradient g^{ij} d_j f d_i.
TangentVector gradient(const ModelSpace& s, const ScalarField& f, const Point& p,
                       const DiffOptions& opt = {});

double directional_derivative(const ModelSpace& s, const ScalarField& f, const TangentVector& X,
                              const DiffOptions& opt = {});

/// Components of d_omega at p: (domega)_ij = d_i omega_j - d_j omega_i.
Mat exterior_derivative(const ModelSpace& s, const OneFormField& omega, const Point& p,
                        const DiffOptions& opt = {});

OneForm flat(const ModelSpace& s, const TangentVector& X);
TangentVector sharp(const ModelSpace& s, const OneForm& w);

double inner(const ModelSpace& s, const TangentVector& X, const TangentVector& Y);
double norm(const ModelSpace& s, const TangentVector& X);

}  // namespace tfv
