#pragma once

#include <string>
#include <vector>

#include "tfv/model_space.hpp"

namespace tfv {

/// Expected classification flags for a catalog field over its sample region.
struct ClassExpectation {
  bool torse_forming = false;
  bool concircular = false;
  bool recurrent = false;
  bool parallel = false;
  bool torqued = false;
  bool anti_torqued = false;
  bool proper = false;
};

/// One chart's worth of a catalog field: the chart, the field in chart
/// components, the sampling region honoring the entry's domain exclusions,
/// and (when known in closed form) the expected conformal scalar and
/// generating form.
struct ChartBinding {
  ModelSpace space;
  VectorField V;
  SampleBounds bounds;
  ScalarField expected_f;      // may be empty
  OneFormField expected_omega; // may be empty
};

struct CatalogEntry {
  std::string id;
  std::string space_name;
  int n = 0;  // dimension parameter the entry was instantiated with
  ClassExpectation expected;
  std::vector<ChartBinding> charts;
  std::string domain_note;
};

/// Ground-truth fields:
///   uhs_en          e_n = -x_n d_n, upper half-space (anti-torqued, f = 1)
///   hyp_torqued     e^g (P0 + <P0,Phi> Phi) on the hyperboloid, g = x_1/x_{n+1}
///   hyp_antitorqued (1/x_{n+1})(d_{n+1} + x_{n+1} Phi) on the hyperboloid
///   euclid_position position field (concircular, f = 1)
///   sphere_torse    e^{-x_1}(d_1 - x_1 Phi) on the unit sphere in R^n
///   twisted_torqued lambda mu d_s on the twisted product
///   rot2d           rotation field, negative control (not torse-forming)
CatalogEntry catalog_entry(const std::string& id, int n);

std::vector<std::string> catalog_ids();

/// Scalar fields by id on a given space: "f_torqued", "g_torqued" (hyperboloid
/// charts only) and coordinate fields "x1".."x8".
ScalarField catalog_scalar(const std::string& id, const ModelSpace& space);

/// The orthonormal frame on uhs(n): e_j = x_n d_j for j < n, e_n = -x_n d_n
/// (1-based j).
VectorField uhs_frame_field(int j, int n);

}  // namespace tfv
