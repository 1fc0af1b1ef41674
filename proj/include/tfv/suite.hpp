#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tfv/report.hpp"

namespace tfv {

struct SuiteOptions {
  std::uint64_t seed = 42;
  // When set, replaces every criterion's comparison threshold (tolerance
  // stress mode). Classifier-internal tolerances keep their defaults so
  // failing checks still report meaningful residuals.
  std::optional<double> tol_override;
  // When set, replaces the pinned sample counts.
  std::optional<int> samples_override;
};

/// The full regression suite: ten independent criteria covering curvature
/// audits, catalog classification, the obstruction identities, flow
/// linearity, backend equivalence, and the negative controls.
std::vector<CheckEntry> run_suite(const SuiteOptions& opt = {});

}  // namespace tfv
