#pragma once

#include "uhho/cases.hpp"
#include "uhho/pipeline.hpp"

#include <string>

namespace uhho {

/// Parse/validation failure with the offending config location.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// One experiment description, read from the sectioned key-value text format
/// documented in docs/formats.md.
struct RunConfig {
  // [mesh]
  int nx = 8, ny = 8;
  Rectangle domain{-1.0, 1.0, -1.0, 1.0};
  double perturbation = 0.0;
  unsigned long long seed = 0;  // CUT_HHO_SEED overrides
  std::string mesh_file;        // optional import; overrides nx/ny

  // [levelset]
  std::string ls_type;  // line | circle | ellipse | poly (empty: case default)
  std::vector<double> ls_params;
  std::vector<PolyLevelSetTerm> ls_coeffs;

  // [problem]
  double kappa1 = 1.0, kappa2 = 1.0;
  std::string case_name;
  double r0 = 0.71, x0 = 0.31;
  double line_a = 0.0, line_b = 0.0, line_c = 0.0;
  double alpha1 = 1.0, alpha2 = -0.5, beta1 = 0.7, beta2 = -0.2;
  int poly_degree = -1;  // -1: use k+1
  std::string profile = "sine";

  // [hho]
  int k = 1;
  double eta = 0.0;  // 0: auto
  int n_sub = 0;     // 0: auto
  double delta = 0.0;

  // [convergence]
  std::vector<int> meshes;
  double eoc_min = 0.0;  // 0: 0.9 (k+1)

  // [output]
  bool dump_matrix = false;
  int plot_resolution = 2;  // sample grid refinements per cell in the VTK output

  bool has_levelset() const { return !ls_type.empty(); }
  LevelSet build_levelset() const;
  ManufacturedCase build_case(int k_effective) const;
  PipelineOptions options(int threads) const;
};

RunConfig parse_config(std::istream& is, const std::string& origin = "config");
RunConfig parse_config_file(const std::string& path);

}  // namespace uhho
