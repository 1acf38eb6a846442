#pragma once

// Experiment configuration: one JSON document, unknown keys rejected.
//
//   {
//     "experiment": "name",
//     "model": {"kind": "tfim" | "heisenberg", "coupling": 1.0, "field": 1.5,
//               "field_z": 0.0, "field_x": 0.0},
//     "m": 2, "n": 4,
//     "gamma_grid": [...], "alpha_grid": [1, 2, null],   null = full generator
//     "filter": "gaussian" | "compact_bump",
//     "steps": {"policy": "fixed" | "converged", "count": 64,
//               "order": "midpoint" | "richardson", "tol": 1e-8},
//     "require_transfer": true,
//     "seed": 0,
//     "output_dir": "results",
//     "lr_constants": {"kappa_lr": 1.0, "v": 1.0}, "target": 1e-3,
//     "certify": {"field_from": 1.5, "field_to": 2.5, "grid_points": 41},
//     "truncation": {"s_grid": [...], "unitary_steps": 16},
//     "lr": {"a_site": 0, "t_grid": [...], "d_grid": [...]}
//   }
//
// For the heisenberg model "field" is ignored; certify sweeps field_x.

#include "chainglue/adiabatic.hpp"
#include "chainglue/filter.hpp"
#include "chainglue/gluing.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chainglue::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message, int line = 0, int column = 0);
  const std::string& field() const { return field_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string field_;
  int line_;
  int column_;
};

struct ModelConfig {
  std::string kind = "tfim";
  double coupling = 1.0;
  double field = 1.5;
  double field_z = 0.0;
  double field_x = 0.0;
};

struct StepsConfig {
  std::string policy = "fixed";
  int count = 64;
  StepOrder order = StepOrder::midpoint;
  double tol = 1e-8;
};

struct CertifyConfig {
  double field_from = 1.5;
  double field_to = 2.5;
  int grid_points = 41;
};

struct TruncationConfig {
  std::vector<double> s_grid{0.1, 0.3, 0.5, 0.7, 0.9};
  int unitary_steps = 16;
};

struct LRConfig {
  int a_site = 0;
  std::vector<double> t_grid;
  std::vector<int> d_grid;
};

struct ExperimentConfig {
  std::string experiment = "experiment";
  ModelConfig model;
  int m = 2;
  int n = 4;
  std::vector<double> gamma_grid;
  std::vector<std::optional<int>> alpha_grid{std::nullopt};
  FilterKind filter = FilterKind::gaussian;
  StepsConfig steps;
  bool require_transfer = true;
  std::uint64_t seed = 0;
  std::string output_dir = "results";
  LRConstants lr_constants;
  double target = 1e-3;
  CertifyConfig certify;
  TruncationConfig truncation;
  LRConfig lr;

  /// Canonical form of the document that was parsed (sorted keys).
  nlohmann::json canonical;
};

/// Parses and validates. Syntax errors carry line and column; schema errors
/// carry the dotted field path.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// FNV-1a 64 of the canonical dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Family for the configured model; `field` overrides the swept field.
FamilyBuilder model_family(const ModelConfig& model, int max_sites,
                           std::optional<double> field = std::nullopt);

}  // namespace chainglue::cli
