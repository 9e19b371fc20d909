#pragma once

#include <optional>
#include <string>

#include "eit/excitation.hpp"
#include "eit/experiments.hpp"
#include "eit/mesh.hpp"

namespace eit {

// Parsed experiment configuration (one JSON document).  Unknown keys are
// rejected so that typos fail loudly instead of silently using defaults.
struct ExperimentConfig {
  std::string model = "neumann";  // "neumann" | "cem"
  int dim = 3;
  int n_e = 7;
  double side_l = 1.0;
  std::string test_id;

  std::optional<NeumannSpec> neumann;
  std::optional<SweepPlan::CemPlan> cem;

  // single-solve inclusion (cmd solve)
  std::optional<std::vector<std::vector<int>>> inclusion_elements;
  std::optional<double> k_single;

  // sweep settings (cmd sweep)
  SweepPlan plan;
  bool has_sweep = false;

  std::string output_path;

  StructuredMesh make_mesh() const;
  NeumannSpec make_neumann() const;
  ElectrodeLayout make_layout(const StructuredMesh& mesh) const;
  SweepPlan make_plan() const;
};

/// Parse + validate a config document; throws ConfigError with line/column
/// diagnostics on malformed JSON and on schema violations.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace eit
