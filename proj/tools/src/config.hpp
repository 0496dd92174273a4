#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curveflow/harness.hpp"

namespace curveflow::cli {

/// Exact rational parse of "p/q", integer or decimal strings, so regime
/// labels round-trip without decimal drift.
double parse_rational(const std::string& text);

struct RenderOptions {
  int frame_size = 480;
  double stroke_width = 1.5;
  bool overlay = true;  // initial solid, intermediate dashed, final solid
};

/// Full experiment configuration: JSON config file with flat CLI flag
/// overrides (flags win).
struct RunConfig {
  std::string shape = "ellipse";  // ellipse|circle|case1|case2|case3|file:PATH
  double a = 3.0, b = 1.0, r = 1.0;
  std::size_t n_nodes = 32;

  std::string alpha_label = "1";
  std::string beta_label = "-1";
  double alpha = 1.0, beta = -1.0;

  std::optional<double> tau;       // explicit time step wins over the rule
  double tau_rule_coefficient = 1.0;  // tau = c * h^2 with h = 1/N
  double t_max = 2.0;

  std::string solver = "newton";
  double tol = 1e-12;
  int max_iter = 50;

  std::vector<double> checkpoints;
  std::string out_dir = "out";
  int jobs = 1;
  bool quick = false;
  bool render = false;
  RenderOptions render_options;

  // converge
  std::vector<double> h_levels{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
  std::optional<double> h_ref;    // defaults depend on quick mode
  std::optional<double> tau_ref;

  // sweep
  std::vector<std::pair<std::string, std::string>> sweep_regimes;
  std::vector<double> sweep_tau_factors{2.0 / 25.0};
  double sweep_h = 1.0 / 32.0;

  void load_json_file(const std::string& path);

  double h() const { return 1.0 / static_cast<double>(n_nodes); }
  double effective_tau() const {
    return tau ? *tau : tau_rule_coefficient * h() * h();
  }

  ShapeSpec shape_spec() const;      // throws InvalidSpec
  FlowParams flow_params() const;
  SolverConfig solver_config() const;
};

/// Parses "c*h^2" (or a bare coefficient) from the --tau-rule flag.
double parse_tau_rule(const std::string& text);

}  // namespace curveflow::cli
