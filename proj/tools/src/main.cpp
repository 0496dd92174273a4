#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "curveflow/errors.hpp"

namespace cli = curveflow::cli;

namespace {

/// Flags shared by every subcommand; values recorded only when the user set
/// them, so config-file values survive unless overridden.
struct Flags {
  std::string config_path;
  std::string shape;
  double a = 0, b = 0;
  std::size_t n_nodes = 0;
  std::string alpha, beta;
  double tau = 0;
  std::string tau_rule;
  double t_max = 0;
  std::string solver;
  double tol = 0;
  std::vector<double> checkpoints;
  std::string out_dir;
  int jobs = 0;
  bool quick = false;
  bool render = false;
};

void add_common_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file");
  cmd->add_option("--shape", f.shape,
                  "ellipse|circle|case1|case2|case3|file:PATH");
  cmd->add_option("--a", f.a, "ellipse semi-axis a");
  cmd->add_option("--b", f.b, "ellipse semi-axis b");
  cmd->add_option("--N", f.n_nodes, "node count");
  cmd->add_option("--alpha", f.alpha, "exponent alpha (rational, e.g. 1/3)");
  cmd->add_option("--beta", f.beta, "coefficient beta (rational)");
  cmd->add_option("--tau", f.tau, "time step");
  cmd->add_option("--tau-rule", f.tau_rule, "time step rule c*h^2");
  cmd->add_option("--tmax", f.t_max, "final time");
  cmd->add_option("--solver", f.solver, "newton|picard");
  cmd->add_option("--tol", f.tol, "nonlinear stopping tolerance");
  cmd->add_option("--checkpoints", f.checkpoints, "snapshot times t1,t2,...")
      ->delimiter(',');
  cmd->add_option("--out", f.out_dir, "output directory");
  cmd->add_option("--jobs", f.jobs, "worker pool size for sweep");
  cmd->add_flag("--quick", f.quick, "downgrade the convergence reference");
  cmd->add_flag("--render", f.render, "write SVG frames");
}

// throws InvalidSpec on bad values; flags win over the config file
cli::RunConfig build_config(const CLI::App* cmd, const Flags& f) {
  cli::RunConfig config;
  if (!f.config_path.empty()) config.load_json_file(f.config_path);
  auto set = [&](const char* name) { return cmd->count(name) > 0; };
  if (set("--shape")) config.shape = f.shape;
  if (set("--a")) config.a = f.a;
  if (set("--b")) config.b = f.b;
  if (set("--N")) config.n_nodes = f.n_nodes;
  if (set("--alpha")) {
    config.alpha_label = f.alpha;
    config.alpha = cli::parse_rational(f.alpha);
  }
  if (set("--beta")) {
    config.beta_label = f.beta;
    config.beta = cli::parse_rational(f.beta);
  }
  if (set("--tau")) config.tau = f.tau;
  if (set("--tau-rule")) {
    config.tau_rule_coefficient = cli::parse_tau_rule(f.tau_rule);
    if (set("--tau") == 0) config.tau.reset();
  }
  if (set("--tmax")) config.t_max = f.t_max;
  if (set("--solver")) config.solver = f.solver;
  if (set("--tol")) config.tol = f.tol;
  if (set("--checkpoints")) config.checkpoints = f.checkpoints;
  if (set("--out")) config.out_dir = f.out_dir;
  if (set("--jobs")) config.jobs = f.jobs;
  if (f.quick) config.quick = true;
  if (f.render) config.render = true;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"area-conserving curvature flow of closed planar curves"};
  app.require_subcommand(1);

  Flags flags;
  auto* evolve = app.add_subcommand("evolve", "run one time evolution");
  auto* converge = app.add_subcommand("converge", "mesh convergence study");
  auto* sweep = app.add_subcommand("sweep", "structure-preservation sweep");
  auto* render = app.add_subcommand("render", "re-render stored snapshots");
  for (auto* cmd : {evolve, converge, sweep, render}) {
    add_common_flags(cmd, flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kExitConfig;
  }

  const CLI::App* active = app.get_subcommands().front();
  try {
    const cli::RunConfig config = build_config(active, flags);
    if (active == evolve) return cli::cmd_evolve(config);
    if (active == converge) return cli::cmd_converge(config);
    if (active == sweep) return cli::cmd_sweep(config);
    return cli::cmd_render(config);
  } catch (const std::exception& e) {
    std::cerr << "error (config): " << e.what() << "\n";
    return cli::kExitConfig;
  }
}
