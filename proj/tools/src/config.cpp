#include "config.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "curveflow/errors.hpp"

namespace curveflow::cli {

double parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    }
    const std::string num_s = text.substr(0, slash);
    const std::string den_s = text.substr(slash + 1);
    const double num = std::stod(num_s, &used);
    if (used != num_s.size()) throw std::invalid_argument(text);
    const double den = std::stod(den_s, &used);
    if (used != den_s.size() || den == 0.0) throw std::invalid_argument(text);
    return num / den;
  } catch (const std::exception&) {
    throw InvalidSpec("cannot parse number '" + text + "'");
  }
}

double parse_tau_rule(const std::string& text) {
  std::string coeff = text;
  const auto star = text.find("*h^2");
  if (star != std::string::npos) {
    if (star + 4 != text.size()) {
      throw InvalidSpec("tau rule must look like 'c*h^2', got '" + text + "'");
    }
    coeff = text.substr(0, star);
  }
  const double c = parse_rational(coeff);
  if (!(c > 0.0)) throw InvalidSpec("tau rule coefficient must be positive");
  return c;
}

void RunConfig::load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidSpec("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidSpec(std::string("config JSON parse error: ") + e.what());
  }

  auto num = [&](const char* key, double& slot) {
    if (j.contains(key)) slot = j.at(key).get<double>();
  };
  if (j.contains("shape")) shape = j.at("shape").get<std::string>();
  num("a", a);
  num("b", b);
  num("r", r);
  if (j.contains("N")) n_nodes = j.at("N").get<std::size_t>();
  auto label = [&](const char* key, std::string& lbl, double& value) {
    if (j.contains(key)) {
      lbl = j.at(key).is_string() ? j.at(key).get<std::string>()
                                  : j.at(key).dump();
      value = parse_rational(lbl);
    }
  };
  label("alpha", alpha_label, alpha);
  label("beta", beta_label, beta);
  if (j.contains("tau")) tau = j.at("tau").get<double>();
  if (j.contains("tau_rule")) {
    tau_rule_coefficient = parse_tau_rule(j.at("tau_rule").get<std::string>());
  }
  num("tmax", t_max);
  if (j.contains("solver")) solver = j.at("solver").get<std::string>();
  num("tol", tol);
  if (j.contains("max_iter")) max_iter = j.at("max_iter").get<int>();
  if (j.contains("checkpoints")) {
    checkpoints = j.at("checkpoints").get<std::vector<double>>();
  }
  if (j.contains("out")) out_dir = j.at("out").get<std::string>();
  if (j.contains("jobs")) jobs = j.at("jobs").get<int>();
  if (j.contains("quick")) quick = j.at("quick").get<bool>();
  if (j.contains("render")) render = j.at("render").get<bool>();
  if (j.contains("h_levels")) {
    h_levels = j.at("h_levels").get<std::vector<double>>();
  }
  if (j.contains("h_ref")) h_ref = j.at("h_ref").get<double>();
  if (j.contains("tau_ref")) tau_ref = j.at("tau_ref").get<double>();
  if (j.contains("sweep")) {
    const auto& sw = j.at("sweep");
    if (sw.contains("regimes")) {
      sweep_regimes.clear();
      for (const auto& r2 : sw.at("regimes")) {
        sweep_regimes.emplace_back(r2.at(0).get<std::string>(),
                                   r2.at(1).get<std::string>());
      }
    }
    if (sw.contains("tau_factors")) {
      sweep_tau_factors = sw.at("tau_factors").get<std::vector<double>>();
    }
    if (sw.contains("h")) sweep_h = sw.at("h").get<double>();
  }
  if (j.contains("render_options")) {
    const auto& ro = j.at("render_options");
    if (ro.contains("frame_size")) {
      render_options.frame_size = ro.at("frame_size").get<int>();
    }
    if (ro.contains("stroke_width")) {
      render_options.stroke_width = ro.at("stroke_width").get<double>();
    }
    if (ro.contains("overlay")) {
      render_options.overlay = ro.at("overlay").get<bool>();
    }
  }
}

ShapeSpec RunConfig::shape_spec() const {
  ShapeSpec spec;
  spec.n_nodes = n_nodes;
  if (shape == "ellipse") {
    spec.kind = ShapeSpec::Ellipse{a, b};
  } else if (shape == "circle") {
    spec.kind = ShapeSpec::Circle{r};
  } else if (shape == "case1") {
    spec.kind = ShapeSpec::CaseI{};
  } else if (shape == "case2") {
    spec.kind = ShapeSpec::CaseII{};
  } else if (shape == "case3") {
    spec.kind = ShapeSpec::CaseIII{};
  } else if (shape.rfind("file:", 0) == 0) {
    spec.kind = ShapeSpec::Polygon{shape.substr(5)};
  } else {
    throw InvalidSpec("unknown shape '" + shape + "'");
  }
  return spec;
}

FlowParams RunConfig::flow_params() const {
  FlowParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.tau = effective_tau();
  p.validate();
  return p;
}

SolverConfig RunConfig::solver_config() const {
  SolverConfig c;
  if (solver == "newton") {
    c.method = SolverMethod::Newton;
  } else if (solver == "picard") {
    c.method = SolverMethod::Picard;
  } else {
    throw InvalidSpec("unknown solver '" + solver + "'");
  }
  c.tol = tol;
  c.max_iter = max_iter;
  c.validate();
  return c;
}

}  // namespace curveflow::cli
