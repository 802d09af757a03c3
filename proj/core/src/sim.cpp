#include "ubf/sim.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "ubf/qpsolve.hpp"
#include "ubf/svg_plot.hpp"

namespace ubf {

namespace {

using nlohmann::json;

Vec to_vec(const json& j) {
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

ClassKappa::Kind parse_kind(const std::string& s) {
  if (s == "linear") return ClassKappa::Kind::kLinear;
  if (s == "cubic") return ClassKappa::Kind::kCubic;
  throw ConfigError("unknown class-K kind '" + s + "'");
}

SystemModel make_system(const RunConfig& cfg) {
  if (cfg.system == "single_integrator") return single_integrator();
  if (cfg.system == "double_integrator") return double_integrator();
  if (cfg.system == "quadrotor") return quadrotor(cfg.quadrotor_params);
  throw ConfigError("unknown system '" + cfg.system + "'");
}

LeafRegistry make_registry(const RunConfig& cfg) {
  LeafRegistry registry;
  for (const auto& spec : cfg.leaves) {
    ConstraintLeaf leaf;
    leaf.id = spec.id;
    if (spec.type == "quadratic_distance") {
      leaf.kind = LeafKind::kState;
      leaf.barrier = quadratic_distance_barrier(spec.center, spec.offset);
      leaf.relative_degree = spec.degree;
    } else if (spec.type == "input_norm") {
      leaf.kind = LeafKind::kInput;
      std::vector<int> coords;
      for (int c : spec.coords) coords.push_back(c - 1);
      leaf.barrier = input_norm_barrier(spec.bound, coords);
      leaf.relative_degree = 1;
    } else {
      throw ConfigError("unknown leaf type '" + spec.type + "'");
    }
    if (!registry.emplace(leaf.id, leaf).second) {
      throw ConfigError("duplicate leaf id '" + leaf.id + "'");
    }
  }
  return registry;
}

struct Assembled {
  SystemModel sys;
  SpecExpr spec;
  std::vector<LeafSpec> ordered_leaves;  // in spec order
};

Assembled assemble(const RunConfig& cfg) {
  Assembled a;
  a.sys = make_system(cfg);
  const LeafRegistry registry = make_registry(cfg);
  try {
    a.spec = SpecExpr::parse(cfg.specification, registry);
  } catch (const ParseError& e) {
    throw ConfigError(std::string("specification: ") + e.what());
  }
  for (const auto& leaf : a.spec.leaves()) {
    for (const auto& ls : cfg.leaves) {
      if (ls.id == leaf.id) {
        a.ordered_leaves.push_back(ls);
        break;
      }
    }
  }
  if (cfg.dt <= 0.0) throw ConfigError("dt must be positive");
  if (cfg.duration < cfg.dt && cfg.duration != 0.0) {
    throw ConfigError("duration must be zero or at least dt");
  }
  if (cfg.x0.size() != a.sys.state_dim) {
    throw ConfigError("x0 dimension does not match the system");
  }
  if (cfg.goal.size() != a.sys.input_dim) {
    throw ConfigError("goal dimension does not match the output");
  }
  const Vec u0 = Vec::Zero(a.sys.input_dim);
  for (const auto& leaf : a.spec.leaves()) {
    if (leaf.kind == LeafKind::kState &&
        leaf.barrier.value(cfg.x0, u0) <= 0.0) {
      throw ConfigError("x0 is not strictly inside leaf '" + leaf.id + "'");
    }
  }
  return a;
}

std::vector<ScalarField> build_effective(const Assembled& a,
                                         const RunConfig& cfg) {
  std::vector<ScalarField> effective;
  for (int i = 0; i < a.spec.size(); ++i) {
    const ConstraintLeaf& leaf = a.spec.leaves()[i];
    const LeafSpec& ls = a.ordered_leaves[i];
    if (leaf.relative_degree <= 1) {
      effective.push_back(leaf.barrier);
      continue;
    }
    std::vector<AlphaFn> alphas(
        leaf.relative_degree - 1,
        make_alpha(ClassKappa(ls.chain_alpha_kind, ls.chain_alpha_coeff)));
    effective.push_back(
        PhiChain::build(leaf, a.sys, std::move(alphas)).effective());
  }
  return effective;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_run_config(text);
}

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  try {
    RunConfig cfg;
    cfg.system = j.at("system").get<std::string>();
    if (j.contains("quadrotor")) {
      const auto& q = j["quadrotor"];
      cfg.quadrotor_params.mass = q.value("mass", 1.0);
      cfg.quadrotor_params.gravity = q.value("gravity", 9.81);
      if (q.contains("inertia")) {
        const Vec i3 = to_vec(q["inertia"]);
        cfg.quadrotor_params.inertia = Eigen::Vector3d(i3(0), i3(1), i3(2));
      }
    }
    cfg.specification = j.at("specification").get<std::string>();
    for (const auto& jl : j.at("leaves")) {
      LeafSpec ls;
      ls.id = jl.at("id").get<std::string>();
      ls.type = jl.at("type").get<std::string>();
      if (ls.type == "quadratic_distance") {
        ls.center = to_vec(jl.at("center"));
        ls.offset = jl.at("offset").get<double>();
      } else if (ls.type == "input_norm") {
        ls.bound = jl.at("bound").get<double>();
        ls.coords = jl.at("coords").get<std::vector<int>>();
      }
      ls.degree = jl.value("degree", 1);
      if (jl.contains("chain_alpha")) {
        ls.chain_alpha_kind =
            parse_kind(jl["chain_alpha"].value("kind", "linear"));
        ls.chain_alpha_coeff = jl["chain_alpha"].value("coefficient", 1.0);
      }
      cfg.leaves.push_back(std::move(ls));
    }
    cfg.beta = j.at("beta").get<double>();
    if (j.contains("pi")) {
      const auto& p = j["pi"];
      cfg.pi_depth = p.value("depth", 0);
      cfg.pi_alpha_kind = parse_kind(p.value("alpha_kind", "linear"));
      if (p.contains("alpha_coefficients")) {
        cfg.pi_alpha_coeffs = p["alpha_coefficients"].get<std::vector<double>>();
      }
    }
    if (j.contains("terminal_alpha")) {
      cfg.terminal_alpha_kind =
          parse_kind(j["terminal_alpha"].value("kind", "linear"));
      cfg.terminal_alpha_coeff = j["terminal_alpha"].value("coefficient", 3.0);
    }
    const auto& c = j.at("controller");
    cfg.horizon = c.at("horizon").get<double>();
    cfg.eta = c.at("eta").get<double>();
    cfg.lambda = c.value("lambda", 1e-8);
    cfg.substeps = c.value("substeps", 0);
    cfg.x0 = to_vec(j.at("x0"));
    cfg.u0_policy = j.value("u0_policy", "zero");
    cfg.goal = to_vec(j.at("goal"));
    cfg.dt = j.at("dt").get<double>();
    cfg.duration = j.at("duration").get<double>();
    cfg.strict = j.value("strict", true);
    cfg.out_dir = j.value("out_dir", "");
    if (cfg.pi_alpha_coeffs.empty()) {
      cfg.pi_alpha_coeffs.assign(cfg.pi_depth, 1.0);
    }
    if (cfg.pi_alpha_coeffs.size() !=
        static_cast<std::size_t>(cfg.pi_depth)) {
      throw ConfigError("pi.alpha_coefficients must have `depth` entries");
    }
    if (cfg.u0_policy != "zero" && cfg.u0_policy != "sontag") {
      throw ConfigError("u0_policy must be 'zero' or 'sontag'");
    }
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

CheckReport check_config(const RunConfig& cfg) {
  const Assembled a = assemble(cfg);
  CheckReport report;
  report.leaf_count = a.spec.size();
  report.level_count = a.spec.level_count();
  report.union_indices = a.spec.union_indices();
  report.intersection_indices = a.spec.intersection_indices();
  for (const auto& leaf : a.spec.leaves()) {
    report.leaf_degrees.emplace_back(leaf.id, leaf.relative_degree);
  }
  report.pi_depth = cfg.pi_depth;
  return report;
}

SimLog run_experiment(const RunConfig& cfg) {
  const Assembled a = assemble(cfg);
  const SystemModel& sys = a.sys;

  NrConfig nr;
  nr.horizon = cfg.horizon;
  nr.eta = cfg.eta;
  nr.lambda = cfg.lambda;
  nr.substeps = cfg.substeps;
  const Vec goal = cfg.goal;
  nr.reference = [goal](double) { return goal; };
  NrController controller(sys, nr);

  double current_time = 0.0;
  TauFn tau = [&controller, &current_time](const Vec& x, const Vec& u) {
    return controller.tau(x, u, current_time);
  };

  ComposedUbf ubf(a.spec, cfg.beta, build_effective(a, cfg));
  std::vector<AlphaFn> pi_alphas;
  for (double c : cfg.pi_alpha_coeffs) {
    pi_alphas.push_back(make_alpha(ClassKappa(cfg.pi_alpha_kind, c)));
  }
  PiChain chain(ubf, sys, tau, std::move(pi_alphas),
                ClassKappa(cfg.terminal_alpha_kind, cfg.terminal_alpha_coeff),
                cfg.pi_depth);

  SimLog log;
  log.state_dim = sys.state_dim;
  log.input_dim = sys.input_dim;
  log.pi_depth = cfg.pi_depth;
  log.goal = goal;
  for (const auto& leaf : a.spec.leaves()) log.leaf_ids.push_back(leaf.id);
  for (const auto& ls : a.ordered_leaves) {
    if (ls.type == "quadratic_distance" && ls.center.size() >= 2) {
      log.obstacles.push_back(
          {ls.center(0), ls.center(1), std::sqrt(std::max(0.0, ls.offset))});
    }
  }

  Vec x = cfg.x0;
  Vec u;
  if (cfg.u0_policy == "sontag") {
    u = sontag_feedback(quadratic_clf(sys.state_dim), sys, x);
  } else {
    u = Vec::Zero(sys.input_dim);
  }

  const int steps = static_cast<int>(std::floor(cfg.duration / cfg.dt + 0.5));
  log.records.reserve(steps + 1);
  log.min_leaf_values.assign(a.spec.size(),
                             std::numeric_limits<double>::infinity());
  log.min_pi_values.assign(cfg.pi_depth + 1,
                           std::numeric_limits<double>::infinity());

  for (int k = 0; k <= steps; ++k) {
    current_time = k * cfg.dt;
    SimRecord rec;
    rec.t = current_time;
    rec.x = x;
    rec.u = u;
    try {
      rec.tau = controller.tau(x, u, current_time);
      const PiChain::Result pr = chain.qp_data(x, u);
      rec.pi_values = pr.levels;
      try {
        rec.v = solve_halfspace({pr.qp.p, pr.qp.q});
      } catch (const InfeasibleQp&) {
        rec.v = Vec::Zero(sys.input_dim);
        ++log.infeasible_count;
      }
    } catch (const std::exception& e) {
      log.failed = true;
      log.verdict = std::string("diverged: ") + e.what();
      break;
    }
    for (int i = 0; i < a.spec.size(); ++i) {
      rec.leaf_values.push_back(a.spec.leaves()[i].barrier.value(x, u));
      log.min_leaf_values[i] =
          std::min(log.min_leaf_values[i], rec.leaf_values.back());
    }
    for (int i = 0; i <= cfg.pi_depth; ++i) {
      log.min_pi_values[i] = std::min(log.min_pi_values[i], rec.pi_values[i]);
    }
    rec.u_norm_sq = u.squaredNorm();
    log.records.push_back(std::move(rec));

    if (k < steps) {
      const Vec udot = log.records.back().tau + log.records.back().v;
      x += cfg.dt * sys.f(x, u);
      u += cfg.dt * udot;
      if (!x.allFinite() || !u.allFinite()) {
        log.failed = true;
        log.verdict = "diverged: non-finite state";
        break;
      }
    }
  }

  log.final_goal_distance = (sys.c(x) - goal).norm();
  if (log.failed) return log;
  if (log.infeasible_count > 0 && cfg.strict) {
    log.failed = true;
    log.verdict = "qp_infeasible";
  } else {
    log.verdict = "ok";
  }
  return log;
}

void emit_outputs(const SimLog& log, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path base(dir);

  const int state_dim = log.state_dim;
  const int input_dim = log.input_dim;

  {
    std::ofstream out(base / "trajectory.csv");
    out << "time";
    for (int i = 1; i <= state_dim; ++i) out << ",x" << i;
    out << "\n";
    for (const auto& r : log.records) {
      out << format_double(r.t);
      for (int i = 0; i < state_dim; ++i) out << "," << format_double(r.x(i));
      out << "\n";
    }
  }
  {
    std::ofstream out(base / "control_inputs.csv");
    out << "time";
    for (int i = 1; i <= input_dim; ++i) out << ",u" << i;
    out << "\n";
    for (const auto& r : log.records) {
      out << format_double(r.t);
      for (int i = 0; i < input_dim; ++i) out << "," << format_double(r.u(i));
      out << "\n";
    }
  }
  {
    std::ofstream out(base / "control_input_norm.csv");
    out << "time,u_norm_sq\n";
    for (const auto& r : log.records) {
      out << format_double(r.t) << "," << format_double(r.u_norm_sq) << "\n";
    }
  }
  {
    std::ofstream out(base / "ubfs.csv");
    out << "time";
    for (int i = 0; i <= log.pi_depth; ++i) out << ",pi" << i;
    for (const auto& id : log.leaf_ids) out << "," << id;
    out << "\n";
    for (const auto& r : log.records) {
      out << format_double(r.t);
      for (double v : r.pi_values) out << "," << format_double(v);
      for (double v : r.leaf_values) out << "," << format_double(v);
      out << "\n";
    }
  }
  {
    nlohmann::json summary;
    summary["verdict"] = log.verdict;
    summary["failed"] = log.failed;
    summary["qp_infeasible_count"] = log.infeasible_count;
    summary["records"] = log.records.size();
    summary["final_goal_distance"] = log.final_goal_distance;
    nlohmann::json mins = nlohmann::json::object();
    for (std::size_t i = 0; i < log.leaf_ids.size(); ++i) {
      mins[log.leaf_ids[i]] = log.min_leaf_values[i];
    }
    summary["min_leaf_values"] = mins;
    summary["min_pi_values"] = log.min_pi_values;
    std::ofstream out(base / "summary.json");
    out << summary.dump(2) << "\n";
  }

  SvgPlot traj;
  traj.title = "trajectory";
  traj.x_label = "x1";
  traj.y_label = "x2";
  traj.equal_aspect = true;
  traj.circles = log.obstacles;
  SvgSeries path;
  path.label = "path";
  path.color = "#1f77b4";
  for (const auto& r : log.records) {
    if (r.x.size() >= 2) {
      path.x.push_back(r.x(0));
      path.y.push_back(r.x(1));
    }
  }
  traj.series.push_back(std::move(path));
  if (!log.records.empty() && log.records[0].x.size() >= 2) {
    traj.markers.push_back({log.records[0].x(0), log.records[0].x(1)});
  }
  if (log.goal.size() >= 2) traj.markers.push_back({log.goal(0), log.goal(1)});
  write_svg(traj, (base / "trajectory.svg").string());

  SvgPlot norm_plot;
  norm_plot.title = "squared input norm";
  norm_plot.x_label = "t";
  norm_plot.y_label = "|u|^2";
  SvgSeries norm_series;
  norm_series.label = "|u|^2";
  norm_series.color = "#d62728";
  for (const auto& r : log.records) {
    norm_series.x.push_back(r.t);
    norm_series.y.push_back(r.u_norm_sq);
  }
  norm_plot.series.push_back(std::move(norm_series));
  write_svg(norm_plot, (base / "input_norm.svg").string());

  SvgPlot h_plot;
  h_plot.title = "composed barrier";
  h_plot.x_label = "t";
  h_plot.y_label = "h";
  const char* colors[] = {"#2ca02c", "#ff7f0e", "#9467bd"};
  for (int i = 0; i <= log.pi_depth; ++i) {
    SvgSeries s;
    s.label = i == 0 ? "h" : "pi" + std::to_string(i);
    s.color = colors[i % 3];
    for (const auto& r : log.records) {
      s.x.push_back(r.t);
      s.y.push_back(r.pi_values[i]);
    }
    h_plot.series.push_back(std::move(s));
  }
  write_svg(h_plot, (base / "ubf.svg").string());
}

}  // namespace ubf
