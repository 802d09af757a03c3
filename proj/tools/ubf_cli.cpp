#include <cstdio>
#include <random>

#include <CLI11.hpp>

#include "ubf/lse_compose.hpp"
#include "ubf/qpsolve.hpp"
#include "ubf/sim.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kAssertionFailure = 1;
constexpr int kConfigError = 2;

int cmd_run(const std::string& config_path, const std::string& out_override,
            bool strict) {
  ubf::RunConfig cfg = ubf::load_run_config(config_path);
  cfg.strict = strict;
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (cfg.out_dir.empty()) cfg.out_dir = "out";
  const ubf::SimLog log = ubf::run_experiment(cfg);
  ubf::emit_outputs(log, cfg.out_dir);
  std::printf("verdict: %s\n", log.verdict.c_str());
  std::printf("records: %zu\n", log.records.size());
  std::printf("qp infeasibilities: %d\n", log.infeasible_count);
  std::printf("final goal distance: %.6f\n", log.final_goal_distance);
  for (std::size_t i = 0; i < log.leaf_ids.size(); ++i) {
    std::printf("min %s: %.6f\n", log.leaf_ids[i].c_str(),
                log.min_leaf_values[i]);
  }
  std::printf("outputs: %s\n", cfg.out_dir.c_str());
  return log.failed ? kAssertionFailure : kOk;
}

int cmd_check(const std::string& config_path) {
  const ubf::RunConfig cfg = ubf::load_run_config(config_path);
  const ubf::CheckReport report = ubf::check_config(cfg);
  std::printf("specification: %s\n", cfg.specification.c_str());
  std::printf("leaves: %d\n", report.leaf_count);
  std::printf("L = %d\n", report.level_count);
  auto print_set = [](const char* name, const std::vector<int>& idx) {
    std::printf("%s = {", name);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      std::printf("%s%d", i ? "," : "", idx[i]);
    }
    std::printf("}\n");
  };
  print_set("P", report.union_indices);
  print_set("Q", report.intersection_indices);
  for (const auto& [id, degree] : report.leaf_degrees) {
    std::printf("leaf %s: degree %d\n", id.c_str(), degree);
  }
  std::printf("chain depth m = %d\n", report.pi_depth);
  return kOk;
}

int cmd_robinson() {
  std::vector<std::pair<double, double>> grid;
  for (int i = 1; i <= 5; ++i) {
    const double x1 = 0.9 * i / 5.0;
    for (int j = 0; j < 5; ++j) {
      grid.emplace_back(x1, x1 * x1 / 2.0 * j / 4.0);
    }
  }
  const ubf::RobinsonReport report = ubf::robinson_demo(grid);
  std::printf("grid points: %zu\n", report.rows.size());
  std::printf("max |u_qp - u_closed_form|: %.3e\n", report.max_abs_err);
  for (const auto& [eps, ratio] : report.lipschitz_ratios) {
    std::printf("eps = %.2f: Lipschitz ratio %.4f (1/eps = %.4f)\n", eps,
                ratio, 1.0 / eps);
  }
  const bool ok = report.max_abs_err <= 1e-8;
  std::printf("%s\n", ok ? "PASS" : "FAIL");
  return ok ? kOk : kAssertionFailure;
}

int cmd_props() {
  int failures = 0;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> val(-5.0, 5.0);
  std::uniform_int_distribution<int> coin(0, 1);

  // LSE bounds: under-approximation and the ln-2-per-fold gap.
  {
    bool ok = true;
    for (int trial = 0; trial < 2000 && ok; ++trial) {
      const int n = 2 + trial % 5;
      std::vector<double> values(n);
      for (double& v : values) v = val(rng);
      std::vector<ubf::SetOp> ops(n - 1);
      for (auto& op : ops) {
        op = coin(rng) ? ubf::SetOp::kUnion : ubf::SetOp::kIntersection;
      }
      const double beta = 8.0;
      const double lc = ubf::union_run_log_correction(ops);
      const double h = ubf::lse_fold(values, ops, beta, lc);
      const double crisp = ubf::crisp_fold(values, ops);
      if (h > crisp + 1e-12) ok = false;
      if (crisp - h > (n - 1) * std::log(2.0) / beta + lc / beta + 1e-12) {
        ok = false;
      }
    }
    std::printf("lse bounds: %s\n", ok ? "PASS" : "FAIL");
    failures += !ok;
  }

  // Analytic gradients vs central differences.
  {
    ubf::LeafRegistry registry;
    registry["a"] = {"a", ubf::LeafKind::kState,
                     ubf::quadratic_distance_barrier(Eigen::Vector2d(1, 1), 0.5),
                     1};
    registry["b"] = {"b", ubf::LeafKind::kState,
                     ubf::quadratic_distance_barrier(Eigen::Vector2d(-1, 2), 1.0),
                     1};
    registry["c"] = {"c", ubf::LeafKind::kInput,
                     ubf::input_norm_barrier(10.0, {0, 1}), 1};
    const ubf::ComposedUbf ubf_field(
        ubf::SpecExpr::parse("a | b & c", registry), 5.0);
    bool ok = true;
    for (int trial = 0; trial < 200 && ok; ++trial) {
      const ubf::Vec x = ubf::Vec::NullaryExpr(2, [&] { return val(rng); });
      const ubf::Vec u = ubf::Vec::NullaryExpr(2, [&] { return val(rng); });
      const ubf::UbfEval ev = ubf_field.evaluate(x, u);
      ubf::Vec gx, gu;
      ubf::fd_gradient(
          [&](const ubf::Vec& xs, const ubf::Vec& us) {
            return ubf_field.value(xs, us);
          },
          x, u, {}, gx, gu);
      if ((ev.grad_x - gx).lpNorm<Eigen::Infinity>() > 1e-5 ||
          (ev.grad_u - gu).lpNorm<Eigen::Infinity>() > 1e-5) {
        ok = false;
      }
    }
    std::printf("gradient check: %s\n", ok ? "PASS" : "FAIL");
    failures += !ok;
  }

  // QP closed form vs active-set enumeration.
  {
    bool ok = true;
    for (int trial = 0; trial < 500 && ok; ++trial) {
      ubf::Vec p = ubf::Vec::NullaryExpr(3, [&] { return val(rng); });
      if (p.norm() < 1e-3) p(0) += 1.0;
      const double q = val(rng);
      const ubf::Vec v = ubf::solve_halfspace({p, q});
      ubf::DenseQp dense;
      dense.a = p.transpose();
      dense.b = ubf::Vec::Constant(1, -q);
      const ubf::Vec w = ubf::solve_dense(dense);
      if ((v - w).lpNorm<Eigen::Infinity>() > 1e-9) ok = false;
    }
    std::printf("qp oracle equivalence: %s\n", ok ? "PASS" : "FAIL");
    failures += !ok;
  }

  std::printf("%s\n", failures == 0 ? "PASS" : "FAIL");
  return failures == 0 ? kOk : kAssertionFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Universal barrier function composition and safety filtering"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  unsigned long seed = 0;  // reserved; the pipeline is deterministic
  bool strict = true;
  CLI::App* run = app.add_subcommand("run", "Run a closed-loop experiment");
  run->add_option("config", config_path, "JSON run configuration")->required();
  run->add_option("--out", out_dir, "Output directory override");
  run->add_option("--seed", seed, "Reserved, unused");
  run->add_flag("--strict,!--no-strict", strict,
                "Fail on any QP infeasibility (default on)");
  CLI::App* check =
      app.add_subcommand("check", "Validate a configuration and report levels");
  check->add_option("config", config_path, "JSON run configuration")
      ->required();
  app.add_subcommand("robinson", "Non-Lipschitz QP demonstration");
  app.add_subcommand("props", "Run the property suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, strict);
    if (check->parsed()) return cmd_check(config_path);
    if (app.got_subcommand("robinson")) return cmd_robinson();
    if (app.got_subcommand("props")) return cmd_props();
  } catch (const ubf::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kAssertionFailure;
  }
  return kConfigError;
}
