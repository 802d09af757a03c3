#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ubf/hocomp.hpp"
#include "ubf/nrflow.hpp"
#include "ubf/spec_lang.hpp"
#include "ubf/systems.hpp"

namespace ubf {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One barrier leaf as declared in a run configuration.
struct LeafSpec {
  std::string id;
  std::string type;  // "quadratic_distance" | "input_norm"
  Vec center;        // quadratic_distance
  double offset = 0.0;
  double bound = 0.0;             // input_norm
  std::vector<int> coords;        // input_norm, 1-based as written
  int degree = 1;                 // m_i
  ClassKappa::Kind chain_alpha_kind = ClassKappa::Kind::kLinear;
  double chain_alpha_coeff = 1.0;  // alpha_j of the per-leaf chain
};

struct RunConfig {
  std::string system;  // "single_integrator" | "double_integrator" | "quadrotor"
  QuadrotorParams quadrotor_params;
  std::string specification;
  std::vector<LeafSpec> leaves;
  double beta = 10.0;
  int pi_depth = 0;  // m
  ClassKappa::Kind pi_alpha_kind = ClassKappa::Kind::kLinear;
  std::vector<double> pi_alpha_coeffs;  // alpha^0 .. alpha^{m-1}
  ClassKappa::Kind terminal_alpha_kind = ClassKappa::Kind::kLinear;
  double terminal_alpha_coeff = 3.0;
  double horizon = 0.55;
  double eta = 25.0;
  double lambda = 1e-8;
  int substeps = 0;
  Vec x0;
  std::string u0_policy = "zero";  // "zero" | "sontag"
  Vec goal;  // output-dimension reference
  double dt = 0.01;
  double duration = 3.0;
  bool strict = true;  // fail the run on any QP infeasibility
  std::string out_dir;
};

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text);

struct SimRecord {
  double t = 0.0;
  Vec x;
  Vec u;
  Vec v;    // auxiliary input
  Vec tau;  // nominal input derivative
  std::vector<double> pi_values;    // Pi^0 .. Pi^m
  std::vector<double> leaf_values;  // crisp per-leaf barrier values
  double u_norm_sq = 0.0;
};

struct SimLog {
  std::vector<SimRecord> records;
  std::vector<std::string> leaf_ids;
  int state_dim = 0;
  int input_dim = 0;
  int pi_depth = 0;
  int infeasible_count = 0;
  bool failed = false;
  std::string verdict;  // "ok" | "qp_infeasible" | ...
  Vec goal;
  double final_goal_distance = 0.0;
  std::vector<double> min_leaf_values;
  std::vector<double> min_pi_values;
  // plot metadata: planar obstacle circles (cx, cy, radius)
  std::vector<std::array<double, 3>> obstacles;
};

/// Closed-loop run: per step evaluate the nominal controller, assemble the
/// barrier constraint, solve the minimum-norm filter QP and forward-Euler
/// both xdot = F and udot = tau + v*. QP infeasibility at a step is recorded
/// and the run continues with v = 0.
SimLog run_experiment(const RunConfig& cfg);

/// Writes trajectory.csv, control_inputs.csv, control_input_norm.csv,
/// ubfs.csv, summary.json and the SVG plots into dir (created if missing).
void emit_outputs(const SimLog& log, const std::string& dir);

/// Validation / reporting used by the `check` subcommand.
struct CheckReport {
  int leaf_count = 0;
  int level_count = 0;
  std::vector<int> union_indices;
  std::vector<int> intersection_indices;
  std::vector<std::pair<std::string, int>> leaf_degrees;
  int pi_depth = 0;
};
CheckReport check_config(const RunConfig& cfg);

}  // namespace ubf
