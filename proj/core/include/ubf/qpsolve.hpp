#pragma once

#include <stdexcept>
#include <vector>

#include "ubf/fields.hpp"

namespace ubf {

/// min |v|^2 subject to p^T v + q >= 0.
struct HalfspaceQp {
  Vec p;
  double q = 0.0;
};

/// min 1/2 v^T v subject to A v >= b (identity quadratic term only).
/// Enumeration oracle bound: at most 8 rows and 8 variables.
struct DenseQp {
  Mat a;
  Vec b;
};

struct InfeasibleQp : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Closed form: v* = 0 when q >= 0, else (-q/|p|^2) p (minimum-norm
/// projection onto the halfspace). Throws InfeasibleQp when p = 0 and q < 0.
Vec solve_halfspace(const HalfspaceQp& qp);

/// Active-set enumeration: solves every equality-constrained subsystem and
/// returns the feasible candidate with non-negative multipliers and least
/// norm. Independent oracle for solve_halfspace.
Vec solve_dense(const DenseQp& qp);

/// Robinson's quadratic program: fixed 4x4 constraint matrix parameterized by
/// the planar point (x1, x2); its minimizer is non-Lipschitz near the origin.
DenseQp robinson_qp(double x1, double x2);

/// Closed-form minimizer u(x) = [0,0,1,0] + (x2/x1) [0,0,0,1] on the domain
/// 0 < x1 < 1, 0 <= x2 <= x1^2/2 (and [0,0,1,0] at the origin).
Vec robinson_closed_form(double x1, double x2);

struct RobinsonRow {
  double x1 = 0.0;
  double x2 = 0.0;
  Vec minimizer;
  double closed_form_abs_err = 0.0;
};

struct RobinsonReport {
  std::vector<RobinsonRow> rows;
  double max_abs_err = 0.0;
  /// |u(eps, eps^2/2) - u(eps, 0)| / |x - x'| per epsilon; equals 1/eps.
  std::vector<std::pair<double, double>> lipschitz_ratios;
};

/// Solves the Robinson QP on the grid, compares against the closed form and
/// reports local Lipschitz ratios for eps in {0.1, 0.05, 0.01}.
/// Throws std::invalid_argument for points outside the domain.
RobinsonReport robinson_demo(const std::vector<std::pair<double, double>>& grid);

}  // namespace ubf
