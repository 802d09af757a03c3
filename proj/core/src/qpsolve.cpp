#include "ubf/qpsolve.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace ubf {

Vec solve_halfspace(const HalfspaceQp& qp) {
  if (qp.q >= 0.0) return Vec::Zero(qp.p.size());
  const double pn2 = qp.p.squaredNorm();
  if (pn2 == 0.0) {
    throw InfeasibleQp("solve_halfspace: p = 0 with q < 0");
  }
  return (-qp.q / pn2) * qp.p;
}

Vec solve_dense(const DenseQp& qp) {
  const int m = static_cast<int>(qp.a.rows());
  const int n = static_cast<int>(qp.a.cols());
  if (m > 8 || n > 8) {
    throw std::invalid_argument("solve_dense: enumeration bound is 8x8");
  }
  if (qp.b.size() != m) {
    throw std::invalid_argument("solve_dense: dimension mismatch");
  }
  constexpr double kTol = 1e-10;
  double best_norm = std::numeric_limits<double>::infinity();
  Vec best;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> active;
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) active.push_back(i);
    }
    Vec v;
    if (active.empty()) {
      v = Vec::Zero(n);
    } else {
      const int k = static_cast<int>(active.size());
      Mat as(k, n);
      Vec bs(k);
      for (int i = 0; i < k; ++i) {
        as.row(i) = qp.a.row(active[i]);
        bs(i) = qp.b(active[i]);
      }
      // KKT for min 1/2 v^T v s.t. A_S v = b_S: v = A_S^T lambda.
      const Mat gram = as * as.transpose();
      Eigen::FullPivLU<Mat> lu(gram);
      if (!lu.isInvertible()) continue;
      const Vec lambda = lu.solve(bs);
      if ((lambda.array() < -kTol).any()) continue;
      v = as.transpose() * lambda;
      if ((as * v - bs).lpNorm<Eigen::Infinity>() > 1e-8) continue;
    }
    if (((qp.a * v - qp.b).array() < -1e-9).any()) continue;
    const double norm = v.squaredNorm();
    if (norm < best_norm) {
      best_norm = norm;
      best = v;
    }
  }
  if (!best.size()) throw InfeasibleQp("solve_dense: no feasible candidate");
  return best;
}

DenseQp robinson_qp(double x1, double x2) {
  DenseQp qp;
  qp.a.resize(4, 4);
  qp.a << 0, -1, 1, 0,
          0,  1, 1, 0,
         -1,  0, 1, 0,
          1,  0, 1, x1;
  qp.b.resize(4);
  qp.b << 1, 1, 1, 1 + x2;
  return qp;
}

Vec robinson_closed_form(double x1, double x2) {
  Vec u(4);
  u << 0, 0, 1, 0;
  if (x1 == 0.0 && x2 == 0.0) return u;
  if (!(x1 > 0.0 && x1 < 1.0 && x2 >= 0.0 && x2 <= x1 * x1 / 2.0)) {
    throw std::invalid_argument("robinson_closed_form: point outside domain");
  }
  u(3) = x2 / x1;
  return u;
}

RobinsonReport robinson_demo(
    const std::vector<std::pair<double, double>>& grid) {
  RobinsonReport report;
  for (const auto& [x1, x2] : grid) {
    RobinsonRow row;
    row.x1 = x1;
    row.x2 = x2;
    row.minimizer = solve_dense(robinson_qp(x1, x2));
    row.closed_form_abs_err =
        (row.minimizer - robinson_closed_form(x1, x2)).lpNorm<Eigen::Infinity>();
    report.max_abs_err = std::max(report.max_abs_err, row.closed_form_abs_err);
    report.rows.push_back(std::move(row));
  }
  for (double eps : {0.1, 0.05, 0.01}) {
    const Vec ua = solve_dense(robinson_qp(eps, eps * eps / 2.0));
    const Vec ub = solve_dense(robinson_qp(eps, 0.0));
    const double ratio = (ua - ub).norm() / (eps * eps / 2.0);
    report.lipschitz_ratios.emplace_back(eps, ratio);
  }
  return report;
}

}  // namespace ubf
