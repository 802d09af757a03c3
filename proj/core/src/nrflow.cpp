#include "ubf/nrflow.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace ubf {

int NrConfig::effective_substeps() const {
  if (substeps > 0) return substeps;
  return static_cast<int>(std::ceil(horizon / 0.01));
}

Vec predict_output(const SystemModel& sys, const NrConfig& cfg, const Vec& x,
                   const Vec& u) {
  const int steps = cfg.effective_substeps();
  const double dt = cfg.horizon / steps;
  Vec xi = x;
  for (int k = 0; k < steps; ++k) {
    xi = integrate_step(sys, xi, u, dt, IntegrationScheme::kRk4);
  }
  return sys.c(xi);
}

Vec nr_tau(const SystemModel& sys, const NrConfig& cfg, const Vec& x,
           const Vec& u, double t) {
  return NrController(sys, cfg).tau(x, u, t);
}

NrController::NrController(const SystemModel& sys, NrConfig cfg)
    : sys_(&sys), cfg_(std::move(cfg)), substeps_(cfg_.effective_substeps()) {
  const int n = sys.state_dim;
  const int m = sys.input_dim;
  xi_.resize(n);
  k1_.resize(n);
  k2_.resize(n);
  k3_.resize(n);
  k4_.resize(n);
  tmp_.resize(n);
  d0_.resize(m);
  dp_.resize(m);
  dm_.resize(m);
  up_.resize(m);
  jac_.resize(m, m);
}

void NrController::integrate_horizon(const Vec& x0, const Vec& u,
                                     Vec& out) const {
  const double dt = cfg_.horizon / substeps_;
  xi_ = x0;
  for (int s = 0; s < substeps_; ++s) {
    sys_->dynamics(xi_, u, k1_);
    tmp_ = xi_ + (0.5 * dt) * k1_;
    sys_->dynamics(tmp_, u, k2_);
    tmp_ = xi_ + (0.5 * dt) * k2_;
    sys_->dynamics(tmp_, u, k3_);
    tmp_ = xi_ + dt * k3_;
    sys_->dynamics(tmp_, u, k4_);
    xi_ += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }
  sys_->output(xi_, out);
}

Vec NrController::predict(const Vec& x, const Vec& u) const {
  Vec d(sys_->input_dim);
  integrate_horizon(x, u, d);
  return d;
}

Vec NrController::tau(const Vec& x, const Vec& u, double t) const {
  const int m = sys_->input_dim;
  integrate_horizon(x, u, d0_);
  up_ = u;
  for (int j = 0; j < m; ++j) {
    const double step = cfg_.jac_policy.step(u(j));
    const double saved = up_(j);
    up_(j) = saved + step;
    integrate_horizon(x, up_, dp_);
    up_(j) = saved - step;
    integrate_horizon(x, up_, dm_);
    up_(j) = saved;
    jac_.col(j) = (dp_ - dm_) / (2.0 * step);
  }
  const Vec residual = cfg_.reference(t + cfg_.horizon) - d0_;
  Mat normal = jac_.transpose() * jac_;
  normal.diagonal().array() += cfg_.lambda;
  Eigen::FullPivLU<Mat> lu(normal);
  if (!lu.isInvertible()) {
    throw SingularJacobian("nr_tau: J^T J + lambda I is singular");
  }
  return cfg_.eta * lu.solve(jac_.transpose() * residual);
}

}  // namespace ubf
