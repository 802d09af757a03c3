#pragma once

#include <functional>
#include <string>

#include "ubf/fields.hpp"

namespace ubf {

/// Nonlinear dynamics xdot = F(x, u) with an output map y = c(x). The output
/// dimension equals the input dimension (the tracking update inverts a square
/// Jacobian). `drift` and `input_matrix` are set only for control-affine
/// models (F = f(x) + g(x) u).
struct SystemModel {
  std::string name;
  int state_dim = 0;
  int input_dim = 0;
  std::function<void(const Vec& x, const Vec& u, Vec& dx)> dynamics;
  std::function<void(const Vec& x, Vec& y)> output;
  std::function<void(const Vec& x, Vec& f)> drift;          // optional
  std::function<void(const Vec& x, Mat& g)> input_matrix;   // optional

  bool is_affine() const { return static_cast<bool>(drift); }

  Vec f(const Vec& x, const Vec& u) const;  // allocating convenience
  Vec c(const Vec& x) const;
};

struct QuadrotorParams {
  double mass = 1.0;               // kg
  Eigen::Vector3d inertia{0.01, 0.01, 0.02};  // diagonal, kg m^2
  double gravity = 9.81;           // m/s^2
};

/// Planar robot xdot = u; n = m = 2, c(x) = x.
SystemModel single_integrator();

/// Planar double integrator: x = (pos, vel), u = accel; c(x) = pos.
SystemModel double_integrator();

/// 12-state quadrotor: (position, ZYX Euler angles, velocity, body rates),
/// inputs (total thrust, moments); c(x) = (x, y, z, yaw).
SystemModel quadrotor(const QuadrotorParams& params = {});

/// ZYX (yaw-pitch-roll) rotation matrix from Euler angles (roll, pitch, yaw).
Eigen::Matrix3d euler_zyx_rotation(const Eigen::Vector3d& rpy);

enum class IntegrationScheme { kEuler, kRk4 };

/// One explicit step with u held constant. dt = 0 returns x unchanged.
Vec integrate_step(const SystemModel& sys, const Vec& x, const Vec& u,
                   double dt, IntegrationScheme scheme);

}  // namespace ubf
