#include "ubf/systems.hpp"

#include <cmath>

#include <Eigen/Geometry>

namespace ubf {

Vec SystemModel::f(const Vec& x, const Vec& u) const {
  Vec dx(state_dim);
  dynamics(x, u, dx);
  return dx;
}

Vec SystemModel::c(const Vec& x) const {
  Vec y(input_dim);
  output(x, y);
  return y;
}

SystemModel single_integrator() {
  SystemModel sys;
  sys.name = "single_integrator";
  sys.state_dim = 2;
  sys.input_dim = 2;
  sys.dynamics = [](const Vec&, const Vec& u, Vec& dx) { dx = u; };
  sys.output = [](const Vec& x, Vec& y) { y = x; };
  sys.drift = [](const Vec&, Vec& f) { f.setZero(2); };
  sys.input_matrix = [](const Vec&, Mat& g) { g = Mat::Identity(2, 2); };
  return sys;
}

SystemModel double_integrator() {
  SystemModel sys;
  sys.name = "double_integrator";
  sys.state_dim = 4;
  sys.input_dim = 2;
  sys.dynamics = [](const Vec& x, const Vec& u, Vec& dx) {
    dx.resize(4);
    dx(0) = x(2);
    dx(1) = x(3);
    dx(2) = u(0);
    dx(3) = u(1);
  };
  sys.output = [](const Vec& x, Vec& y) { y = x.head(2); };
  sys.drift = [](const Vec& x, Vec& f) {
    f.resize(4);
    f(0) = x(2);
    f(1) = x(3);
    f(2) = 0.0;
    f(3) = 0.0;
  };
  sys.input_matrix = [](const Vec&, Mat& g) {
    g = Mat::Zero(4, 2);
    g(2, 0) = 1.0;
    g(3, 1) = 1.0;
  };
  return sys;
}

Eigen::Matrix3d euler_zyx_rotation(const Eigen::Vector3d& rpy) {
  return (Eigen::AngleAxisd(rpy(2), Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(rpy(1), Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(rpy(0), Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

SystemModel quadrotor(const QuadrotorParams& params) {
  SystemModel sys;
  sys.name = "quadrotor";
  sys.state_dim = 12;
  sys.input_dim = 4;
  const double m = params.mass;
  const Eigen::Vector3d inertia = params.inertia;
  const double g = params.gravity;
  sys.dynamics = [m, inertia, g](const Vec& x, const Vec& u, Vec& dx) {
    dx.resize(12);
    const Eigen::Vector3d rpy = x.segment<3>(3);
    const Eigen::Vector3d vel = x.segment<3>(6);
    const Eigen::Vector3d omega = x.segment<3>(9);
    const Eigen::Matrix3d rot = euler_zyx_rotation(rpy);
    dx.segment<3>(0) = vel;
    dx.segment<3>(3) = omega;
    dx.segment<3>(6) =
        (u(0) / m) * rot.col(2) - g * Eigen::Vector3d::UnitZ();
    const Eigen::Vector3d torque = u.segment<3>(1);
    const Eigen::Vector3d i_omega = inertia.cwiseProduct(omega);
    dx.segment<3>(9) =
        (torque - omega.cross(i_omega)).cwiseQuotient(inertia);
  };
  sys.output = [](const Vec& x, Vec& y) {
    y.resize(4);
    y(0) = x(0);
    y(1) = x(1);
    y(2) = x(2);
    y(3) = x(5);
  };
  sys.drift = [m, inertia, g](const Vec& x, Vec& f) {
    f.resize(12);
    const Eigen::Vector3d omega = x.segment<3>(9);
    f.segment<3>(0) = x.segment<3>(6);
    f.segment<3>(3) = omega;
    f.segment<3>(6) = -g * Eigen::Vector3d::UnitZ();
    const Eigen::Vector3d i_omega = inertia.cwiseProduct(omega);
    f.segment<3>(9) = (-omega.cross(i_omega)).cwiseQuotient(inertia);
  };
  sys.input_matrix = [m, inertia](const Vec& x, Mat& gmat) {
    gmat = Mat::Zero(12, 4);
    const Eigen::Matrix3d rot = euler_zyx_rotation(x.segment<3>(3));
    gmat.block<3, 1>(6, 0) = rot.col(2) / m;
    gmat.block<3, 3>(9, 1) = inertia.cwiseInverse().asDiagonal();
  };
  return sys;
}

Vec integrate_step(const SystemModel& sys, const Vec& x, const Vec& u,
                   double dt, IntegrationScheme scheme) {
  if (dt == 0.0) return x;
  Vec k1(sys.state_dim);
  sys.dynamics(x, u, k1);
  if (scheme == IntegrationScheme::kEuler) return x + dt * k1;
  Vec k2(sys.state_dim), k3(sys.state_dim), k4(sys.state_dim);
  sys.dynamics(x + 0.5 * dt * k1, u, k2);
  sys.dynamics(x + 0.5 * dt * k2, u, k3);
  sys.dynamics(x + dt * k3, u, k4);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace ubf
