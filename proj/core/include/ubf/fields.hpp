#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ubf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Central-difference stepping rule: step = max(abs_floor, rel * |coordinate|).
struct FdPolicy {
  double rel = 1e-6;
  double abs_floor = 1e-8;

  double step(double coordinate) const;
};

using ValueFn = std::function<double(const Vec& x, const Vec& u)>;
using GradFn = std::function<Vec(const Vec& x, const Vec& u)>;

/// Central-difference gradient of a scalar function of (x, u).
/// Throws std::domain_error if the function is non-finite at a probe point.
void fd_gradient(const ValueFn& f, const Vec& x, const Vec& u,
                 const FdPolicy& policy, Vec& grad_x, Vec& grad_u);

/// A differentiable scalar field over (state, input). Gradients are either
/// analytic (supplied at construction) or realized by central differences.
class ScalarField {
 public:
  enum class Tag { kAnalytic, kFiniteDifference };

  ScalarField() = default;

  static ScalarField analytic(ValueFn value, GradFn grad_x, GradFn grad_u);
  /// Finite-difference-backed field. `state_only` skips input probes and
  /// reports a zero input-gradient (for fields known to not depend on u).
  static ScalarField from_value(ValueFn value, FdPolicy policy = {},
                                bool state_only = false);

  double value(const Vec& x, const Vec& u) const { return value_(x, u); }
  Vec grad_x(const Vec& x, const Vec& u) const;
  Vec grad_u(const Vec& x, const Vec& u) const;
  /// Evaluates both gradients in one pass (cheaper for the FD-backed case).
  void gradients(const Vec& x, const Vec& u, Vec& gx, Vec& gu) const;

  Tag tag() const { return tag_; }
  bool valid() const { return static_cast<bool>(value_); }

 private:
  ValueFn value_;
  GradFn grad_x_;
  GradFn grad_u_;
  FdPolicy policy_;
  Tag tag_ = Tag::kFiniteDifference;
  bool state_only_ = false;
};

/// Class-K-infinity comparison function: linear c*r or cubic c*r^3, extended
/// to negative arguments as an odd function.
struct ClassKappa {
  enum class Kind { kLinear, kCubic };

  ClassKappa(Kind kind, double coefficient);

  double operator()(double r) const;

  Kind kind;
  double coefficient;
};

struct SystemModel;  // systems.hpp

/// Lyapunov pair: V positive definite, P the required decrease rate. Both are
/// state-only fields (the input argument is ignored).
struct ClfLeaf {
  ScalarField v;
  ScalarField p;
};

/// Default Lyapunov pair V = 1/2 |x|^2, P = c |x|^2.
ClfLeaf quadratic_clf(int state_dim, double decrease_coeff = 1.0);

/// Barrier sum_k (x_k - c_k)^2 - offset over the leading coordinates of x.
ScalarField quadratic_distance_barrier(const Vec& center, double offset);

/// Barrier bound - sum_{j in coords} u_j^2 (coords are 0-based indices).
ScalarField input_norm_barrier(double bound, const std::vector<int>& coords);

/// Stability field h_V(x, u) = -grad V(x) . F(x, u) - P(x), gradients by
/// central differences.
ScalarField stability_field(const ClfLeaf& clf, const SystemModel& sys,
                            FdPolicy policy = {});

/// Stabilizing feedback for a control-affine system from a Lyapunov pair:
/// with a = grad V . f and b = g^T grad V, returns 0 when b = 0 and
/// -((a + sqrt(a^2 + |b|^4)) / |b|^2) b otherwise.
Vec sontag_feedback(const ClfLeaf& clf, const SystemModel& sys, const Vec& x);

}  // namespace ubf
