#pragma once

#include <functional>
#include <vector>

#include "ubf/lse_compose.hpp"

namespace ubf {

using AlphaFn = std::function<double(double)>;

inline AlphaFn make_alpha(const ClassKappa& k) {
  return [k](double r) { return k(r); };
}

/// Per-leaf chain lifting a relative-degree-m state barrier to degree 1:
/// Phi^1 = h, Phi^{j+1} = d/dt[psi^j] + alpha_j(psi^j) along xdot = F, with
/// psi^j = Phi^j by default. The chain fields are state-only by the
/// relative-degree assumption; gradients are central differences over x.
class PhiChain {
 public:
  /// alphas.size() must be degree - 1. psi_overrides, when non-empty, give a
  /// replacement psi^j per level (invalid entries keep the default); each
  /// override must satisfy psi >= Phi at every validation state.
  static PhiChain build(const ConstraintLeaf& leaf, const SystemModel& sys,
                        std::vector<AlphaFn> alphas,
                        std::vector<ScalarField> psi_overrides = {},
                        const std::vector<Vec>& validation_states = {},
                        FdPolicy policy = {1e-4, 1e-4});

  int degree() const { return degree_; }
  /// Phi^{m} (or the psi-substituted variant), ready for composition.
  const ScalarField& effective() const { return levels_.back(); }
  /// Phi^j, 1-based.
  const ScalarField& level(int j) const { return levels_.at(j - 1); }

 private:
  int degree_ = 1;
  std::vector<ScalarField> levels_;
};

/// Outer chain restoring input dependence when the composed barrier does not
/// see u: Pi^0 = h, Pi^{i+1} = d/dt[Pi^i] + alpha_i(Pi^i) along the nominal
/// flow (xdot = F, udot = tau; the auxiliary input enters only through the
/// final constraint). Depth 0 reduces exactly to the plain barrier condition.
class PiChain {
 public:
  /// alphas.size() must equal depth; terminal_alpha is the class-K of the
  /// final condition. Depth is capped at 2 (nested finite differences).
  PiChain(const ComposedUbf& ubf, const SystemModel& sys, TauFn tau,
          std::vector<AlphaFn> alphas, ClassKappa terminal_alpha, int depth);

  int depth() const { return depth_; }

  double level_value(int i, const Vec& x, const Vec& u) const;

  struct Result {
    QpData qp;
    std::vector<double> levels;  // Pi^0 .. Pi^m at (x, u)
  };
  /// p = dPi^m/du, q = dPi^m/dx . F + dPi^m/du . tau + alpha(Pi^m).
  Result qp_data(const Vec& x, const Vec& u) const;

 private:
  double pi_value(int i, const Vec& x, const Vec& u) const;
  void pi_gradients(int i, const Vec& x, const Vec& u, Vec& gx, Vec& gu) const;

  const ComposedUbf* ubf_;
  const SystemModel* sys_;
  TauFn tau_;
  std::vector<AlphaFn> alphas_;
  ClassKappa terminal_alpha_;
  int depth_ = 0;
  // Wide steps: chain values are built from inner finite differences and the
  // numerically integrated nominal flow, so tight steps only amplify noise.
  FdPolicy chain_policy_{1e-4, 1e-3};
};

}  // namespace ubf
