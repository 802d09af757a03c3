#pragma once

#include <vector>

#include "ubf/spec_lang.hpp"
#include "ubf/systems.hpp"

namespace ubf {

struct UbfEval {
  double h = 0.0;
  Vec grad_x;
  Vec grad_u;
};

/// QP constraint data p^T v + q >= 0 for the auxiliary input.
struct QpData {
  Vec p;
  double q = 0.0;
};

using TauFn = std::function<Vec(const Vec& x, const Vec& u)>;

/// Single smooth barrier composed from a specification by the log-sum-exp
/// fold: union steps are softmax_beta, intersection steps softmin_beta, both
/// in overflow-safe shifted form, minus a log-correction so that
/// h(x,u) <= crisp fold value everywhere. Gradients propagate analytically
/// through the fold (leaf gradients may themselves be finite-difference).
class ComposedUbf {
 public:
  /// Composes the spec's own leaf barriers.
  ComposedUbf(SpecExpr spec, double beta);
  /// Composes with per-leaf effective fields substituted (high-order chains).
  ComposedUbf(SpecExpr spec, double beta, std::vector<ScalarField> effective);

  UbfEval evaluate(const Vec& x, const Vec& u) const;
  double value(const Vec& x, const Vec& u) const;

  double beta() const { return beta_; }
  /// Total correction b in (0, 1]; h = fold - ln(1/b)/beta.
  double correction() const;
  const SpecExpr& spec() const { return spec_; }
  const std::vector<ScalarField>& effective_fields() const {
    return effective_;
  }

  ScalarField as_field() const;

  /// Constraint data of the plain (depth-0) barrier condition:
  /// p = dh/du, q = dh/dx . F + dh/du . tau + alpha(h).
  QpData qp_data(const SystemModel& sys, const TauFn& tau,
                 const ClassKappa& alpha, const Vec& x, const Vec& u) const;

 private:
  SpecExpr spec_;
  double beta_ = 1.0;
  double log_correction_ = 0.0;  // ln(1/b) >= 0
  std::vector<ScalarField> effective_;
};

/// Plain overflow-safe fold of raw values under ops minus the correction for
/// the given union runs; the scalar counterpart of ComposedUbf::evaluate.
/// Used as a cheap path and by the test oracles.
double lse_fold(const std::vector<double>& values,
                const std::vector<SetOp>& ops, double beta,
                double log_correction);

/// ln(1/b) for the per-union-run correction b = prod 1/(run_length + 1).
double union_run_log_correction(const std::vector<SetOp>& ops);

}  // namespace ubf
