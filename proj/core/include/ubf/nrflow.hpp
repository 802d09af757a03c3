#pragma once

#include <functional>

#include "ubf/systems.hpp"

namespace ubf {

/// Newton-Raphson flow tracking controller settings. `substeps` = 0 means
/// ceil(horizon / 0.01) RK4 substeps for the output prediction.
struct NrConfig {
  double horizon = 0.55;  // seconds
  double eta = 25.0;      // controller gain
  double lambda = 1e-8;   // damping for the Jacobian inverse
  int substeps = 0;
  FdPolicy jac_policy;    // step rule for the input Jacobian
  std::function<Vec(double t)> reference;  // r(t), output-dimension vector

  int effective_substeps() const;
};

struct SingularJacobian : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Predicted output after holding u constant for the horizon:
/// integrates xi' = F(xi, u) with RK4 and returns c(xi(t + T)).
Vec predict_output(const SystemModel& sys, const NrConfig& cfg, const Vec& x,
                   const Vec& u);

/// Input derivative eta * (J^T J + lambda I)^{-1} J^T (r(t+T) - d(x, u)) with
/// J = dd/du by central differences column-by-column. lambda = 0 uses the
/// exact inverse and throws SingularJacobian when J^T J is not invertible.
Vec nr_tau(const SystemModel& sys, const NrConfig& cfg, const Vec& x,
           const Vec& u, double t);

/// Same controller with preallocated workspace for tight simulation loops.
/// Not thread-safe per instance; one run is strictly sequential.
class NrController {
 public:
  NrController(const SystemModel& sys, NrConfig cfg);

  Vec tau(const Vec& x, const Vec& u, double t) const;
  Vec predict(const Vec& x, const Vec& u) const;
  const NrConfig& config() const { return cfg_; }

 private:
  void integrate_horizon(const Vec& x0, const Vec& u, Vec& out) const;

  const SystemModel* sys_;
  NrConfig cfg_;
  int substeps_;
  // scratch
  mutable Vec xi_, k1_, k2_, k3_, k4_, tmp_, d0_, dp_, dm_, up_;
  mutable Mat jac_;
};

}  // namespace ubf
