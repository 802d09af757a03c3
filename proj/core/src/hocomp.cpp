#include "ubf/hocomp.hpp"

#include <cmath>
#include <memory>

namespace ubf {

PhiChain PhiChain::build(const ConstraintLeaf& leaf, const SystemModel& sys,
                         std::vector<AlphaFn> alphas,
                         std::vector<ScalarField> psi_overrides,
                         const std::vector<Vec>& validation_states,
                         FdPolicy policy) {
  const int degree = leaf.relative_degree;
  if (degree < 1) {
    throw std::invalid_argument("PhiChain: relative degree must be >= 1");
  }
  if (alphas.size() != static_cast<std::size_t>(degree - 1)) {
    throw std::invalid_argument("PhiChain: need degree - 1 class-K functions");
  }
  if (psi_overrides.size() > static_cast<std::size_t>(degree - 1)) {
    throw std::invalid_argument("PhiChain: too many psi overrides");
  }
  PhiChain chain;
  chain.degree_ = degree;
  chain.levels_.push_back(leaf.barrier);
  const Vec u0 = Vec::Zero(sys.input_dim);
  // The chain fields own a copy so they stay valid if the caller's model
  // goes out of scope.
  const auto sys_ptr = std::make_shared<const SystemModel>(sys);
  for (int j = 1; j < degree; ++j) {
    ScalarField psi = chain.levels_.back();
    if (static_cast<std::size_t>(j) <= psi_overrides.size() &&
        psi_overrides[j - 1].valid()) {
      const ScalarField& candidate = psi_overrides[j - 1];
      for (const Vec& xs : validation_states) {
        if (candidate.value(xs, u0) < psi.value(xs, u0) - 1e-12) {
          throw std::invalid_argument(
              "PhiChain: psi override below Phi at a validation state");
        }
      }
      psi = candidate;
    }
    AlphaFn alpha = alphas[j - 1];
    auto value = [psi, sys_ptr, alpha](const Vec& x, const Vec& u) {
      const Vec g = psi.grad_x(x, u);
      return g.dot(sys_ptr->f(x, u)) + alpha(psi.value(x, u));
    };
    chain.levels_.push_back(ScalarField::from_value(value, policy, true));
  }
  return chain;
}

PiChain::PiChain(const ComposedUbf& ubf, const SystemModel& sys, TauFn tau,
                 std::vector<AlphaFn> alphas, ClassKappa terminal_alpha,
                 int depth)
    : ubf_(&ubf),
      sys_(&sys),
      tau_(std::move(tau)),
      alphas_(std::move(alphas)),
      terminal_alpha_(terminal_alpha),
      depth_(depth) {
  if (depth_ < 0 || depth_ > 2) {
    throw std::invalid_argument("PiChain: depth must be in [0, 2]");
  }
  if (alphas_.size() != static_cast<std::size_t>(depth_)) {
    throw std::invalid_argument("PiChain: need one class-K per level");
  }
}

double PiChain::pi_value(int i, const Vec& x, const Vec& u) const {
  if (i == 0) return ubf_->value(x, u);
  Vec gx, gu;
  pi_gradients(i - 1, x, u, gx, gu);
  const double prev = pi_value(i - 1, x, u);
  return gx.dot(sys_->f(x, u)) + gu.dot(tau_(x, u)) + alphas_[i - 1](prev);
}

void PiChain::pi_gradients(int i, const Vec& x, const Vec& u, Vec& gx,
                           Vec& gu) const {
  if (i == 0) {
    const UbfEval ev = ubf_->evaluate(x, u);
    gx = ev.grad_x;
    gu = ev.grad_u;
    return;
  }
  auto value = [this, i](const Vec& xs, const Vec& us) {
    return pi_value(i, xs, us);
  };
  fd_gradient(value, x, u, chain_policy_, gx, gu);
}

double PiChain::level_value(int i, const Vec& x, const Vec& u) const {
  if (i < 0 || i > depth_) {
    throw std::invalid_argument("PiChain: level out of range");
  }
  return pi_value(i, x, u);
}

PiChain::Result PiChain::qp_data(const Vec& x, const Vec& u) const {
  Result res;
  res.levels.reserve(depth_ + 1);
  for (int i = 0; i <= depth_; ++i) res.levels.push_back(pi_value(i, x, u));
  Vec gx, gu;
  pi_gradients(depth_, x, u, gx, gu);
  res.qp.p = gu;
  res.qp.q = gx.dot(sys_->f(x, u)) + gu.dot(tau_(x, u)) +
             terminal_alpha_(res.levels.back());
  if (!std::isfinite(res.qp.q) || !res.qp.p.allFinite()) {
    throw std::domain_error("PiChain: non-finite constraint data");
  }
  return res;
}

}  // namespace ubf
