#include "ubf/lse_compose.hpp"

#include <cmath>
#include <memory>

namespace ubf {

namespace {

// Shifted two-term softmax/softmin step; weights are the gradient
// coefficients of the two arguments.
double soft_step(double a, double b, double beta, SetOp op, double& wa,
                 double& wb) {
  const double sign = op == SetOp::kUnion ? 1.0 : -1.0;
  const double sa = sign * beta * a;
  const double sb = sign * beta * b;
  const double m = std::max(sa, sb);
  const double ea = std::exp(sa - m);
  const double eb = std::exp(sb - m);
  const double sum = ea + eb;
  wa = ea / sum;
  wb = eb / sum;
  return sign * (m + std::log(sum)) / beta;
}

}  // namespace

double union_run_log_correction(const std::vector<SetOp>& ops) {
  double lc = 0.0;
  for (const auto& run : level_runs(ops)) {
    if (run.op == SetOp::kUnion) {
      lc += std::log(static_cast<double>(run.indices.size()) + 1.0);
    }
  }
  return lc;
}

double lse_fold(const std::vector<double>& values,
                const std::vector<SetOp>& ops, double beta,
                double log_correction) {
  if (values.empty()) throw std::invalid_argument("lse_fold: no values");
  if (ops.size() != values.size() - 1) {
    throw std::invalid_argument("lse_fold: operator count mismatch");
  }
  double acc = values[0];
  double wa, wb;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    acc = soft_step(acc, values[i + 1], beta, ops[i], wa, wb);
  }
  return acc - log_correction / beta;
}

ComposedUbf::ComposedUbf(SpecExpr spec, double beta)
    : ComposedUbf(std::move(spec), beta, {}) {}

ComposedUbf::ComposedUbf(SpecExpr spec, double beta,
                         std::vector<ScalarField> effective)
    : spec_(std::move(spec)), beta_(beta), effective_(std::move(effective)) {
  if (beta_ <= 0.0) throw std::invalid_argument("ComposedUbf: beta <= 0");
  if (!effective_.empty() &&
      effective_.size() != static_cast<std::size_t>(spec_.size())) {
    throw std::invalid_argument("ComposedUbf: effective field count mismatch");
  }
  log_correction_ = union_run_log_correction(spec_.ops());
}

double ComposedUbf::correction() const { return std::exp(-log_correction_); }

double ComposedUbf::value(const Vec& x, const Vec& u) const {
  std::vector<double> values;
  values.reserve(spec_.size());
  for (int i = 0; i < spec_.size(); ++i) {
    const ScalarField& field =
        effective_.empty() ? spec_.leaves()[i].barrier : effective_[i];
    values.push_back(field.value(x, u));
  }
  return lse_fold(values, spec_.ops(), beta_, log_correction_);
}

UbfEval ComposedUbf::evaluate(const Vec& x, const Vec& u) const {
  const auto& ops = spec_.ops();
  const ScalarField& first =
      effective_.empty() ? spec_.leaves()[0].barrier : effective_[0];
  UbfEval acc;
  acc.h = first.value(x, u);
  first.gradients(x, u, acc.grad_x, acc.grad_u);
  Vec gx, gu;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const ScalarField& field = effective_.empty()
                                   ? spec_.leaves()[i + 1].barrier
                                   : effective_[i + 1];
    const double v = field.value(x, u);
    field.gradients(x, u, gx, gu);
    double wa, wb;
    acc.h = soft_step(acc.h, v, beta_, ops[i], wa, wb);
    acc.grad_x = wa * acc.grad_x + wb * gx;
    acc.grad_u = wa * acc.grad_u + wb * gu;
  }
  acc.h -= log_correction_ / beta_;
  return acc;
}

ScalarField ComposedUbf::as_field() const {
  auto self = std::make_shared<ComposedUbf>(*this);
  return ScalarField::analytic(
      [self](const Vec& x, const Vec& u) { return self->value(x, u); },
      [self](const Vec& x, const Vec& u) {
        return self->evaluate(x, u).grad_x;
      },
      [self](const Vec& x, const Vec& u) {
        return self->evaluate(x, u).grad_u;
      });
}

QpData ComposedUbf::qp_data(const SystemModel& sys, const TauFn& tau,
                            const ClassKappa& alpha, const Vec& x,
                            const Vec& u) const {
  const UbfEval ev = evaluate(x, u);
  QpData qp;
  qp.p = ev.grad_u;
  qp.q = ev.grad_x.dot(sys.f(x, u)) + ev.grad_u.dot(tau(x, u)) + alpha(ev.h);
  return qp;
}

}  // namespace ubf
