#include "ubf/fields.hpp"

#include <cmath>

#include "ubf/systems.hpp"

namespace ubf {

double FdPolicy::step(double coordinate) const {
  return std::max(abs_floor, rel * std::abs(coordinate));
}

namespace {

double central_diff(const ValueFn& f, Vec& point, int k, const Vec& x,
                    const Vec& u, bool over_state, double step) {
  const double saved = point(k);
  point(k) = saved + step;
  const double fp = over_state ? f(point, u) : f(x, point);
  point(k) = saved - step;
  const double fm = over_state ? f(point, u) : f(x, point);
  point(k) = saved;
  if (!std::isfinite(fp) || !std::isfinite(fm)) {
    throw std::domain_error("fd_gradient: non-finite value at probe point");
  }
  return (fp - fm) / (2.0 * step);
}

}  // namespace

void fd_gradient(const ValueFn& f, const Vec& x, const Vec& u,
                 const FdPolicy& policy, Vec& grad_x, Vec& grad_u) {
  grad_x.resize(x.size());
  grad_u.resize(u.size());
  Vec xp = x;
  for (int k = 0; k < x.size(); ++k) {
    grad_x(k) = central_diff(f, xp, k, x, u, true, policy.step(x(k)));
  }
  Vec up = u;
  for (int k = 0; k < u.size(); ++k) {
    grad_u(k) = central_diff(f, up, k, x, u, false, policy.step(u(k)));
  }
}

ScalarField ScalarField::analytic(ValueFn value, GradFn grad_x, GradFn grad_u) {
  ScalarField f;
  f.value_ = std::move(value);
  f.grad_x_ = std::move(grad_x);
  f.grad_u_ = std::move(grad_u);
  f.tag_ = Tag::kAnalytic;
  return f;
}

ScalarField ScalarField::from_value(ValueFn value, FdPolicy policy,
                                    bool state_only) {
  ScalarField f;
  f.value_ = std::move(value);
  f.policy_ = policy;
  f.tag_ = Tag::kFiniteDifference;
  f.state_only_ = state_only;
  return f;
}

Vec ScalarField::grad_x(const Vec& x, const Vec& u) const {
  if (tag_ == Tag::kAnalytic) return grad_x_(x, u);
  Vec gx, gu;
  gradients(x, u, gx, gu);
  return gx;
}

Vec ScalarField::grad_u(const Vec& x, const Vec& u) const {
  if (tag_ == Tag::kAnalytic) return grad_u_(x, u);
  if (state_only_) return Vec::Zero(u.size());
  Vec gx, gu;
  gradients(x, u, gx, gu);
  return gu;
}

void ScalarField::gradients(const Vec& x, const Vec& u, Vec& gx,
                            Vec& gu) const {
  if (tag_ == Tag::kAnalytic) {
    gx = grad_x_(x, u);
    gu = grad_u_(x, u);
    return;
  }
  if (state_only_) {
    gx.resize(x.size());
    Vec xp = x;
    for (int k = 0; k < x.size(); ++k) {
      const double step = policy_.step(x(k));
      const double saved = xp(k);
      xp(k) = saved + step;
      const double fp = value_(xp, u);
      xp(k) = saved - step;
      const double fm = value_(xp, u);
      xp(k) = saved;
      if (!std::isfinite(fp) || !std::isfinite(fm)) {
        throw std::domain_error("ScalarField: non-finite value at probe point");
      }
      gx(k) = (fp - fm) / (2.0 * step);
    }
    gu = Vec::Zero(u.size());
    return;
  }
  fd_gradient(value_, x, u, policy_, gx, gu);
}

ClassKappa::ClassKappa(Kind kind_in, double coefficient_in)
    : kind(kind_in), coefficient(coefficient_in) {
  if (coefficient <= 0.0) {
    throw std::invalid_argument("ClassKappa: coefficient must be positive");
  }
}

double ClassKappa::operator()(double r) const {
  switch (kind) {
    case Kind::kLinear:
      return coefficient * r;
    case Kind::kCubic:
      return coefficient * r * r * r;
  }
  return 0.0;
}

ClfLeaf quadratic_clf(int state_dim, double decrease_coeff) {
  ClfLeaf clf;
  clf.v = ScalarField::analytic(
      [](const Vec& x, const Vec&) { return 0.5 * x.squaredNorm(); },
      [](const Vec& x, const Vec&) { return Vec(x); },
      [state_dim](const Vec&, const Vec& u) { return Vec(Vec::Zero(u.size())); });
  clf.p = ScalarField::analytic(
      [decrease_coeff](const Vec& x, const Vec&) {
        return decrease_coeff * x.squaredNorm();
      },
      [decrease_coeff](const Vec& x, const Vec&) {
        return Vec(2.0 * decrease_coeff * x);
      },
      [](const Vec&, const Vec& u) { return Vec(Vec::Zero(u.size())); });
  return clf;
}

ScalarField quadratic_distance_barrier(const Vec& center, double offset) {
  const int dim = static_cast<int>(center.size());
  return ScalarField::analytic(
      [center, offset, dim](const Vec& x, const Vec&) {
        return (x.head(dim) - center).squaredNorm() - offset;
      },
      [center, dim](const Vec& x, const Vec&) {
        Vec g = Vec::Zero(x.size());
        g.head(dim) = 2.0 * (x.head(dim) - center);
        return g;
      },
      [](const Vec&, const Vec& u) { return Vec(Vec::Zero(u.size())); });
}

ScalarField input_norm_barrier(double bound, const std::vector<int>& coords) {
  return ScalarField::analytic(
      [bound, coords](const Vec&, const Vec& u) {
        double s = 0.0;
        for (int j : coords) s += u(j) * u(j);
        return bound - s;
      },
      [](const Vec& x, const Vec&) { return Vec(Vec::Zero(x.size())); },
      [coords](const Vec&, const Vec& u) {
        Vec g = Vec::Zero(u.size());
        for (int j : coords) g(j) = -2.0 * u(j);
        return g;
      });
}

ScalarField stability_field(const ClfLeaf& clf, const SystemModel& sys,
                            FdPolicy policy) {
  auto value = [clf, &sys](const Vec& x, const Vec& u) {
    const Vec gv = clf.v.grad_x(x, u);
    return -gv.dot(sys.f(x, u)) - clf.p.value(x, u);
  };
  return ScalarField::from_value(value, policy);
}

Vec sontag_feedback(const ClfLeaf& clf, const SystemModel& sys, const Vec& x) {
  if (!sys.is_affine()) {
    throw std::invalid_argument("sontag_feedback: system is not control-affine");
  }
  const Vec u0 = Vec::Zero(sys.input_dim);
  const Vec gv = clf.v.grad_x(x, u0);
  Vec f(sys.state_dim);
  sys.drift(x, f);
  Mat g(sys.state_dim, sys.input_dim);
  sys.input_matrix(x, g);
  const double a = gv.dot(f);
  const Vec b = g.transpose() * gv;
  const double bn2 = b.squaredNorm();
  if (bn2 == 0.0) return Vec::Zero(sys.input_dim);
  const double scale = (a + std::sqrt(a * a + bn2 * bn2)) / bn2;
  return -scale * b;
}

}  // namespace ubf
