#include <benchmark/benchmark.h>

#include "ubf/hocomp.hpp"
#include "ubf/lse_compose.hpp"
#include "ubf/nrflow.hpp"
#include "ubf/qpsolve.hpp"
#include "ubf/spec_lang.hpp"
#include "ubf/systems.hpp"

namespace {

using namespace ubf;

LeafRegistry make_registry() {
  LeafRegistry reg;
  Vec c1(2), c2(2);
  c1 << 3.0, 3.0;
  c2 << 1.5, 1.5;
  reg["h1"] = {"h1", LeafKind::kState, quadratic_distance_barrier(c1, 0.4), 1};
  reg["h2"] = {"h2", LeafKind::kState, quadratic_distance_barrier(c2, 0.25), 1};
  reg["h3"] = {"h3", LeafKind::kInput, input_norm_barrier(120.0, {0, 1}), 1};
  return reg;
}

void bm_compose_evaluate(benchmark::State& state) {
  const LeafRegistry reg = make_registry();
  const ComposedUbf ubf(SpecExpr::parse("h1 & h2 & h3", reg), 10.0);
  Vec x(2), u(2);
  x << 0.5, 1.0;
  u << 2.0, -1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ubf.evaluate(x, u));
  }
}
BENCHMARK(bm_compose_evaluate);

void bm_nr_tau_single_integrator(benchmark::State& state) {
  const SystemModel sys = single_integrator();
  NrConfig cfg;
  cfg.horizon = 0.55;
  cfg.eta = 25.0;
  Vec goal(2);
  goal << 4.5, 4.5;
  cfg.reference = [goal](double) { return goal; };
  const NrController controller(sys, cfg);
  Vec x(2), u(2);
  x << 0.5, 1.0;
  u << 0.0, 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(controller.tau(x, u, 0.0));
  }
}
BENCHMARK(bm_nr_tau_single_integrator);

void bm_pi_chain_qp_data(benchmark::State& state) {
  const SystemModel sys = double_integrator();
  LeafRegistry reg = make_registry();
  reg["h1"].relative_degree = 2;
  reg["h2"].relative_degree = 2;
  const SpecExpr spec = SpecExpr::parse("h1 & h2 & h3", reg);
  std::vector<ScalarField> effective;
  for (const auto& leaf : spec.leaves()) {
    if (leaf.relative_degree <= 1) {
      effective.push_back(leaf.barrier);
    } else {
      effective.push_back(
          PhiChain::build(leaf, sys, {[](double r) { return r; }}).effective());
    }
  }
  const ComposedUbf ubf(spec, 20.0, std::move(effective));
  const TauFn tau = [](const Vec&, const Vec& u) { return Vec::Zero(u.size()); };
  const AlphaFn alpha = [](double r) { return 20.0 * r; };
  const PiChain chain(ubf, sys, tau, {alpha, alpha},
                      ClassKappa(ClassKappa::Kind::kLinear, 800.0), 2);
  Vec x(4), u(2);
  x << 0.5, 1.0, 0.0, 0.0;
  u << 1.0, 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(chain.qp_data(x, u));
  }
}
BENCHMARK(bm_pi_chain_qp_data);

void bm_solve_halfspace(benchmark::State& state) {
  Vec p(4);
  p << 1.0, -2.0, 0.5, 3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_halfspace({p, -1.0}));
  }
}
BENCHMARK(bm_solve_halfspace);

}  // namespace

BENCHMARK_MAIN();
