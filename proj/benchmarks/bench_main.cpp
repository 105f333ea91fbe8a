// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <memory>

#include "ubmc/coupled_kernel.hpp"
#include "ubmc/fem1d.hpp"
#include "ubmc/models/elliptic.hpp"
#include "ubmc/models/sirx.hpp"
#include "ubmc/models/toy.hpp"
#include "ubmc/rng.hpp"

namespace {

using namespace ubmc;

void BM_PhiloxUniform(benchmark::State& state) {
  RngStream s = derive_stream({1, 0, StreamTag::Chain});
  double acc = 0.0;
  for (auto _ : state) acc += s.uniform();
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxUniform);

void BM_FemSolve(benchmark::State& state) {
  const Mesh1d mesh{0.0, 1.0, state.range(0)};
  const Dvec phi = Dvec::Constant(mesh.cells, 1.5);
  const Dvec load = trapezoid_load(mesh, [](double t) { return 100.0 * t; });
  for (auto _ : state) benchmark::DoNotOptimize(fem_solve(mesh, phi, load));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FemSolve)->RangeMultiplier(4)->Range(16, 16384)->Complexity(benchmark::oN);

void BM_SirxIntegrate(benchmark::State& state) {
  Vec x(3);
  x << 0.002, 0.3, 15.0;
  const int level = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(SirxModel::integrate(level, x));
}
BENCHMARK(BM_SirxIntegrate)->DenseRange(0, 5);

void BM_EllipticDensity(benchmark::State& state) {
  RngStream s = derive_stream({7, 0, StreamTag::Init});
  Vec x(2);
  x << 0.6, -0.4;
  const EllipticModel model(EllipticModel::generate_data(x, 1.0, 10, s), 1.0);
  const int level = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(model.evaluate(level, x));
}
BENCHMARK(BM_EllipticDensity)->DenseRange(0, 6, 2);

void BM_ToyQuadStep(benchmark::State& state) {
  RngStream ds = derive_stream({7, 0, StreamTag::Init});
  auto toy = std::make_shared<ToyModel>(ToyModel::generate_data({2.0, -2.0}, 1.0, std::nullopt, ds), 1.0);
  KernelConfig kc;
  kc.kind = state.range(0) == 0 ? KernelKind::Pcn : KernelKind::HmcMix;
  kc.proposals = ProposalLadder(GaussianProposal::pcn_isotropic(2, 0.95, 4.0));
  const CoupledKernel kernel(toy, kc);
  RngStream init = derive_stream({1, 0, StreamTag::Init});
  RngStream chain = derive_stream({1, 0, StreamTag::Chain});
  CostLedger ledger;
  QuadState z = kernel.initial_quad(3, init, ledger);
  for (auto _ : state) kernel.step_quad(3, z, chain, ledger);
  state.SetLabel(state.range(0) == 0 ? "pcn" : "hmc-mix");
}
BENCHMARK(BM_ToyQuadStep)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
