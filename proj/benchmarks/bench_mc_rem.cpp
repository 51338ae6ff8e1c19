// Serial reference vs OpenMP MC-REM assembly on the example geometries.
#include <benchmark/benchmark.h>

#include <map>
#include <memory>
#include <string>

#include "mcrem/bench_catalog.hpp"

namespace {

struct Problem {
  mcrem::bench::ExampleConfig cfg;
  mcrem::bench::ExampleSetup setup;
  mcrem::ConductivityTensor k;
  mcrem::MeasurementSet meas;
  std::unique_ptr<mcrem::WeightFamily> fam1, fam0;
  std::vector<double> sigma1;
};

const Problem& problem(const std::string& id) {
  static std::map<std::string, std::unique_ptr<Problem>> cache;
  auto& p = cache[id];
  if (!p) {
    auto cfg = mcrem::bench::example(id);
    auto setup = mcrem::bench::build_setup(cfg);
    auto k = mcrem::ConductivityTensor::identity(cfg.dim);
    auto meas = mcrem::bench::synthesize_measurements(
        setup, mcrem::bench::ExactSolution::get(cfg.dim == 2 ? "sol2d_2" : "sol3d_1"), k);
    p = std::make_unique<Problem>(Problem{cfg, setup, k, std::move(meas), nullptr, nullptr, {}});
    p->fam1 = std::make_unique<mcrem::WeightFamily>(
        mcrem::WeightFamily::voronoi(p->setup.x1, cfg.dim));
    if (p->setup.x0.size() > 0) {
      p->fam0 = std::make_unique<mcrem::WeightFamily>(
          mcrem::WeightFamily::voronoi(p->setup.x0, cfg.dim));
    }
    p->sigma1 = mcrem::cell_measures(*p->fam1, p->setup.domain);
  }
  return *p;
}

const char* const kIds[] = {"ex5_1", "ex5_2", "ex5_4", "ex5_6"};

mcrem::WalkConfig walk_config(const Problem& p) {
  mcrem::WalkConfig wc;
  wc.eps = p.cfg.eps;
  wc.seed = 1;
  return wc;
}

void walks_counter(benchmark::State& state, const Problem& p, std::uint64_t n) {
  state.counters["walks/s"] = benchmark::Counter(
      static_cast<double>(n * p.meas.num_interior()) * static_cast<double>(state.iterations()),
      benchmark::Counter::kIsRate);
}

void BM_Serial(benchmark::State& state) {
  auto const& p = problem(kIds[state.range(0)]);
  auto const n = static_cast<std::uint64_t>(state.range(1));
  for (auto _ : state) {
    auto b = mcrem::mc_rem_serial(p.setup.domain, p.k, p.meas, *p.fam1, p.fam0.get(), p.sigma1,
                                  walk_config(p), n);
    benchmark::DoNotOptimize(b.a1.data().data());
  }
  state.SetLabel(kIds[state.range(0)]);
  walks_counter(state, p, n);
}

void BM_OpenMP(benchmark::State& state) {
  auto const& p = problem(kIds[state.range(0)]);
  auto const n = static_cast<std::uint64_t>(state.range(1));
  mcrem::McRemOptions opts;
  opts.threads = static_cast<int>(state.range(2));
  for (auto _ : state) {
    auto b = mcrem::mc_rem(p.setup.domain, p.k, p.meas, *p.fam1, p.fam0.get(), p.sigma1,
                           walk_config(p), n, opts);
    benchmark::DoNotOptimize(b.a1.data().data());
  }
  state.SetLabel(std::string(kIds[state.range(0)]) + " threads=" +
                 std::to_string(state.range(2)));
  walks_counter(state, p, n);
}

}  // namespace

BENCHMARK(BM_Serial)
    ->ArgsProduct({{0, 1, 2, 3}, {2000}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OpenMP)
    ->ArgsProduct({{0, 1, 2, 3}, {2000}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
