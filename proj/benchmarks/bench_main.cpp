#include <benchmark/benchmark.h>

#include "ocgad/anomaly_injector.hpp"
#include "ocgad/gcnae.hpp"
#include "ocgad/graph_encoding.hpp"
#include "ocgad/instance_graph.hpp"
#include "ocgad/loggen.hpp"
#include "ocgad/scoring_eval.hpp"

using namespace ocgad;

namespace {

ObjectCentricLog sized_log(std::int64_t orders) {
  GenConfig cfg;
  cfg.n_orders = static_cast<std::size_t>(orders);
  return generate(cfg);
}

DenseMatrix filled(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  DenseMatrix m(rows, cols);
  for (double& v : m.data()) v = rng.uniform();
  return m;
}

void BM_BuildInstances(benchmark::State& state) {
  const auto log = sized_log(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_instances(log));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(log.events.size()));
}
BENCHMARK(BM_BuildInstances)->Arg(460)->Arg(4600);

void BM_EncodeGraph(benchmark::State& state) {
  const auto log = sized_log(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(encode_graph(log));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(log.events.size()));
}
BENCHMARK(BM_EncodeGraph)->Arg(460)->Arg(4600);

void BM_Spmm(benchmark::State& state) {
  const auto g = encode_graph(sized_log(state.range(0)));
  const auto d = filled(g.features.rows(), 64, 1);
  for (auto _ : state) benchmark::DoNotOptimize(spmm(g.normalized.view(), d));
}
BENCHMARK(BM_Spmm)->Arg(460)->Arg(4600);

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = filled(n, 64, 2), b = filled(64, 32, 3);
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
}
BENCHMARK(BM_Matmul)->Arg(2000)->Arg(20000);

void BM_ForwardBackward(benchmark::State& state) {
  const auto g = encode_graph(sized_log(state.range(0)));
  Rng rng(0);
  const auto m = GcnaeModel::initialize(g.features.cols(), 64, 32, rng);
  for (auto _ : state) {
    const auto cache = forward(g, m);
    benchmark::DoNotOptimize(backward(g, m, cache));
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(460)->Arg(4600);

void BM_Injection(benchmark::State& state) {
  const auto log = sized_log(state.range(0));
  const auto plan = plan_injection(log.events.size(), 0.10, 0);
  for (auto _ : state) benchmark::DoNotOptimize(inject_all(log, plan));
}
BENCHMARK(BM_Injection)->Arg(460);

void BM_AucRoc(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  std::vector<double> scores(n);
  std::vector<bool> truth(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = rng.uniform();
    truth[i] = rng.uniform() < 0.1;
  }
  truth[0] = true;
  truth[1] = false;
  for (auto _ : state) benchmark::DoNotOptimize(auc_roc(scores, truth));
}
BENCHMARK(BM_AucRoc)->Arg(2000)->Arg(400000);

}  // namespace

BENCHMARK_MAIN();
