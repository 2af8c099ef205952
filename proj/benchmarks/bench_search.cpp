#include <benchmark/benchmark.h>

#include "neuroembed/index.hpp"
#include "neuroembed/rng.hpp"

using namespace neuroembed;

namespace {

Eigen::VectorXd random_vec(Rng& rng, std::size_t d) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.normal();
  return v;
}

void BM_SearchTopK(benchmark::State& state) {
  Rng rng(3);
  const std::size_t d = 768;
  std::vector<std::pair<std::string, EmbeddingVector>> rows;
  for (int i = 0; i < state.range(0); ++i) rows.emplace_back("GSE" + std::to_string(i), random_vec(rng, d));
  const VectorIndex index = build_index(rows);
  const Eigen::VectorXd query = random_vec(rng, d);
  for (auto _ : state) benchmark::DoNotOptimize(search(index, query, 10));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SearchTopK)->Arg(1000)->Arg(10000);

}  // namespace
