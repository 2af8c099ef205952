#include <benchmark/benchmark.h>

#include "neuroembed/loss.hpp"
#include "neuroembed/rng.hpp"

using namespace neuroembed;

namespace {

TrainingBatch random_batch(Rng& rng, Eigen::Index d, Eigen::Index p) {
  TrainingBatch b{Eigen::MatrixXd(d, p), Eigen::MatrixXd(d, p)};
  for (Eigen::Index c = 0; c < p; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) {
      b.anchors(r, c) = rng.normal();
      b.positives(r, c) = b.anchors(r, c) + 0.5 * rng.normal();
    }
  }
  return b;
}

void BM_LossGradient(benchmark::State& state) {
  Rng rng(4);
  const auto d = static_cast<Eigen::Index>(state.range(0));
  const auto head = ProjectionHead::identity_with_noise(static_cast<std::size_t>(d), 1e-3, 5);
  const TrainingBatch batch = random_batch(rng, d, 32);
  LossConfig cfg;
  cfg.variant = state.range(1) ? LossVariant::Hinge : LossVariant::InfoNce;
  for (auto _ : state) benchmark::DoNotOptimize(loss_gradient(head, batch, cfg));
}
BENCHMARK(BM_LossGradient)->Args({128, 0})->Args({768, 0})->Args({768, 1});

}  // namespace
