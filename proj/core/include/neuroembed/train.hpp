#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "neuroembed/catalog.hpp"
#include "neuroembed/embed.hpp"
#include "neuroembed/loss.hpp"
#include "neuroembed/qagen.hpp"

namespace neuroembed {

struct TrainConfig {
  std::size_t epochs = 2;
  double warmup_fraction = 0.10;
  double eval_fraction = 0.05;
  std::size_t batch_size = 32;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;
};

/// Query text and the text of the cohort that answers it.
struct TextPair {
  std::string query;
  std::string target;
};

/// Pairs each QA query with cohort_text() of its answering record.
/// Throws LookupError for an accession missing from the catalog.
std::vector<TextPair> make_text_pairs(const std::vector<QAPair>& pairs, const CohortCatalog& catalog);

struct CurvePoint {
  std::size_t step = 0;
  double train_loss = 0.0;  // mean batch loss since the previous point
  double val_loss = 0.0;    // NaN without a validation set
};

struct LossCurve {
  std::vector<CurvePoint> points;
  double initial_train_loss = 0.0;
  double final_train_loss = 0.0;
  std::size_t total_steps = 0;
};

struct TrainResult {
  ProjectionHead head;
  LossCurve curve;
};

/// Learning rate at 1-based `step`: linear ramp over the warm-up steps, then flat.
double scheduled_rate(const TrainConfig& config, std::size_t step, std::size_t total_steps);

/// Mini-batch gradient descent on the head. Batches are reshuffled each epoch;
/// a trailing batch with fewer than two pairs is dropped. Validation loss is
/// recorded every eval_fraction of an epoch. Throws TrainingError when the
/// loss or an update becomes non-finite.
TrainResult train(const ProjectionHead& head, const std::vector<TextPair>& train_set,
                  const EmbeddingProvider& provider, const TrainConfig& config, const LossConfig& loss,
                  const std::vector<TextPair>& validation_set = {});

/// Mean loss over consecutive fixed batches of the set (no shuffling).
double dataset_loss(const ProjectionHead& head, const Eigen::MatrixXd& anchors, const Eigen::MatrixXd& positives,
                    std::size_t batch_size, const LossConfig& loss);

std::string write_loss_curve(const LossCurve& curve);

/// Everything needed to rebuild query-side embeddings.
struct Model {
  std::string provider_id;
  ProjectionHead head;
  LossConfig loss;
};

/// JSON with numbers printed to 17 significant digits; weights row-major.
std::string write_model(const Model& model);
Model parse_model(std::string_view json_text);

}  // namespace neuroembed
