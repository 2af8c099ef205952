#pragma once

#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "neuroembed/embed.hpp"

namespace neuroembed {

enum class LossVariant { InfoNce, Hinge };

std::string_view loss_variant_name(LossVariant v);
std::optional<LossVariant> parse_loss_variant(std::string_view name);

struct LossConfig {
  LossVariant variant = LossVariant::InfoNce;
  double scale = 20.0;
  double margin = 0.5;
};

/// Aligned anchor/positive columns. For anchor i every other positive in the
/// batch is an implicit negative.
struct TrainingBatch {
  Eigen::MatrixXd anchors;    // d x P
  Eigen::MatrixXd positives;  // d x P

  Eigen::Index size() const { return anchors.cols(); }
};

/// P x P cosine matrix, entry (i, j) = cos(anchor_i, positive_j).
Eigen::MatrixXd similarity_matrix(const TrainingBatch& batch);

/// Mean over anchors of -log softmax_j(scale * cos(q_i, p_j)) at j = i.
double infonce_loss(const TrainingBatch& batch, const LossConfig& config);

/// Sum over anchors i and negatives j != i of max(0, cos(q_i, p_j) - cos(q_i, p_i) + margin).
double hinge_loss(const TrainingBatch& batch, const LossConfig& config);

double contrastive_loss(const TrainingBatch& batch, const LossConfig& config);

struct HeadGradient {
  double loss = 0.0;
  Eigen::MatrixXd weights;
  std::optional<Eigen::VectorXd> bias;
};

/// Loss of the batch after both sides pass through the head, with its analytic
/// gradient with respect to the head parameters.
HeadGradient loss_gradient(const ProjectionHead& head, const TrainingBatch& batch, const LossConfig& config);

}  // namespace neuroembed
