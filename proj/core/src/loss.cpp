#include "neuroembed/loss.hpp"

#include <cmath>

#include "neuroembed/error.hpp"

namespace neuroembed {
namespace {

void check_batch(const TrainingBatch& batch) {
  if (batch.anchors.cols() != batch.positives.cols()) throw ShapeError("anchors and positives differ in count");
  if (batch.anchors.rows() != batch.positives.rows()) throw ShapeError("anchors and positives differ in dimension");
  if (batch.anchors.cols() < 2) throw InputError("contrastive batches need at least two pairs");
}

Eigen::MatrixXd unit_columns(const Eigen::MatrixXd& m, Eigen::VectorXd* norms = nullptr) {
  Eigen::VectorXd n = m.colwise().norm().transpose();
  for (Eigen::Index i = 0; i < n.size(); ++i) {
    if (!(n[i] > 0.0)) throw DomainError("zero vector in batch");
  }
  if (norms != nullptr) *norms = n;
  return m * n.cwiseInverse().asDiagonal();
}

double infonce_from_similarity(const Eigen::MatrixXd& sim, double scale, Eigen::MatrixXd* dsim) {
  const Eigen::Index p = sim.rows();
  const Eigen::MatrixXd logits = scale * sim;
  double total = 0.0;
  if (dsim != nullptr) dsim->resize(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const double mx = logits.row(i).maxCoeff();
    const Eigen::RowVectorXd e = (logits.row(i).array() - mx).exp();
    const double z = e.sum();
    total += mx + std::log(z) - logits(i, i);
    if (dsim != nullptr) {
      dsim->row(i) = e / z;
      (*dsim)(i, i) -= 1.0;
    }
  }
  if (dsim != nullptr) *dsim *= scale / static_cast<double>(p);
  return total / static_cast<double>(p);
}

double hinge_from_similarity(const Eigen::MatrixXd& sim, double margin, Eigen::MatrixXd* dsim) {
  const Eigen::Index p = sim.rows();
  double total = 0.0;
  if (dsim != nullptr) dsim->setZero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (i == j) continue;
      const double term = sim(i, j) - sim(i, i) + margin;
      if (term > 0.0) {
        total += term;
        if (dsim != nullptr) {
          (*dsim)(i, j) += 1.0;
          (*dsim)(i, i) -= 1.0;
        }
      }
    }
  }
  return total;
}

double loss_from_similarity(const Eigen::MatrixXd& sim, const LossConfig& config, Eigen::MatrixXd* dsim) {
  if (config.variant == LossVariant::InfoNce) {
    if (!(config.scale > 0.0)) throw InputError("InfoNCE scale must be positive");
    return infonce_from_similarity(sim, config.scale, dsim);
  }
  return hinge_from_similarity(sim, config.margin, dsim);
}

}  // namespace

std::string_view loss_variant_name(LossVariant v) { return v == LossVariant::InfoNce ? "infonce" : "hinge"; }

std::optional<LossVariant> parse_loss_variant(std::string_view name) {
  if (name == "infonce") return LossVariant::InfoNce;
  if (name == "hinge") return LossVariant::Hinge;
  return std::nullopt;
}

Eigen::MatrixXd similarity_matrix(const TrainingBatch& batch) {
  check_batch(batch);
  return unit_columns(batch.anchors).transpose() * unit_columns(batch.positives);
}

double infonce_loss(const TrainingBatch& batch, const LossConfig& config) {
  LossConfig c = config;
  c.variant = LossVariant::InfoNce;
  return loss_from_similarity(similarity_matrix(batch), c, nullptr);
}

double hinge_loss(const TrainingBatch& batch, const LossConfig& config) {
  LossConfig c = config;
  c.variant = LossVariant::Hinge;
  return loss_from_similarity(similarity_matrix(batch), c, nullptr);
}

double contrastive_loss(const TrainingBatch& batch, const LossConfig& config) {
  return loss_from_similarity(similarity_matrix(batch), config, nullptr);
}

HeadGradient loss_gradient(const ProjectionHead& head, const TrainingBatch& batch, const LossConfig& config) {
  check_batch(batch);
  if (static_cast<std::size_t>(batch.anchors.rows()) != head.d_in()) {
    throw ShapeError("batch dimension does not match head input");
  }
  Eigen::MatrixXd za = head.weights.transpose() * batch.anchors;
  Eigen::MatrixXd zp = head.weights.transpose() * batch.positives;
  if (head.bias) {
    za.colwise() += *head.bias;
    zp.colwise() += *head.bias;
  }
  Eigen::VectorXd na;
  Eigen::VectorXd np;
  const Eigen::MatrixXd ya = unit_columns(za, &na);
  const Eigen::MatrixXd yp = unit_columns(zp, &np);
  const Eigen::MatrixXd sim = ya.transpose() * yp;

  HeadGradient g;
  Eigen::MatrixXd dsim;
  g.loss = loss_from_similarity(sim, config, &dsim);

  // Back through y = z / |z|: dz = (dy - y (y . dy)) / |z|.
  Eigen::MatrixXd dya = yp * dsim.transpose();
  Eigen::MatrixXd dyp = ya * dsim;
  const Eigen::RowVectorXd ra = (ya.cwiseProduct(dya)).colwise().sum();
  const Eigen::RowVectorXd rp = (yp.cwiseProduct(dyp)).colwise().sum();
  const Eigen::MatrixXd dza = (dya - ya * ra.asDiagonal()) * na.cwiseInverse().asDiagonal();
  const Eigen::MatrixXd dzp = (dyp - yp * rp.asDiagonal()) * np.cwiseInverse().asDiagonal();

  g.weights = batch.anchors * dza.transpose() + batch.positives * dzp.transpose();
  if (head.bias) g.bias = dza.rowwise().sum() + dzp.rowwise().sum();
  return g;
}

}  // namespace neuroembed
