#include "neuroembed/train.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <unordered_map>

#include <json.hpp>

#include "neuroembed/error.hpp"
#include "neuroembed/rng.hpp"

namespace neuroembed {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Embeds each distinct text once; columns follow the input order.
Eigen::MatrixXd embed_all(const EmbeddingProvider& provider, const std::vector<const std::string*>& texts) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(provider.dimension()), static_cast<Eigen::Index>(texts.size()));
  std::unordered_map<std::string, Eigen::Index> cache;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    auto [it, inserted] = cache.emplace(*texts[i], col);
    if (inserted) {
      out.col(col) = embed_text(provider, *texts[i]);
    } else {
      out.col(col) = out.col(it->second);
    }
  }
  return out;
}

void embed_pairs(const EmbeddingProvider& provider, const std::vector<TextPair>& pairs, Eigen::MatrixXd& anchors,
                 Eigen::MatrixXd& positives) {
  std::vector<const std::string*> q;
  std::vector<const std::string*> t;
  for (const auto& p : pairs) {
    q.push_back(&p.query);
    t.push_back(&p.target);
  }
  anchors = embed_all(provider, q);
  positives = embed_all(provider, t);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

}  // namespace

std::vector<TextPair> make_text_pairs(const std::vector<QAPair>& pairs, const CohortCatalog& catalog) {
  std::unordered_map<std::string, const CohortRecord*> by_accession;
  for (const auto& r : catalog.records) by_accession.emplace(r.accession, &r);
  std::vector<TextPair> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    auto it = by_accession.find(p.accession);
    if (it == by_accession.end()) throw LookupError("accession '" + p.accession + "' is not in the catalog");
    out.push_back({p.nlq, cohort_text(*it->second)});
  }
  return out;
}

double scheduled_rate(const TrainConfig& config, std::size_t step, std::size_t total_steps) {
  const auto warmup = static_cast<std::size_t>(std::lround(config.warmup_fraction * static_cast<double>(total_steps)));
  if (warmup == 0 || step >= warmup) return config.learning_rate;
  return config.learning_rate * static_cast<double>(step) / static_cast<double>(warmup);
}

double dataset_loss(const ProjectionHead& head, const Eigen::MatrixXd& anchors, const Eigen::MatrixXd& positives,
                    std::size_t batch_size, const LossConfig& loss) {
  const auto n = static_cast<std::size_t>(anchors.cols());
  double total = 0.0;
  std::size_t batches = 0;
  for (std::size_t start = 0; start + 2 <= n; start += batch_size) {
    const std::size_t len = std::min(batch_size, n - start);
    if (len < 2) break;
    TrainingBatch b{anchors.middleCols(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(len)),
                    positives.middleCols(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(len))};
    total += loss_gradient(head, b, loss).loss;
    ++batches;
  }
  return batches == 0 ? kNaN : total / static_cast<double>(batches);
}

TrainResult train(const ProjectionHead& head, const std::vector<TextPair>& train_set,
                  const EmbeddingProvider& provider, const TrainConfig& config, const LossConfig& loss,
                  const std::vector<TextPair>& validation_set) {
  if (head.d_in() != provider.dimension()) throw ShapeError("head input does not match provider dimension");
  if (!(config.warmup_fraction >= 0.0 && config.warmup_fraction < 1.0)) {
    throw InputError("warmup fraction must lie in [0, 1)");
  }
  if (!(config.eval_fraction > 0.0)) throw InputError("eval fraction must be positive");
  if (config.batch_size < 2) throw InputError("batch size must be at least 2");

  TrainResult result{head, {}};
  if (config.epochs == 0) return result;
  if (train_set.size() < 2) throw InputError("training needs at least two pairs");

  Eigen::MatrixXd anchors;
  Eigen::MatrixXd positives;
  embed_pairs(provider, train_set, anchors, positives);
  Eigen::MatrixXd val_anchors;
  Eigen::MatrixXd val_positives;
  const bool has_val = validation_set.size() >= 2;
  if (has_val) embed_pairs(provider, validation_set, val_anchors, val_positives);
  auto val_loss = [&](const ProjectionHead& h) {
    return has_val ? dataset_loss(h, val_anchors, val_positives, config.batch_size, loss) : kNaN;
  };

  const std::size_t n = train_set.size();
  const std::size_t steps_per_epoch = n / config.batch_size + (n % config.batch_size >= 2 ? 1 : 0);
  const std::size_t total_steps = config.epochs * steps_per_epoch;
  const std::size_t eval_every = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(config.eval_fraction * static_cast<double>(steps_per_epoch))));

  LossCurve& curve = result.curve;
  curve.total_steps = total_steps;
  curve.initial_train_loss = dataset_loss(head, anchors, positives, config.batch_size, loss);
  curve.points.push_back({0, curve.initial_train_loss, val_loss(head)});

  ProjectionHead& h = result.head;
  Rng rng(config.seed);
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto dim = anchors.rows();
  Eigen::MatrixXd batch_a(dim, 0);
  Eigen::MatrixXd batch_p(dim, 0);
  std::size_t step = 0;
  double running = 0.0;
  std::size_t running_count = 0;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span<Eigen::Index>(order));
    for (std::size_t b = 0; b < steps_per_epoch; ++b) {
      const std::size_t start = b * config.batch_size;
      const std::size_t len = std::min(config.batch_size, n - start);
      batch_a.resize(dim, static_cast<Eigen::Index>(len));
      batch_p.resize(dim, static_cast<Eigen::Index>(len));
      for (std::size_t i = 0; i < len; ++i) {
        batch_a.col(static_cast<Eigen::Index>(i)) = anchors.col(order[start + i]);
        batch_p.col(static_cast<Eigen::Index>(i)) = positives.col(order[start + i]);
      }
      ++step;
      HeadGradient g = loss_gradient(h, TrainingBatch{batch_a, batch_p}, loss);
      if (!std::isfinite(g.loss)) throw TrainingError("loss became non-finite", step);
      const double lr = scheduled_rate(config, step, total_steps);
      h.weights -= lr * g.weights;
      if (h.bias) *h.bias -= lr * *g.bias;
      if (!h.weights.allFinite() || (h.bias && !h.bias->allFinite())) {
        throw TrainingError("parameters became non-finite", step);
      }
      running += g.loss;
      ++running_count;
      if (step % eval_every == 0 || step == total_steps) {
        curve.points.push_back({step, running / static_cast<double>(running_count), val_loss(h)});
        running = 0.0;
        running_count = 0;
      }
    }
  }
  curve.final_train_loss = dataset_loss(h, anchors, positives, config.batch_size, loss);
  return result;
}

std::string write_loss_curve(const LossCurve& curve) {
  std::string out = "step\ttrain_loss\tval_loss\n";
  for (const auto& p : curve.points) {
    out += std::to_string(p.step) + "\t" + format_double(p.train_loss) + "\t" + format_double(p.val_loss) + "\n";
  }
  return out;
}

std::string write_model(const Model& model) {
  const ProjectionHead& h = model.head;
  std::string out = "{\n";
  out += "  \"provider_id\": " + nlohmann::json(model.provider_id).dump() + ",\n";
  out += "  \"d_in\": " + std::to_string(h.d_in()) + ",\n";
  out += "  \"d_out\": " + std::to_string(h.d_out()) + ",\n";
  out += "  \"variant\": \"" + std::string(loss_variant_name(model.loss.variant)) + "\",\n";
  out += "  \"scale\": " + format_double(model.loss.scale) + ",\n";
  out += "  \"margin\": " + format_double(model.loss.margin) + ",\n";
  out += "  \"weights\": [";
  out.reserve(out.size() + h.d_in() * h.d_out() * 25);
  bool first = true;
  for (Eigen::Index r = 0; r < h.weights.rows(); ++r) {
    out += first ? "\n    [" : ",\n    [";
    first = false;
    for (Eigen::Index c = 0; c < h.weights.cols(); ++c) {
      if (c > 0) out += ", ";
      out += format_double(h.weights(r, c));
    }
    out += "]";
  }
  out += "\n  ],\n  \"bias\": ";
  if (h.bias) {
    out += "[";
    for (Eigen::Index i = 0; i < h.bias->size(); ++i) {
      if (i > 0) out += ", ";
      out += format_double((*h.bias)[i]);
    }
    out += "]";
  } else {
    out += "null";
  }
  out += "\n}\n";
  return out;
}

Model parse_model(std::string_view json_text) {
  using nlohmann::json;
  try {
    const json doc = json::parse(json_text);
    Model m;
    m.provider_id = doc.at("provider_id").get<std::string>();
    const auto d_in = doc.at("d_in").get<std::size_t>();
    const auto d_out = doc.at("d_out").get<std::size_t>();
    auto variant = parse_loss_variant(doc.at("variant").get<std::string>());
    if (!variant) throw ParseError("unknown loss variant in model file");
    m.loss.variant = *variant;
    m.loss.scale = doc.at("scale").get<double>();
    if (doc.contains("margin")) m.loss.margin = doc.at("margin").get<double>();
    const auto& w = doc.at("weights");
    if (w.size() != d_in) throw ParseError("weights must have d_in rows");
    m.head.weights.resize(static_cast<Eigen::Index>(d_in), static_cast<Eigen::Index>(d_out));
    for (std::size_t r = 0; r < d_in; ++r) {
      if (w[r].size() != d_out) throw ParseError("weights row " + std::to_string(r) + " must have d_out entries");
      for (std::size_t c = 0; c < d_out; ++c) {
        m.head.weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = w[r][c].get<double>();
      }
    }
    if (doc.contains("bias") && !doc.at("bias").is_null()) {
      const auto& b = doc.at("bias");
      if (b.size() != d_out) throw ParseError("bias must have d_out entries");
      Eigen::VectorXd bias(static_cast<Eigen::Index>(d_out));
      for (std::size_t i = 0; i < d_out; ++i) bias[static_cast<Eigen::Index>(i)] = b[i].get<double>();
      m.head.bias = std::move(bias);
    }
    if (!m.head.weights.allFinite()) throw ParseError("model weights must be finite");
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid model file: ") + e.what());
  }
}

}  // namespace neuroembed
