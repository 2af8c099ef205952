#include "neuroembed/embed.hpp"

#include <algorithm>
#include <cmath>

#include "neuroembed/error.hpp"
#include "neuroembed/rng.hpp"
#include "neuroembed/text.hpp"

namespace neuroembed {
namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

HashedTokenProvider::HashedTokenProvider(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw InputError("embedding dimension must be positive");
}

std::size_t HashedTokenProvider::bucket(std::string_view token) const {
  return static_cast<std::size_t>(fnv1a(token) % dimension_);
}

EmbeddingVector HashedTokenProvider::embed(std::string_view text) const {
  const std::vector<std::string> tokens = text::tokenize(text);
  if (tokens.empty()) throw InputError("cannot embed empty text");
  EmbeddingVector v = EmbeddingVector::Zero(static_cast<Eigen::Index>(dimension_));
  for (const auto& t : tokens) v[static_cast<Eigen::Index>(bucket(t))] += 1.0;
  v /= v.norm();
  return v;
}

std::unique_ptr<EmbeddingProvider> make_provider(std::string_view provider_id, std::size_t dimension) {
  if (provider_id == HashedTokenProvider::kId) return std::make_unique<HashedTokenProvider>(dimension);
  throw InputError("unknown embedding provider '" + std::string(provider_id) + "'");
}

EmbeddingVector embed_text(const EmbeddingProvider& provider, std::string_view text) {
  if (text::trim(text).empty()) throw InputError("cannot embed empty text");
  return provider.embed(text);
}

ProjectionHead ProjectionHead::identity(std::size_t d, bool with_bias) {
  ProjectionHead h;
  const auto n = static_cast<Eigen::Index>(d);
  h.weights = Eigen::MatrixXd::Identity(n, n);
  if (with_bias) h.bias = Eigen::VectorXd::Zero(n);
  return h;
}

ProjectionHead ProjectionHead::identity_with_noise(std::size_t d, double sigma, std::uint64_t seed, bool with_bias) {
  ProjectionHead h = identity(d, with_bias);
  Rng rng(seed);
  for (Eigen::Index c = 0; c < h.weights.cols(); ++c) {
    for (Eigen::Index r = 0; r < h.weights.rows(); ++r) h.weights(r, c) += sigma * rng.normal();
  }
  return h;
}

EmbeddingVector project(const ProjectionHead& head, const Eigen::VectorXd& v) {
  if (static_cast<std::size_t>(v.size()) != head.d_in()) {
    throw ShapeError("vector of dimension " + std::to_string(v.size()) + " does not fit head input " +
                     std::to_string(head.d_in()));
  }
  Eigen::VectorXd z = head.weights.transpose() * v;
  if (head.bias) z += *head.bias;
  const double n = z.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("projection has zero or non-finite norm");
  return z / n;
}

double cosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size()) throw ShapeError("cosine of vectors with different dimensions");
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) throw DomainError("cosine of a zero vector");
  return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

}  // namespace neuroembed
