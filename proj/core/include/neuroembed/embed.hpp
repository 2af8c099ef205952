#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace neuroembed {

/// Unit-norm embedding.
using EmbeddingVector = Eigen::VectorXd;

inline constexpr std::size_t kDefaultDimension = 768;

/// Frozen text encoder the projection head sits on.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string provider_id() const = 0;
  virtual std::size_t dimension() const = 0;
  /// Throws InputError on text that is empty after trimming.
  virtual EmbeddingVector embed(std::string_view text) const = 0;
};

/// Bag of tokens hashed into `dimension` buckets (FNV-1a 64), counted, then
/// L2-normalized.
class HashedTokenProvider final : public EmbeddingProvider {
 public:
  static constexpr std::string_view kId = "hashed-token-v1";

  explicit HashedTokenProvider(std::size_t dimension = kDefaultDimension);

  std::string provider_id() const override { return std::string(kId); }
  std::size_t dimension() const override { return dimension_; }
  EmbeddingVector embed(std::string_view text) const override;

  std::size_t bucket(std::string_view token) const;

 private:
  std::size_t dimension_;
};

/// Throws InputError for an unknown provider id.
std::unique_ptr<EmbeddingProvider> make_provider(std::string_view provider_id, std::size_t dimension);

EmbeddingVector embed_text(const EmbeddingProvider& provider, std::string_view text);

/// Trainable linear map w = normalize(W^T v + b) over frozen embeddings.
struct ProjectionHead {
  Eigen::MatrixXd weights;  // d_in x d_out
  std::optional<Eigen::VectorXd> bias;

  std::size_t d_in() const { return static_cast<std::size_t>(weights.rows()); }
  std::size_t d_out() const { return static_cast<std::size_t>(weights.cols()); }

  static ProjectionHead identity(std::size_t d, bool with_bias = false);
  /// Identity plus N(0, sigma^2) entries drawn from `seed`.
  static ProjectionHead identity_with_noise(std::size_t d, double sigma, std::uint64_t seed, bool with_bias = false);
};

/// Throws ShapeError on dimension mismatch, DomainError on a zero image.
EmbeddingVector project(const ProjectionHead& head, const Eigen::VectorXd& v);

/// Throws ShapeError on mismatch, DomainError on a zero vector.
double cosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

}  // namespace neuroembed
