#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "neuroembed/embed.hpp"

namespace neuroembed {

/// Exact cosine index over unit rows stored as float32.
class VectorIndex {
 public:
  VectorIndex() = default;
  explicit VectorIndex(std::size_t dimension) : dimension_(dimension) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<float>& matrix() const { return matrix_; }
  const float* row(std::size_t i) const { return matrix_.data() + i * dimension_; }

 private:
  friend VectorIndex build_index(const std::vector<std::pair<std::string, EmbeddingVector>>&);
  friend VectorIndex load_index(std::istream&);

  std::size_t dimension_ = 0;
  std::vector<std::string> ids_;
  std::vector<float> matrix_;
};

struct RankedHit {
  std::string accession;
  double similarity = 0.0;
  std::size_t rank = 0;  // 1-based

  bool operator==(const RankedHit&) const = default;
};

/// Rows are renormalized before narrowing to float. Throws ShapeError on mixed
/// dimensions and DuplicateError on a repeated accession.
VectorIndex build_index(const std::vector<std::pair<std::string, EmbeddingVector>>& embeddings);

/// Top-k by cosine, ties broken by accession. k beyond size returns everything.
std::vector<RankedHit> search(const VectorIndex& index, const Eigen::VectorXd& query, std::size_t k);

inline constexpr char kIndexMagic[8] = {'N', 'E', 'U', 'R', 'O', 'E', 'M', 'B'};
inline constexpr std::uint32_t kIndexVersion = 1;

/// Little-endian binary layout: magic, u32 version, u32 dimension, u64 count,
/// per id u32 length + UTF-8 bytes, then count*dimension f32 row-major.
void save_index(const VectorIndex& index, std::ostream& out);
/// Throws FormatError on bad magic/version and CorruptionError on truncation.
VectorIndex load_index(std::istream& in);

}  // namespace neuroembed
