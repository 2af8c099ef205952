#include "neuroembed/index.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "neuroembed/error.hpp"

namespace neuroembed {
namespace {

static_assert(std::endian::native == std::endian::little, "index I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T take(std::istream& in, const char* what) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw CorruptionError(std::string("index file truncated while reading ") + what);
  }
  return value;
}

bool ranks_before(double sa, const std::string& a, double sb, const std::string& b) {
  if (sa != sb) return sa > sb;
  return a < b;
}

}  // namespace

VectorIndex build_index(const std::vector<std::pair<std::string, EmbeddingVector>>& embeddings) {
  VectorIndex index;
  if (embeddings.empty()) return index;
  index.dimension_ = static_cast<std::size_t>(embeddings.front().second.size());
  std::unordered_set<std::string> seen;
  index.matrix_.reserve(embeddings.size() * index.dimension_);
  for (const auto& [id, v] : embeddings) {
    if (static_cast<std::size_t>(v.size()) != index.dimension_) {
      throw ShapeError("embedding for '" + id + "' has dimension " + std::to_string(v.size()) + ", expected " +
                       std::to_string(index.dimension_));
    }
    if (!seen.insert(id).second) throw DuplicateError(id);
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("embedding for '" + id + "' has zero or non-finite norm");
    for (Eigen::Index k = 0; k < v.size(); ++k) index.matrix_.push_back(static_cast<float>(v[k] / n));
    index.ids_.push_back(id);
  }
  return index;
}

std::vector<RankedHit> search(const VectorIndex& index, const Eigen::VectorXd& query, std::size_t k) {
  if (index.empty() || k == 0) return {};
  if (static_cast<std::size_t>(query.size()) != index.dimension()) {
    throw ShapeError("query dimension " + std::to_string(query.size()) + " does not match index dimension " +
                     std::to_string(index.dimension()));
  }
  const double qn = query.norm();
  if (!(qn > 0.0)) throw DomainError("query vector has zero norm");

  const std::size_t n = index.size();
  const std::size_t d = index.dimension();
  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    const float* row = index.row(i);
    double dot = 0.0;
    for (std::size_t j = 0; j < d; ++j) dot += static_cast<double>(row[j]) * query[static_cast<Eigen::Index>(j)];
    scores[i] = dot / qn;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t take_n = std::min(k, n);
  const auto& ids = index.ids();
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take_n), order.end(),
                    [&](std::size_t a, std::size_t b) { return ranks_before(scores[a], ids[a], scores[b], ids[b]); });
  std::vector<RankedHit> hits;
  hits.reserve(take_n);
  for (std::size_t r = 0; r < take_n; ++r) hits.push_back({ids[order[r]], scores[order[r]], r + 1});
  return hits;
}

void save_index(const VectorIndex& index, std::ostream& out) {
  out.write(kIndexMagic, sizeof(kIndexMagic));
  put<std::uint32_t>(out, kIndexVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(index.dimension()));
  put<std::uint64_t>(out, index.size());
  for (const auto& id : index.ids()) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
  }
  out.write(reinterpret_cast<const char*>(index.matrix().data()),
            static_cast<std::streamsize>(index.matrix().size() * sizeof(float)));
  if (!out) throw IoError("failed writing index");
}

VectorIndex load_index(std::istream& in) {
  char magic[sizeof(kIndexMagic)];
  if (!in.read(magic, sizeof(magic))) throw FormatError("index file too short for magic");
  if (std::memcmp(magic, kIndexMagic, sizeof(magic)) != 0) throw FormatError("bad index magic");
  const auto version = take<std::uint32_t>(in, "version");
  if (version != kIndexVersion) throw FormatError("unsupported index version " + std::to_string(version));
  const auto dimension = take<std::uint32_t>(in, "dimension");
  const auto count = take<std::uint64_t>(in, "count");

  VectorIndex index;
  index.dimension_ = dimension;
  std::unordered_set<std::string> seen;
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto len = take<std::uint32_t>(in, "id length");
    std::string id(len, '\0');
    if (len > 0 && !in.read(id.data(), len)) throw CorruptionError("index file truncated inside an id");
    if (!seen.insert(id).second) throw CorruptionError("index file repeats id '" + id + "'");
    index.ids_.push_back(std::move(id));
  }
  index.matrix_.resize(static_cast<std::size_t>(count) * dimension);
  const auto bytes = static_cast<std::streamsize>(index.matrix_.size() * sizeof(float));
  if (bytes > 0 && !in.read(reinterpret_cast<char*>(index.matrix_.data()), bytes)) {
    throw CorruptionError("index file truncated inside the matrix");
  }
  if (in.peek() != std::char_traits<char>::eof()) throw CorruptionError("trailing bytes after index matrix");
  return index;
}

}  // namespace neuroembed
