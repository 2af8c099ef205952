#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "neuroembed/augment.hpp"
#include "neuroembed/catalog.hpp"
#include "neuroembed/embed.hpp"
#include "neuroembed/index.hpp"
#include "neuroembed/train.hpp"

namespace neuroembed {

/// File names inside a snapshot directory.
namespace snapshot_files {
inline constexpr std::string_view kCatalog = "catalog.jsonl";
inline constexpr std::string_view kVocabulary = "vocab.json";
inline constexpr std::string_view kStats = "augment_stats.json";
inline constexpr std::string_view kModel = "model.json";
inline constexpr std::string_view kIndex = "index.bin";
}  // namespace snapshot_files

/// Immutable bundle a server answers from.
struct Snapshot {
  std::string directory;
  CohortCatalog catalog;
  AugmentedVocabulary vocabulary;
  AugmentationStats stats;
  Model model;
  std::unique_ptr<EmbeddingProvider> provider;
  VectorIndex index;

  /// Throws IoError / ParseError / FormatError on unreadable parts, and
  /// IntegrityError when the index and catalog disagree.
  static std::shared_ptr<const Snapshot> load(const std::filesystem::path& dir);
};

inline constexpr std::string_view kDefaultSourceUrl = "https://www.ncbi.nlm.nih.gov/geo/query/acc.cgi?acc={accession}";
inline constexpr std::size_t kMaxK = 1000;

struct ServiceConfig {
  std::size_t default_k = 10;
  /// "{accession}" is replaced by the cohort accession.
  std::string source_url_pattern = std::string(kDefaultSourceUrl);
};

/// HTTP-shaped result: status code plus a JSON body.
struct Response {
  int status = 200;
  std::string body;
};

/// Request handlers over an atomically swappable snapshot. Handlers copy the
/// snapshot pointer once and never see a partially loaded bundle.
class SearchService {
 public:
  explicit SearchService(ServiceConfig config = {}) : config_(std::move(config)) {}

  void install(std::shared_ptr<const Snapshot> snapshot);
  std::shared_ptr<const Snapshot> current() const;

  /// Body {"text": ..., "k": ...}.
  Response handle_query(std::string_view body) const;
  Response handle_query(std::string_view text, std::optional<long long> k) const;
  Response handle_get_cohort(std::string_view accession) const;
  Response handle_stats() const;
  Response handle_health() const;
  /// Body {"snapshot_dir": ...}. The old snapshot stays on failure.
  Response handle_reload(std::string_view body);

  std::string source_url(std::string_view accession) const;
  const ServiceConfig& config() const { return config_; }

 private:
  ServiceConfig config_;
  mutable std::mutex mutex_;  // guards the pointer copy only
  std::shared_ptr<const Snapshot> snapshot_;
};

/// Blocks serving the documented routes until stop_server() or process exit.
/// Returns false when the port cannot be bound.
bool serve_http(SearchService& service, const std::string& host, int port);

/// Serves on a background thread; the handle stops and joins on destruction.
class HttpServer {
 public:
  HttpServer(SearchService& service, const std::string& host, int port);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  int port() const { return port_; }
  bool running() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

}  // namespace neuroembed
