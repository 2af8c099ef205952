#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "neuroembed/augment.hpp"
#include "neuroembed/eval.hpp"
#include "neuroembed/loss.hpp"
#include "neuroembed/train.hpp"

namespace neuroembed::pipeline {

namespace fs = std::filesystem;

struct IngestOptions {
  fs::path catalog;
  fs::path terms;
  fs::path out;
};

struct AugmentOptions {
  fs::path catalog;
  fs::path ontologies;
  double threshold = kDefaultThreshold;
  fs::path vocab;
  fs::path catalog_out;
  fs::path report;
  fs::path stats;
};

struct QagenOptions {
  fs::path catalog;
  fs::path vocab;
  std::uint64_t seed = 0;
  std::size_t budget = 20000;
  double ratio = 0.8;
  std::size_t factor = 4;
  fs::path train_out;
  fs::path test_out;
};

struct TrainOptions {
  fs::path train;
  fs::path catalog;
  fs::path model;
  fs::path curve;
  std::size_t dimension = kDefaultDimension;
  double val_fraction = 0.1;
  /// Skip optimisation and write the identity-plus-noise starting head.
  bool baseline_only = false;
  TrainConfig config;
  LossConfig loss;
};

struct IndexOptions {
  fs::path catalog;
  fs::path model;
  fs::path index;
};

struct EvalOptions {
  fs::path model;
  fs::path index;
  fs::path test;
  fs::path report;
  fs::path summary;
};

struct DemoOptions {
  fs::path fixtures;
  fs::path out;
  std::uint64_t seed = 7;
  std::size_t budget = 20000;
  TrainOptions train;
};

/// Files the demo writes into its output directory, which doubles as a
/// snapshot directory for `serve`.
namespace demo_files {
inline constexpr const char* kFiltered = "filtered.jsonl";
inline constexpr const char* kReport = "augment_report.tsv";
inline constexpr const char* kTrain = "qa_train.jsonl";
inline constexpr const char* kTest = "qa_test.jsonl";
inline constexpr const char* kCurve = "loss_curve.tsv";
inline constexpr const char* kEvalReport = "eval_report.json";
inline constexpr const char* kEvalSummary = "eval_summary.tsv";
inline constexpr const char* kBaselineModel = "baseline_model.json";
inline constexpr const char* kBaselineIndex = "baseline_index.bin";
inline constexpr const char* kBaselineReport = "baseline_eval_report.json";
inline constexpr const char* kBaselineSummary = "baseline_eval_summary.tsv";
}  // namespace demo_files

/// Ontology files looked up inside an ontology directory.
OntologyRegistry load_registry(const fs::path& dir);

/// Each step throws neuroembed::Error subclasses on invalid input.
std::size_t run_ingest(const IngestOptions& o);
AugmentationStats run_augment(const AugmentOptions& o);
QADataset run_qagen(const QagenOptions& o);
LossCurve run_train(const TrainOptions& o);
std::size_t run_index(const IndexOptions& o);
EvalReport run_eval(const EvalOptions& o);

struct DemoResult {
  EvalReport trained;
  EvalReport baseline;
  LossCurve curve;
  AugmentationStats stats;
  std::size_t train_pairs = 0;
  std::size_t test_pairs = 0;
};

DemoResult run_demo(const DemoOptions& o);

fs::path default_fixture_dir();

/// Throws IoError naming the first missing input.
void require_inputs(std::initializer_list<const fs::path*> paths);

}  // namespace neuroembed::pipeline
