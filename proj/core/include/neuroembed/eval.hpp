#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "neuroembed/embed.hpp"
#include "neuroembed/index.hpp"
#include "neuroembed/qagen.hpp"

namespace neuroembed {

using Ranking = std::span<const std::string>;
using RelevantSet = std::unordered_set<std::string>;

/// R-precision: fraction of the top |relevant| ranked ids that are relevant.
/// Throws IntegrityError when relevant is empty or not contained in ranking.
double retrieval_precision(Ranking ranking, const RelevantSet& relevant);

/// 1 - (r - 1) / (total - 1) for 1-based rank r; 1.0 when total is 1.
double percentile_rank(Ranking ranking, const std::string& accession);

double mean_percentile_rank(Ranking ranking, const RelevantSet& relevant);

struct QueryEvaluation {
  std::string nlq;
  std::vector<std::string> relevant;
  std::vector<std::string> top;  // first |relevant| ranked ids
  double precision = 0.0;
  double mpr = 0.0;
  std::size_t n_terms = 1;
};

inline constexpr std::size_t kHistogramBins = 20;  // width 0.05 on [0, 1]
using Histogram = std::array<std::size_t, kHistogramBins>;

std::size_t histogram_bin(double value);

struct GroupSummary {
  std::size_t count = 0;
  double mean_precision = 0.0;
  double mean_mpr = 0.0;
  Histogram precision_hist{};
  Histogram mpr_hist{};
};

struct EvalReport {
  std::vector<QueryEvaluation> queries;
  GroupSummary overall;
  std::array<GroupSummary, 4> by_terms;  // n_terms 1..4

  /// Recomputes the summaries from `queries`.
  void summarize();
};

/// Embeds and projects each test query, ranks every indexed cohort, and scores
/// it against the pair's all_matching set. Throws InputError on an empty set.
EvalReport evaluate(const ProjectionHead& head, const EmbeddingProvider& provider, const VectorIndex& index,
                    const std::vector<QAPair>& test_set);

/// JSON report with means, per-group means and histograms, and per-query rows.
std::string write_eval_report(const EvalReport& report);
/// Tab-separated group summary for plotting.
std::string write_eval_summary(const EvalReport& report);

}  // namespace neuroembed
