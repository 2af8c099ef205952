#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "neuroembed/augment.hpp"
#include "neuroembed/catalog.hpp"

namespace neuroembed {

/// Query terms per dimension, each mapped to the canonical it stands for.
using TermSet = PerDimension<std::map<std::string, std::string>>;

struct SplitVocabulary {
  TermSet train;
  TermSet test;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};

/// One to four (dimension, term) entries, at most one per dimension, kept in
/// dimension enum order.
struct QueryCombo {
  std::vector<std::pair<Dimension, std::string>> terms;

  std::size_t k() const { return terms.size(); }
  const std::string* term(Dimension d) const;
  bool operator==(const QueryCombo&) const = default;
};

enum class Split { Train, Test };
std::string_view split_name(Split s);

struct CandidatePair {
  QueryCombo combo;
  std::string accession;
  std::vector<std::string> all_matching;
};

struct QAPair {
  std::string nlq;
  std::string accession;
  std::vector<std::string> all_matching;
  QueryCombo combo;
  int template_id = 1;
  Split split = Split::Train;

  bool operator==(const QAPair&) const = default;
};

struct Connective {
  std::string prefix;
  std::string suffix;
  /// Emit the suffix only when this dimension's phrase closes the query.
  bool suffix_when_last = false;
};

/// Templates and per-dimension connective phrases used to turn a combo into text.
struct RenderRules {
  std::vector<std::string> templates;
  int test_only_template = 6;
  std::string subject = "cohorts";
  std::vector<Dimension> order;
  PerDimension<Connective> connectives;

  static RenderRules defaults();
  int template_count() const { return static_cast<int>(templates.size()); }
};

struct QAConfig {
  double ratio = 0.8;
  std::uint64_t seed = 0;
  /// Maximum number of sampled combos per combo size k.
  std::size_t budget = 20000;
  RenderRules rules = RenderRules::defaults();
};

struct QADataset {
  std::vector<QAPair> train;
  std::vector<QAPair> test;
  SplitVocabulary split;
  std::size_t train_candidates = 0;
  std::size_t test_candidates = 0;
};

/// Shuffles each dimension's terms and sends about ratio * n of them to train:
/// round(ratio * total) overall, apportioned to dimensions by largest
/// remainder. Dimensions with fewer than 2 terms go wholly to train.
/// A string already placed by an earlier dimension keeps its side, so the two
/// sides stay disjoint across dimensions.
SplitVocabulary stratified_split(const AugmentedVocabulary& vocab, double ratio, std::uint64_t seed);

/// Accessions (catalog order) whose records carry, for every combo dimension,
/// the canonical the term resolves to.
std::vector<std::string> matching_cohorts(const QueryCombo& combo, const TermSet& vals, const CohortCatalog& catalog);

/// Samples up to `budget` distinct combos per k in 1..4 and keeps the ones
/// at least one cohort satisfies, with one matching cohort drawn at random.
std::vector<CandidatePair> enumerate_pairs(const TermSet& vals, const CohortCatalog& catalog, std::uint64_t seed,
                                           std::size_t budget);

std::string render_nlq(const QueryCombo& combo, int template_id, const RenderRules& rules = RenderRules::defaults());

bool uses_only(const QueryCombo& combo, const TermSet& vals);

QADataset generate_qad(const AugmentedVocabulary& vocab, const CohortCatalog& catalog, const QAConfig& config);

/// Uniform subsample without replacement to min(n, factor * test_size);
/// the kept pairs stay in their original order.
std::vector<QAPair> subsample_train(const std::vector<QAPair>& train, std::size_t test_size, std::size_t factor,
                                    std::uint64_t seed);

std::string write_qa(const std::vector<QAPair>& pairs);
std::vector<QAPair> parse_qa(std::string_view jsonl);

}  // namespace neuroembed
