#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "neuroembed/catalog.hpp"
#include "neuroembed/ontology.hpp"

namespace neuroembed {

/// Ontology tables plus the per-dimension order in which they are consulted.
class OntologyRegistry {
 public:
  /// Po: NCBI_TAXON, MESH, UMLS. As: EFO, MESH, UMLS. Ph: EFO, MESH, UMLS.
  /// Ti: UBERON, MESH, UMLS.
  static PerDimension<std::vector<OntologyId>> default_routes();

  OntologyRegistry() : routes_(default_routes()) {}

  void add_table(SynonymTable table);
  void set_route(Dimension d, std::vector<OntologyId> route) { routes_[index_of(d)] = std::move(route); }

  const std::vector<OntologyId>& route(Dimension d) const { return routes_[index_of(d)]; }
  const SynonymTable* table(OntologyId id) const;

  /// Tables of the route that are loaded, in route order.
  std::vector<const SynonymTable*> chain(Dimension d) const;

 private:
  std::map<OntologyId, std::shared_ptr<const SynonymTable>> tables_;
  PerDimension<std::vector<OntologyId>> routes_;
};

struct NormalizedTerm {
  std::string raw;
  std::optional<std::string> canonical;
  Dimension dimension = Dimension::Po;
  MatchResult match;
};

struct VocabEntry {
  std::string canonical;
  std::vector<std::string> synonyms;
  OntologyId source = OntologyId::EFO;
  MatchKind kind = MatchKind::Exact;
};

/// Canonical labels and their synonyms, per dimension. Within a dimension no
/// string appears twice across canonicals and synonyms.
struct AugmentedVocabulary {
  PerDimension<std::map<std::string, VocabEntry>> dims;

  const std::map<std::string, VocabEntry>& at(Dimension d) const { return dims[index_of(d)]; }
  std::map<std::string, VocabEntry>& at(Dimension d) { return dims[index_of(d)]; }

  /// Every canonical and synonym of the dimension, sorted.
  std::vector<std::string> terms(Dimension d) const;
  /// Canonical a term stands for within the dimension, if any.
  std::optional<std::string> canonical_of(Dimension d, std::string_view term) const;
};

struct DimensionStats {
  std::size_t original_count = 0;
  std::size_t no_match = 0;
  std::size_t match = 0;
  std::size_t synonyms = 0;
  std::size_t primary = 0;  // EFO, NCBI_TAXON or UBERON
  std::size_t mesh = 0;
  std::size_t umls = 0;
  std::size_t direct = 0;
  std::size_t fuzzy = 0;
  std::size_t final_count = 0;
  std::size_t collisions = 0;

  double primary_pct() const;
  double mesh_pct() const;
  double umls_pct() const;
  double direct_pct() const;
  double fuzzy_pct() const;

  bool operator==(const DimensionStats&) const = default;
};

struct AugmentationStats {
  PerDimension<DimensionStats> dims;

  const DimensionStats& at(Dimension d) const { return dims[index_of(d)]; }
  DimensionStats& at(Dimension d) { return dims[index_of(d)]; }
  bool operator==(const AugmentationStats&) const = default;
};

struct AugmentResult {
  AugmentedVocabulary vocabulary;
  AugmentationStats stats;
  CohortCatalog catalog;
};

/// Tries the dimension's tables in route order, exact then fuzzy within each,
/// and stops at the first table that yields a match.
NormalizedTerm normalize_term(std::string_view raw, Dimension d, const OntologyRegistry& registry,
                              double threshold = kDefaultThreshold);

/// Synonyms of the concept with this canonical. With `source` set only that
/// table is consulted, otherwise the first table of the route holding it.
/// Throws LookupError when no table has the canonical.
std::vector<std::string> expand_synonyms(std::string_view canonical, Dimension d, const OntologyRegistry& registry,
                                         std::optional<OntologyId> source = std::nullopt);

AugmentResult augment_catalog(const CohortCatalog& catalog, const OntologyRegistry& registry,
                              double threshold = kDefaultThreshold);

/// Tab-separated summary, one row per dimension in the order Ti, Po, As, Ph.
std::string augmentation_report(const AugmentationStats& stats);
std::string augmentation_report_row(Dimension d, const DimensionStats& stats);

}  // namespace neuroembed
