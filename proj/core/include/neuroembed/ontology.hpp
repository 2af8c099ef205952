#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace neuroembed {

enum class OntologyId { EFO, UBERON, NCBI_TAXON, MESH, UMLS };

std::string_view ontology_name(OntologyId id);
std::optional<OntologyId> parse_ontology(std::string_view name);

struct ConceptEntry {
  std::string concept_id;
  std::string canonical;
  std::vector<std::string> synonyms;
};

enum class MatchKind { Exact, Fuzzy, None };

std::string_view match_kind_name(MatchKind kind);
std::optional<MatchKind> parse_match_kind(std::string_view name);

struct MatchResult {
  MatchKind kind = MatchKind::None;
  std::optional<std::string> canonical;
  std::optional<std::string> concept_id;
  std::optional<OntologyId> ontology;
  double score = 0.0;

  bool matched() const { return kind != MatchKind::None; }
};

inline constexpr double kDefaultThreshold = 80.0;

/// Concepts of one ontology keyed by normalized canonical label.
///
/// Labels and synonyms are normalized on insertion. A second concept with an
/// already-present canonical is merged into the first and counted as a warning.
/// Synonyms equal to the canonical and repeated synonyms are dropped.
class SynonymTable {
 public:
  explicit SynonymTable(OntologyId id) : id_(id) {}

  OntologyId id() const { return id_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<ConceptEntry>& entries() const { return entries_; }
  std::size_t warnings() const { return warnings_; }
  void add_warning() { ++warnings_; }

  void add(std::string_view concept_id, std::string_view label, const std::vector<std::string>& synonyms);
  void add_synonym(std::string_view label, std::string_view synonym);

  const ConceptEntry* find(std::string_view canonical) const;

  /// Concept whose canonical or synonym equals the normalized term. A canonical
  /// hit wins over synonym hits; among synonym hits the smallest canonical wins.
  const ConceptEntry* exact(std::string_view normalized_term) const;

 private:
  void index_string(const std::string& s, std::size_t entry);

  OntologyId id_;
  std::vector<ConceptEntry> entries_;
  std::unordered_map<std::string, std::size_t> by_canonical_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_string_;
  std::size_t warnings_ = 0;
};

/// OWL in RDF/XML: one concept per owl:Class carrying an rdfs:label, synonyms
/// from oboInOwl:hasExactSynonym. Classes with synonyms but no label are
/// skipped and counted in warnings().
SynonymTable parse_owl_synonyms(std::string_view xml, OntologyId id);

/// MeSH descriptor XML: canonical is the DescriptorName, synonyms every Term
/// String under the descriptor's ConceptList.
SynonymTable parse_mesh_concepts(std::string_view xml);

/// Tab-separated CUI, preferred label, synonym. Blank lines are skipped.
SynonymTable load_umls_dict(std::istream& in);

/// Edit distance over Unicode scalar values.
std::size_t levenshtein(std::string_view a, std::string_view b);
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

/// 100 * (1 - d / max_len) over normalized forms; 100 when both are empty.
double similarity_score(std::string_view a, std::string_view b);

/// Exact pass, then the best fuzzy candidate over canonicals and synonyms with
/// score >= threshold. Ties go to the higher score, then the smaller canonical.
MatchResult lookup(std::string_view term, const SynonymTable& table, double threshold = kDefaultThreshold);

}  // namespace neuroembed
