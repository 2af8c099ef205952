#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace neuroembed {

/// The four metadata axes a cohort is described by.
enum class Dimension { Po = 0, As = 1, Ph = 2, Ti = 3 };

inline constexpr std::size_t kDimensionCount = 4;
inline constexpr std::array<Dimension, kDimensionCount> kAllDimensions = {
    Dimension::Po, Dimension::As, Dimension::Ph, Dimension::Ti};

std::string_view dimension_name(Dimension d);          // "Po", "As", ...
std::string_view dimension_key(Dimension d);           // "po", "as", ... (catalog keys)
std::optional<Dimension> parse_dimension(std::string_view name);
constexpr std::size_t index_of(Dimension d) { return static_cast<std::size_t>(d); }

template <typename T>
using PerDimension = std::array<T, kDimensionCount>;

/// One omics study. `values` holds the current per-dimension values; after
/// augmentation matched values are canonical labels, `raw` keeps the original
/// strings and `unmapped` lists the originals no ontology matched.
struct CohortRecord {
  std::string accession;
  std::string title;
  std::string summary;
  std::optional<std::string> pmid;
  std::optional<std::string> publication_title;
  std::string disease;
  PerDimension<std::vector<std::string>> values;
  PerDimension<std::vector<std::string>> raw;
  PerDimension<std::vector<std::string>> unmapped;

  const std::vector<std::string>& at(Dimension d) const { return values[index_of(d)]; }
  std::vector<std::string>& at(Dimension d) { return values[index_of(d)]; }
  bool normalized() const;
};

struct CohortCatalog {
  std::vector<CohortRecord> records;
  /// FNV-1a 64 of the source bytes, hex encoded. Empty for in-memory catalogs.
  std::string source_digest;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  const CohortRecord* find(std::string_view accession) const;
};

struct DiseaseTermSet {
  std::string disease;
  std::vector<std::string> terms;

  /// Builds a set whose terms always include the label itself.
  static DiseaseTermSet make(std::string disease, std::vector<std::string> terms);
};

/// Reads one JSON object per line. Blank lines are skipped.
/// Throws ParseError (with line number) or DuplicateError.
CohortCatalog parse_catalog(std::istream& in);
CohortCatalog parse_catalog_text(std::string_view text);

/// Inverse of parse_catalog; augmentation fields are written only when set.
std::string write_catalog(const CohortCatalog& catalog);

/// Parses {"disease": ["term", ...], ...}.
std::vector<DiseaseTermSet> parse_disease_terms(std::string_view json_text);

/// All sentences except the first and the last; empty for two or fewer.
std::string strip_boilerplate(std::string_view summary);

bool matches_disease(const CohortRecord& record, const DiseaseTermSet& terms);

/// Keeps records where some term occurs as a whole word in the title, the
/// publication title, or the summary with its first and last sentences removed.
CohortCatalog filter_disease(const CohortCatalog& catalog, const DiseaseTermSet& terms);

/// Filters each record against the term set for its own disease label; records
/// whose disease has no term set are dropped.
CohortCatalog filter_disease(const CohortCatalog& catalog, const std::vector<DiseaseTermSet>& sets);

/// Deterministic text used as the retrieval target for a cohort:
/// "title. Po: a, b; As: ...; Ph: ...; Ti: ...".
std::string cohort_text(const CohortRecord& record);

}  // namespace neuroembed
