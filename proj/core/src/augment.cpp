#include "neuroembed/augment.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include "neuroembed/error.hpp"
#include "neuroembed/text.hpp"

namespace neuroembed {
namespace {

double pct(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

std::string cell(std::size_t count, double percent) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%zu (%.2f)", count, percent);
  return buf;
}

bool is_primary(OntologyId id) {
  return id == OntologyId::EFO || id == OntologyId::NCBI_TAXON || id == OntologyId::UBERON;
}

}  // namespace

// ---------------------------------------------------------------------------
// OntologyRegistry

PerDimension<std::vector<OntologyId>> OntologyRegistry::default_routes() {
  PerDimension<std::vector<OntologyId>> r;
  r[index_of(Dimension::Po)] = {OntologyId::NCBI_TAXON, OntologyId::MESH, OntologyId::UMLS};
  r[index_of(Dimension::As)] = {OntologyId::EFO, OntologyId::MESH, OntologyId::UMLS};
  r[index_of(Dimension::Ph)] = {OntologyId::EFO, OntologyId::MESH, OntologyId::UMLS};
  r[index_of(Dimension::Ti)] = {OntologyId::UBERON, OntologyId::MESH, OntologyId::UMLS};
  return r;
}

void OntologyRegistry::add_table(SynonymTable table) {
  const OntologyId id = table.id();
  tables_[id] = std::make_shared<const SynonymTable>(std::move(table));
}

const SynonymTable* OntologyRegistry::table(OntologyId id) const {
  auto it = tables_.find(id);
  return it == tables_.end() ? nullptr : it->second.get();
}

std::vector<const SynonymTable*> OntologyRegistry::chain(Dimension d) const {
  std::vector<const SynonymTable*> out;
  for (OntologyId id : route(d)) {
    if (const SynonymTable* t = table(id)) out.push_back(t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// AugmentedVocabulary

std::vector<std::string> AugmentedVocabulary::terms(Dimension d) const {
  std::vector<std::string> out;
  for (const auto& [canonical, entry] : at(d)) {
    out.push_back(canonical);
    out.insert(out.end(), entry.synonyms.begin(), entry.synonyms.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<std::string> AugmentedVocabulary::canonical_of(Dimension d, std::string_view term) const {
  const auto& dim = at(d);
  if (auto it = dim.find(std::string(term)); it != dim.end()) return it->first;
  for (const auto& [canonical, entry] : dim) {
    if (std::find(entry.synonyms.begin(), entry.synonyms.end(), term) != entry.synonyms.end()) return canonical;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// DimensionStats

double DimensionStats::primary_pct() const { return pct(primary, primary + mesh + umls); }
double DimensionStats::mesh_pct() const { return pct(mesh, primary + mesh + umls); }
double DimensionStats::umls_pct() const { return pct(umls, primary + mesh + umls); }
double DimensionStats::direct_pct() const { return pct(direct, direct + fuzzy); }
double DimensionStats::fuzzy_pct() const { return pct(fuzzy, direct + fuzzy); }

// ---------------------------------------------------------------------------
// Operations

NormalizedTerm normalize_term(std::string_view raw, Dimension d, const OntologyRegistry& registry, double threshold) {
  NormalizedTerm out{std::string(raw), std::nullopt, d, {}};
  for (const SynonymTable* table : registry.chain(d)) {
    MatchResult m = lookup(raw, *table, threshold);
    if (m.matched()) {
      out.canonical = m.canonical;
      out.match = std::move(m);
      return out;
    }
  }
  return out;
}

std::vector<std::string> expand_synonyms(std::string_view canonical, Dimension d, const OntologyRegistry& registry,
                                         std::optional<OntologyId> source) {
  const std::string key = text::normalize_label(canonical);
  const ConceptEntry* entry = nullptr;
  if (source) {
    if (const SynonymTable* t = registry.table(*source)) entry = t->find(key);
  } else {
    for (const SynonymTable* t : registry.chain(d)) {
      if ((entry = t->find(key)) != nullptr) break;
    }
  }
  if (entry == nullptr) {
    throw LookupError("no concept '" + std::string(canonical) + "' for dimension " + std::string(dimension_name(d)));
  }
  std::vector<std::string> out;
  std::unordered_set<std::string> seen{entry->canonical};
  for (const auto& s : entry->synonyms) {
    std::string n = text::normalize_label(s);
    if (seen.insert(n).second) out.push_back(std::move(n));
  }
  return out;
}

AugmentResult augment_catalog(const CohortCatalog& catalog, const OntologyRegistry& registry, double threshold) {
  AugmentResult result;
  result.catalog.source_digest = catalog.source_digest;

  for (Dimension d : kAllDimensions) {
    DimensionStats& stats = result.stats.at(d);
    std::unordered_map<std::string, NormalizedTerm> normalized;
    std::vector<std::string> order;
    for (const auto& record : catalog.records) {
      for (const auto& v : record.at(d)) {
        std::string key = text::normalize_label(v);
        if (key.empty() || normalized.count(key) != 0) continue;
        normalized.emplace(key, normalize_term(v, d, registry, threshold));
        order.push_back(std::move(key));
      }
    }

    // Tally distinct values and create one vocabulary entry per canonical;
    // the first value reaching a canonical decides its source and match kind.
    auto& vocab = result.vocabulary.at(d);
    std::vector<std::string> created;
    stats.original_count = order.size();
    for (const auto& key : order) {
      const NormalizedTerm& nt = normalized.at(key);
      if (!nt.match.matched()) {
        ++stats.no_match;
        continue;
      }
      ++stats.match;
      const OntologyId src = *nt.match.ontology;
      if (is_primary(src)) {
        ++stats.primary;
      } else if (src == OntologyId::MESH) {
        ++stats.mesh;
      } else {
        ++stats.umls;
      }
      ++(nt.match.kind == MatchKind::Exact ? stats.direct : stats.fuzzy);
      if (vocab.count(*nt.canonical) == 0) {
        vocab.emplace(*nt.canonical, VocabEntry{*nt.canonical, {}, src, nt.match.kind});
        created.push_back(*nt.canonical);
      }
    }

    // Synonyms: canonicals are claimed first, then synonyms in creation order.
    // A synonym is kept only if it is unclaimed and resolves back to this
    // concept in its source table.
    std::unordered_set<std::string> claimed;
    for (const auto& [canonical, entry] : vocab) claimed.insert(canonical);
    for (const auto& canonical : created) {
      VocabEntry& entry = vocab.at(canonical);
      const SynonymTable* table = registry.table(entry.source);
      for (auto& s : expand_synonyms(canonical, d, registry, entry.source)) {
        const ConceptEntry* back = table->exact(s);
        if (back == nullptr || back->canonical != canonical || !claimed.insert(s).second) {
          ++stats.collisions;
          continue;
        }
        entry.synonyms.push_back(std::move(s));
      }
      stats.synonyms += entry.synonyms.size();
    }
    stats.final_count = vocab.size();

    if (d == kAllDimensions.front()) result.catalog.records = catalog.records;
    for (std::size_t r = 0; r < catalog.records.size(); ++r) {
      const CohortRecord& src = catalog.records[r];
      CohortRecord& dst = result.catalog.records[r];
      std::vector<std::string> rewritten;
      std::vector<std::string> unmapped;
      for (const auto& v : src.at(d)) {
        std::string key = text::normalize_label(v);
        if (key.empty()) continue;
        const NormalizedTerm& nt = normalized.at(key);
        std::string value = nt.canonical ? *nt.canonical : v;
        if (!nt.canonical) unmapped.push_back(v);
        if (std::find(rewritten.begin(), rewritten.end(), value) == rewritten.end()) rewritten.push_back(value);
      }
      if (!src.normalized()) dst.raw[index_of(d)] = src.at(d);
      dst.at(d) = std::move(rewritten);
      dst.unmapped[index_of(d)] = std::move(unmapped);
    }
  }
  return result;
}

std::string augmentation_report_row(Dimension d, const DimensionStats& s) {
  char head[160];
  std::snprintf(head, sizeof(head), "%s\t%zu\t%zu\t%zu\t%zu", std::string(dimension_name(d)).c_str(), s.original_count,
                s.no_match, s.match, s.synonyms);
  std::string row = head;
  for (const std::string& c : {cell(s.primary, s.primary_pct()), cell(s.mesh, s.mesh_pct()),
                               cell(s.umls, s.umls_pct()), cell(s.direct, s.direct_pct()),
                               cell(s.fuzzy, s.fuzzy_pct())}) {
    row.push_back('\t');
    row += c;
  }
  row.push_back('\t');
  row += std::to_string(s.final_count);
  return row;
}

std::string augmentation_report(const AugmentationStats& stats) {
  std::string out =
      "Field\tOriginal Count\tNo Match\tMatch\tSynonyms\tEFO/NCBI/UBERON (%)\tMeSH (%)\tUMLS (%)\tDirect (%)\t"
      "Fuzzy (%)\tFinal Count\n";
  for (Dimension d : {Dimension::Ti, Dimension::Po, Dimension::As, Dimension::Ph}) {
    out += augmentation_report_row(d, stats.at(d));
    out.push_back('\n');
  }
  return out;
}

}  // namespace neuroembed
