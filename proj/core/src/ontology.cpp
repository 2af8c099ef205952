#include "neuroembed/ontology.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <string>

#include "neuroembed/error.hpp"
#include "neuroembed/text.hpp"

namespace neuroembed {
namespace {

constexpr std::array<std::string_view, 5> kOntologyNames = {"EFO", "UBERON", "NCBI_TAXON", "MESH", "UMLS"};

double ratio(std::size_t distance, std::size_t max_len) {
  if (max_len == 0) return 100.0;
  return 100.0 * static_cast<double>(max_len - distance) / static_cast<double>(max_len);
}

}  // namespace

std::string_view ontology_name(OntologyId id) { return kOntologyNames[static_cast<std::size_t>(id)]; }

std::optional<OntologyId> parse_ontology(std::string_view name) {
  for (std::size_t i = 0; i < kOntologyNames.size(); ++i) {
    if (kOntologyNames[i] == name) return static_cast<OntologyId>(i);
  }
  return std::nullopt;
}

std::string_view match_kind_name(MatchKind kind) {
  switch (kind) {
    case MatchKind::Exact:
      return "exact";
    case MatchKind::Fuzzy:
      return "fuzzy";
    case MatchKind::None:
      break;
  }
  return "none";
}

std::optional<MatchKind> parse_match_kind(std::string_view name) {
  if (name == "exact") return MatchKind::Exact;
  if (name == "fuzzy") return MatchKind::Fuzzy;
  if (name == "none") return MatchKind::None;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// SynonymTable

void SynonymTable::index_string(const std::string& s, std::size_t entry) {
  auto& slots = by_string_[s];
  if (std::find(slots.begin(), slots.end(), entry) == slots.end()) slots.push_back(entry);
}

void SynonymTable::add(std::string_view concept_id, std::string_view label, const std::vector<std::string>& synonyms) {
  std::string canonical = text::normalize_label(label);
  if (canonical.empty()) {
    ++warnings_;
    return;
  }
  std::size_t idx;
  auto it = by_canonical_.find(canonical);
  if (it != by_canonical_.end()) {
    idx = it->second;
    ++warnings_;
  } else {
    idx = entries_.size();
    std::string id(text::trim(concept_id));
    if (id.empty()) id = canonical;
    entries_.push_back(ConceptEntry{std::move(id), canonical, {}});
    by_canonical_.emplace(canonical, idx);
    index_string(canonical, idx);
  }
  for (const auto& s : synonyms) add_synonym(canonical, s);
}

void SynonymTable::add_synonym(std::string_view label, std::string_view synonym) {
  auto it = by_canonical_.find(text::normalize_label(label));
  if (it == by_canonical_.end()) throw LookupError("no concept labelled '" + std::string(label) + "'");
  ConceptEntry& entry = entries_[it->second];
  std::string s = text::normalize_label(synonym);
  if (s.empty() || s == entry.canonical) return;
  if (std::find(entry.synonyms.begin(), entry.synonyms.end(), s) != entry.synonyms.end()) return;
  entry.synonyms.push_back(s);
  index_string(s, it->second);
}

const ConceptEntry* SynonymTable::find(std::string_view canonical) const {
  auto it = by_canonical_.find(std::string(canonical));
  return it == by_canonical_.end() ? nullptr : &entries_[it->second];
}

const ConceptEntry* SynonymTable::exact(std::string_view normalized_term) const {
  if (const ConceptEntry* e = find(normalized_term)) return e;
  auto it = by_string_.find(std::string(normalized_term));
  if (it == by_string_.end()) return nullptr;
  const ConceptEntry* best = nullptr;
  for (std::size_t idx : it->second) {
    const ConceptEntry& e = entries_[idx];
    if (best == nullptr || e.canonical < best->canonical) best = &e;
  }
  return best;
}

// ---------------------------------------------------------------------------
// UMLS dictionary

SynonymTable load_umls_dict(std::istream& in) {
  SynonymTable table(OntologyId::UMLS);
  std::map<std::string, std::string> label_of_cui;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (;;) {
      std::size_t tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 3) {
      throw ParseError("expected 3 tab-separated columns, found " + std::to_string(cols.size()), line_no);
    }
    const std::string cui(text::trim(cols[0]));
    if (cui.empty() || text::normalize_label(cols[1]).empty()) throw ParseError("empty CUI or label", line_no);
    auto [it, inserted] = label_of_cui.emplace(cui, cols[1]);
    if (inserted) table.add(cui, cols[1], {});
    table.add_synonym(it->second, cols[2]);
  }
  return table;
}

// ---------------------------------------------------------------------------
// Matching

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(text::decode_utf8(a), text::decode_utf8(b));
}

double similarity_score(std::string_view a, std::string_view b) {
  const std::u32string na = text::decode_utf8(text::normalize_label(a));
  const std::u32string nb = text::decode_utf8(text::normalize_label(b));
  return ratio(levenshtein(na, nb), std::max(na.size(), nb.size()));
}

MatchResult lookup(std::string_view term, const SynonymTable& table, double threshold) {
  if (threshold < 0.0 || threshold > 100.0) throw InputError("threshold must lie in [0, 100]");
  MatchResult result;
  const std::string normalized = text::normalize_label(term);
  if (const ConceptEntry* e = table.exact(normalized)) {
    result.kind = MatchKind::Exact;
    result.canonical = e->canonical;
    result.concept_id = e->concept_id;
    result.ontology = table.id();
    result.score = 100.0;
    return result;
  }

  const std::u32string query = text::decode_utf8(normalized);
  const ConceptEntry* best = nullptr;
  double best_score = -1.0;
  auto consider = [&](const ConceptEntry& e, const std::string& candidate) {
    const std::u32string c = text::decode_utf8(candidate);
    const std::size_t max_len = std::max(query.size(), c.size());
    const std::size_t min_len = std::min(query.size(), c.size());
    // Length difference alone bounds the distance from below.
    const double bound = ratio(max_len - min_len, max_len);
    if (bound < threshold || bound < best_score) return;
    if (bound == best_score && best != nullptr && !(e.canonical < best->canonical)) return;
    const double score = ratio(levenshtein(query, c), max_len);
    if (score < threshold) return;
    if (score > best_score || (score == best_score && e.canonical < best->canonical)) {
      best = &e;
      best_score = score;
    }
  };
  for (const ConceptEntry& e : table.entries()) {
    consider(e, e.canonical);
    for (const auto& s : e.synonyms) consider(e, s);
  }
  if (best == nullptr) return result;
  result.kind = MatchKind::Fuzzy;
  result.canonical = best->canonical;
  result.concept_id = best->concept_id;
  result.ontology = table.id();
  result.score = best_score;
  return result;
}

}  // namespace neuroembed
