#include "neuroembed/catalog.hpp"

#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "neuroembed/error.hpp"
#include "neuroembed/fileio.hpp"
#include "neuroembed/text.hpp"

namespace neuroembed {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::array<std::string_view, kDimensionCount> kNames = {"Po", "As", "Ph", "Ti"};
constexpr std::array<std::string_view, kDimensionCount> kKeys = {"po", "as", "ph", "ti"};

std::string string_field(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw ParseError(std::string("field '") + key + "' must be a string", line);
}

std::optional<std::string> optional_field(const json& obj, const char* key, std::size_t line) {
  std::string v = string_field(obj, key, line);
  if (text::trim(v).empty()) return std::nullopt;
  return v;
}

std::vector<std::string> list_field(const json& obj, std::string_view key, std::size_t line) {
  std::vector<std::string> out;
  auto it = obj.find(std::string(key));
  if (it == obj.end() || it->is_null()) return out;
  if (it->is_string()) {
    if (!text::trim(it->get<std::string>()).empty()) out.push_back(it->get<std::string>());
    return out;
  }
  if (!it->is_array()) throw ParseError("field '" + std::string(key) + "' must be a list of strings", line);
  for (const auto& v : *it) {
    if (!v.is_string()) throw ParseError("field '" + std::string(key) + "' must be a list of strings", line);
    if (!text::trim(v.get<std::string>()).empty()) out.push_back(v.get<std::string>());
  }
  return out;
}

PerDimension<std::vector<std::string>> dims_field(const json& obj, const char* key, std::size_t line) {
  PerDimension<std::vector<std::string>> out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_object()) throw ParseError(std::string("field '") + key + "' must be a mapping", line);
  for (Dimension d : kAllDimensions) out[index_of(d)] = list_field(*it, dimension_key(d), line);
  return out;
}

CohortRecord parse_record(std::string_view line_text, std::size_t line) {
  json obj;
  try {
    obj = json::parse(line_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid record: ") + e.what(), line);
  }
  if (!obj.is_object()) throw ParseError("record must be a mapping", line);
  CohortRecord r;
  r.accession = std::string(text::trim(string_field(obj, "accession", line)));
  if (r.accession.empty()) throw ParseError("missing accession", line);
  r.title = string_field(obj, "title", line);
  r.summary = string_field(obj, "summary", line);
  r.pmid = optional_field(obj, "pmid", line);
  r.publication_title = optional_field(obj, "publication_title", line);
  r.disease = string_field(obj, "disease", line);
  for (Dimension d : kAllDimensions) r.values[index_of(d)] = list_field(obj, dimension_key(d), line);
  r.raw = dims_field(obj, "raw", line);
  r.unmapped = dims_field(obj, "unmapped", line);
  return r;
}

ordered_json dims_json(const PerDimension<std::vector<std::string>>& dims) {
  ordered_json out = ordered_json::object();
  for (Dimension d : kAllDimensions) out[std::string(dimension_key(d))] = dims[index_of(d)];
  return out;
}

}  // namespace

std::string_view dimension_name(Dimension d) { return kNames[index_of(d)]; }
std::string_view dimension_key(Dimension d) { return kKeys[index_of(d)]; }

std::optional<Dimension> parse_dimension(std::string_view name) {
  for (Dimension d : kAllDimensions) {
    if (name == kNames[index_of(d)] || name == kKeys[index_of(d)]) return d;
  }
  return std::nullopt;
}

bool CohortRecord::normalized() const {
  for (const auto& r : raw) {
    if (!r.empty()) return true;
  }
  return false;
}

const CohortRecord* CohortCatalog::find(std::string_view accession) const {
  for (const auto& r : records) {
    if (r.accession == accession) return &r;
  }
  return nullptr;
}

DiseaseTermSet DiseaseTermSet::make(std::string disease, std::vector<std::string> terms) {
  DiseaseTermSet set{std::move(disease), {}};
  std::unordered_set<std::string> seen;
  auto add = [&](const std::string& t) {
    std::string key = text::normalize_label(t);
    if (key.empty() || !seen.insert(key).second) return;
    set.terms.push_back(std::string(text::trim(t)));
  };
  add(set.disease);
  for (const auto& t : terms) add(t);
  if (set.terms.empty()) throw InputError("disease term set without a label");
  return set;
}

CohortCatalog parse_catalog(std::istream& in) {
  CohortCatalog catalog;
  std::unordered_set<std::string> seen;
  std::string source;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    source.append(line).push_back('\n');
    if (text::trim(line).empty()) continue;
    CohortRecord r = parse_record(line, line_no);
    if (!seen.insert(r.accession).second) throw DuplicateError(r.accession);
    catalog.records.push_back(std::move(r));
  }
  catalog.source_digest = fnv1a_hex(source);
  return catalog;
}

CohortCatalog parse_catalog_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_catalog(in);
}

std::string write_catalog(const CohortCatalog& catalog) {
  std::string out;
  for (const auto& r : catalog.records) {
    ordered_json obj;
    obj["accession"] = r.accession;
    obj["title"] = r.title;
    obj["summary"] = r.summary;
    obj["pmid"] = r.pmid ? ordered_json(*r.pmid) : ordered_json(nullptr);
    obj["publication_title"] = r.publication_title ? ordered_json(*r.publication_title) : ordered_json(nullptr);
    obj["disease"] = r.disease;
    for (Dimension d : kAllDimensions) obj[std::string(dimension_key(d))] = r.at(d);
    if (r.normalized()) {
      obj["raw"] = dims_json(r.raw);
      obj["unmapped"] = dims_json(r.unmapped);
    }
    out += obj.dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<DiseaseTermSet> parse_disease_terms(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid disease term file: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("disease term file must be a mapping");
  std::vector<DiseaseTermSet> sets;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!it.value().is_array()) throw ParseError("terms for '" + it.key() + "' must be a list");
    std::vector<std::string> terms;
    for (const auto& t : it.value()) {
      if (!t.is_string()) throw ParseError("terms for '" + it.key() + "' must be strings");
      terms.push_back(t.get<std::string>());
    }
    sets.push_back(DiseaseTermSet::make(it.key(), std::move(terms)));
  }
  return sets;
}

std::string strip_boilerplate(std::string_view summary) {
  std::vector<std::string> sentences = text::split_sentences(summary);
  if (sentences.size() <= 2) return {};
  std::vector<std::string> middle(sentences.begin() + 1, sentences.end() - 1);
  return text::join(middle, " ");
}

bool matches_disease(const CohortRecord& record, const DiseaseTermSet& terms) {
  const std::string abstract = strip_boilerplate(record.summary);
  for (const auto& term : terms.terms) {
    if (text::contains_word(record.title, term)) return true;
    if (record.publication_title && text::contains_word(*record.publication_title, term)) return true;
    if (text::contains_word(abstract, term)) return true;
  }
  return false;
}

CohortCatalog filter_disease(const CohortCatalog& catalog, const DiseaseTermSet& terms) {
  CohortCatalog out;
  out.source_digest = catalog.source_digest;
  for (const auto& r : catalog.records) {
    if (matches_disease(r, terms)) out.records.push_back(r);
  }
  return out;
}

CohortCatalog filter_disease(const CohortCatalog& catalog, const std::vector<DiseaseTermSet>& sets) {
  CohortCatalog out;
  out.source_digest = catalog.source_digest;
  for (const auto& r : catalog.records) {
    const std::string disease = text::normalize_label(r.disease);
    for (const auto& set : sets) {
      if (text::normalize_label(set.disease) == disease) {
        if (matches_disease(r, set)) out.records.push_back(r);
        break;
      }
    }
  }
  return out;
}

std::string cohort_text(const CohortRecord& record) {
  std::string out(text::trim(record.title));
  if (!out.empty() && out.back() != '.' && out.back() != '!' && out.back() != '?') out.push_back('.');
  for (Dimension d : kAllDimensions) {
    if (!out.empty()) out.push_back(' ');
    out.append(dimension_name(d)).append(": ").append(text::join(record.at(d), ", "));
    if (d != Dimension::Ti) out.push_back(';');
  }
  return out;
}

}  // namespace neuroembed
