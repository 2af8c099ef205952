#include "neuroembed/serialize.hpp"

#include <json.hpp>

#include "neuroembed/error.hpp"

namespace neuroembed {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid ") + what + ": " + e.what());
  }
}

}  // namespace

std::string write_vocabulary(const AugmentedVocabulary& vocab) {
  ordered_json doc = ordered_json::object();
  for (Dimension d : kAllDimensions) {
    ordered_json dim = ordered_json::object();
    for (const auto& [canonical, entry] : vocab.at(d)) {
      ordered_json e;
      e["synonyms"] = entry.synonyms;
      e["source"] = ontology_name(entry.source);
      e["kind"] = match_kind_name(entry.kind);
      dim[canonical] = std::move(e);
    }
    doc[std::string(dimension_name(d))] = std::move(dim);
  }
  return doc.dump(2) + "\n";
}

AugmentedVocabulary parse_vocabulary(std::string_view json_text) {
  const json doc = parse_json(json_text, "vocabulary");
  if (!doc.is_object()) throw ParseError("vocabulary must be a mapping");
  AugmentedVocabulary vocab;
  try {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      auto d = parse_dimension(it.key());
      if (!d) throw ParseError("unknown dimension '" + it.key() + "' in vocabulary");
      for (auto e = it.value().begin(); e != it.value().end(); ++e) {
        VocabEntry entry;
        entry.canonical = e.key();
        entry.synonyms = e.value().at("synonyms").get<std::vector<std::string>>();
        auto src = parse_ontology(e.value().at("source").get<std::string>());
        auto kind = parse_match_kind(e.value().at("kind").get<std::string>());
        if (!src || !kind) throw ParseError("bad source or kind for '" + e.key() + "'");
        entry.source = *src;
        entry.kind = *kind;
        vocab.at(*d).emplace(entry.canonical, std::move(entry));
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid vocabulary: ") + e.what());
  }
  return vocab;
}

std::string write_stats(const AugmentationStats& stats) {
  ordered_json doc = ordered_json::object();
  for (Dimension d : kAllDimensions) {
    const DimensionStats& s = stats.at(d);
    ordered_json row;
    row["original_count"] = s.original_count;
    row["no_match"] = s.no_match;
    row["match"] = s.match;
    row["synonyms"] = s.synonyms;
    row["primary"] = s.primary;
    row["mesh"] = s.mesh;
    row["umls"] = s.umls;
    row["direct"] = s.direct;
    row["fuzzy"] = s.fuzzy;
    row["final_count"] = s.final_count;
    row["collisions"] = s.collisions;
    row["primary_pct"] = s.primary_pct();
    row["mesh_pct"] = s.mesh_pct();
    row["umls_pct"] = s.umls_pct();
    row["direct_pct"] = s.direct_pct();
    row["fuzzy_pct"] = s.fuzzy_pct();
    doc[std::string(dimension_name(d))] = std::move(row);
  }
  return doc.dump(2) + "\n";
}

AugmentationStats parse_stats(std::string_view json_text) {
  const json doc = parse_json(json_text, "augmentation stats");
  AugmentationStats stats;
  try {
    for (Dimension d : kAllDimensions) {
      const json& row = doc.at(std::string(dimension_name(d)));
      DimensionStats& s = stats.at(d);
      s.original_count = row.at("original_count").get<std::size_t>();
      s.no_match = row.at("no_match").get<std::size_t>();
      s.match = row.at("match").get<std::size_t>();
      s.synonyms = row.at("synonyms").get<std::size_t>();
      s.primary = row.at("primary").get<std::size_t>();
      s.mesh = row.at("mesh").get<std::size_t>();
      s.umls = row.at("umls").get<std::size_t>();
      s.direct = row.at("direct").get<std::size_t>();
      s.fuzzy = row.at("fuzzy").get<std::size_t>();
      s.final_count = row.at("final_count").get<std::size_t>();
      s.collisions = row.value("collisions", std::size_t{0});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid augmentation stats: ") + e.what());
  }
  return stats;
}

}  // namespace neuroembed
