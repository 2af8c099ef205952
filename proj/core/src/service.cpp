#include "neuroembed/service.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "neuroembed/error.hpp"
#include "neuroembed/fileio.hpp"
#include "neuroembed/serialize.hpp"
#include "neuroembed/text.hpp"

namespace neuroembed {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

Response reply(int status, const ordered_json& body) { return {status, body.dump()}; }

Response error_reply(int status, std::string_view message) {
  ordered_json body;
  body["error"] = message;
  body["status"] = status;
  return reply(status, body);
}

ordered_json dimension_values(const CohortRecord& r) {
  ordered_json out = ordered_json::object();
  for (Dimension d : kAllDimensions) out[std::string(dimension_name(d))] = r.at(d);
  return out;
}

}  // namespace

std::shared_ptr<const Snapshot> Snapshot::load(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("snapshot directory " + dir.string() + " does not exist");
  auto snap = std::make_shared<Snapshot>();
  snap->directory = dir.string();
  snap->catalog = parse_catalog_text(read_file(dir / snapshot_files::kCatalog));
  snap->vocabulary = parse_vocabulary(read_file(dir / snapshot_files::kVocabulary));
  snap->stats = parse_stats(read_file(dir / snapshot_files::kStats));
  snap->model = parse_model(read_file(dir / snapshot_files::kModel));
  snap->provider = make_provider(snap->model.provider_id, snap->model.head.d_in());
  {
    const auto path = dir / snapshot_files::kIndex;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    snap->index = load_index(in);
  }
  if (!snap->index.empty() && snap->index.dimension() != snap->model.head.d_out()) {
    throw IntegrityError("index dimension does not match the model output dimension");
  }
  for (const auto& id : snap->index.ids()) {
    if (snap->catalog.find(id) == nullptr) throw IntegrityError("indexed cohort '" + id + "' is not in the catalog");
  }
  return snap;
}

void SearchService::install(std::shared_ptr<const Snapshot> snapshot) {
  std::lock_guard lock(mutex_);
  snapshot_ = std::move(snapshot);
}

std::shared_ptr<const Snapshot> SearchService::current() const {
  std::lock_guard lock(mutex_);
  return snapshot_;
}

std::string SearchService::source_url(std::string_view accession) const {
  std::string url = config_.source_url_pattern;
  constexpr std::string_view kSlot = "{accession}";
  for (std::size_t pos = url.find(kSlot); pos != std::string::npos; pos = url.find(kSlot, pos + accession.size())) {
    url.replace(pos, kSlot.size(), accession);
  }
  return url;
}

Response SearchService::handle_query(std::string_view body) const {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error&) {
    return error_reply(400, "request body must be JSON");
  }
  if (!doc.is_object() || !doc.contains("text") || !doc["text"].is_string()) {
    return error_reply(400, "request needs a string field 'text'");
  }
  std::optional<long long> k;
  if (doc.contains("k") && !doc["k"].is_null()) {
    if (!doc["k"].is_number_integer()) return error_reply(400, "'k' must be an integer");
    k = doc["k"].get<long long>();
  }
  return handle_query(doc["text"].get<std::string>(), k);
}

Response SearchService::handle_query(std::string_view query_text, std::optional<long long> k) const {
  if (text::trim(query_text).empty()) return error_reply(400, "query text is empty");
  const long long want = k.value_or(static_cast<long long>(config_.default_k));
  if (want < 1 || want > static_cast<long long>(kMaxK)) {
    return error_reply(400, "k must lie in [1, " + std::to_string(kMaxK) + "]");
  }
  const auto snap = current();
  if (!snap) return error_reply(503, "no snapshot loaded");

  std::vector<RankedHit> hits;
  try {
    const EmbeddingVector q = project(snap->model.head, embed_text(*snap->provider, query_text));
    hits = search(snap->index, q, static_cast<std::size_t>(want));
  } catch (const InputError& e) {
    return error_reply(400, e.what());
  } catch (const DomainError& e) {
    return error_reply(400, e.what());
  }

  ordered_json out;
  out["query"] = query_text;
  out["k"] = want;
  ordered_json list = ordered_json::array();
  for (const auto& h : hits) {
    const CohortRecord* r = snap->catalog.find(h.accession);
    ordered_json hit;
    hit["rank"] = h.rank;
    hit["accession"] = h.accession;
    hit["title"] = r ? r->title : "";
    hit["similarity"] = h.similarity;
    hit["metadata"] = r ? dimension_values(*r) : ordered_json::object();
    hit["source_url"] = source_url(h.accession);
    list.push_back(std::move(hit));
  }
  out["hits"] = std::move(list);
  return reply(200, out);
}

Response SearchService::handle_get_cohort(std::string_view accession) const {
  const auto snap = current();
  if (!snap) return error_reply(503, "no snapshot loaded");
  const CohortRecord* r = snap->catalog.find(accession);
  if (r == nullptr) return error_reply(404, "cohort '" + std::string(accession) + "' not found");

  ordered_json out;
  out["accession"] = r->accession;
  out["title"] = r->title;
  out["summary"] = r->summary;
  out["pmid"] = r->pmid ? ordered_json(*r->pmid) : ordered_json(nullptr);
  out["publication_title"] = r->publication_title ? ordered_json(*r->publication_title) : ordered_json(nullptr);
  out["disease"] = r->disease;
  out["source_url"] = source_url(r->accession);
  ordered_json dims = ordered_json::object();
  bool any_unmapped = false;
  for (Dimension d : kAllDimensions) {
    const auto& unmapped = r->unmapped[index_of(d)];
    ordered_json dim;
    dim["values"] = r->at(d);
    ordered_json raw = ordered_json::array();
    for (const auto& v : r->raw[index_of(d)]) {
      const bool flagged = std::find(unmapped.begin(), unmapped.end(), v) != unmapped.end();
      any_unmapped = any_unmapped || flagged;
      raw.push_back({{"value", v}, {"unmapped", flagged}});
    }
    dim["raw"] = std::move(raw);
    dim["unmapped"] = unmapped;
    dims[std::string(dimension_name(d))] = std::move(dim);
  }
  out["dimensions"] = std::move(dims);
  out["has_unmapped"] = any_unmapped;
  return reply(200, out);
}

Response SearchService::handle_stats() const {
  const auto snap = current();
  ordered_json out;
  out["loaded"] = snap != nullptr;
  out["catalog_size"] = snap ? snap->catalog.size() : 0;
  out["index_size"] = snap ? snap->index.size() : 0;
  out["index_dimension"] = snap ? snap->index.dimension() : 0;
  ordered_json model;
  model["provider_id"] = snap ? snap->model.provider_id : "";
  model["d_in"] = snap ? snap->model.head.d_in() : 0;
  model["d_out"] = snap ? snap->model.head.d_out() : 0;
  model["variant"] = snap ? loss_variant_name(snap->model.loss.variant) : "";
  model["scale"] = snap ? snap->model.loss.scale : 0.0;
  out["model"] = std::move(model);
  ordered_json vocab = ordered_json::object();
  for (Dimension d : kAllDimensions) vocab[std::string(dimension_name(d))] = snap ? snap->vocabulary.at(d).size() : 0;
  out["vocabulary"] = std::move(vocab);
  out["augmentation"] = ordered_json::parse(write_stats(snap ? snap->stats : AugmentationStats{}));
  return reply(200, out);
}

Response SearchService::handle_health() const {
  ordered_json out;
  out["status"] = "ok";
  out["snapshot_loaded"] = current() != nullptr;
  return reply(200, out);
}

Response SearchService::handle_reload(std::string_view body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error&) {
    return error_reply(400, "request body must be JSON");
  }
  if (!doc.is_object() || !doc.contains("snapshot_dir") || !doc["snapshot_dir"].is_string()) {
    return error_reply(400, "request needs a string field 'snapshot_dir'");
  }
  const std::string dir = doc["snapshot_dir"].get<std::string>();
  std::shared_ptr<const Snapshot> fresh;
  try {
    fresh = Snapshot::load(dir);
  } catch (const Error& e) {
    return error_reply(400, std::string("reload failed: ") + e.what());
  }
  install(std::move(fresh));
  ordered_json out;
  out["status"] = "reloaded";
  out["snapshot_dir"] = dir;
  return reply(200, out);
}

}  // namespace neuroembed
