#include "neuroembed/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include <json.hpp>

#include "neuroembed/error.hpp"

namespace neuroembed {
namespace {

std::unordered_map<std::string_view, std::size_t> positions(Ranking ranking) {
  std::unordered_map<std::string_view, std::size_t> pos;
  pos.reserve(ranking.size());
  for (std::size_t i = 0; i < ranking.size(); ++i) pos.emplace(ranking[i], i);
  return pos;
}

void check_relevant(const std::unordered_map<std::string_view, std::size_t>& pos, const RelevantSet& relevant) {
  if (relevant.empty()) throw IntegrityError("relevant set is empty");
  for (const auto& r : relevant) {
    if (pos.count(r) == 0) throw IntegrityError("relevant cohort '" + r + "' is missing from the ranking");
  }
}

double rank_to_percentile(std::size_t zero_based, std::size_t total) {
  if (total <= 1) return 1.0;
  return 1.0 - static_cast<double>(zero_based) / static_cast<double>(total - 1);
}

nlohmann::ordered_json group_json(const GroupSummary& g) {
  nlohmann::ordered_json out;
  out["count"] = g.count;
  out["mean_precision"] = g.mean_precision;
  out["mean_mpr"] = g.mean_mpr;
  out["precision_histogram"] = g.precision_hist;
  out["mpr_histogram"] = g.mpr_hist;
  return out;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

double retrieval_precision(Ranking ranking, const RelevantSet& relevant) {
  const auto pos = positions(ranking);
  check_relevant(pos, relevant);
  const std::size_t cutoff = relevant.size();
  std::size_t hits = 0;
  for (const auto& r : relevant) {
    if (pos.at(r) < cutoff) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(cutoff);
}

double percentile_rank(Ranking ranking, const std::string& accession) {
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    if (ranking[i] == accession) return rank_to_percentile(i, ranking.size());
  }
  throw IntegrityError("cohort '" + accession + "' is missing from the ranking");
}

double mean_percentile_rank(Ranking ranking, const RelevantSet& relevant) {
  const auto pos = positions(ranking);
  check_relevant(pos, relevant);
  std::vector<std::size_t> ranks;
  ranks.reserve(relevant.size());
  for (const auto& r : relevant) ranks.push_back(pos.at(r));
  std::sort(ranks.begin(), ranks.end());
  double sum = 0.0;
  for (std::size_t r : ranks) sum += rank_to_percentile(r, ranking.size());
  return sum / static_cast<double>(ranks.size());
}

std::size_t histogram_bin(double value) {
  const double scaled = std::floor(value * static_cast<double>(kHistogramBins) + 1e-9);
  if (scaled <= 0.0) return 0;
  return std::min(kHistogramBins - 1, static_cast<std::size_t>(scaled));
}

void EvalReport::summarize() {
  overall = GroupSummary{};
  by_terms = {};
  auto add = [](GroupSummary& g, const QueryEvaluation& q) {
    ++g.count;
    g.mean_precision += q.precision;
    g.mean_mpr += q.mpr;
    ++g.precision_hist[histogram_bin(q.precision)];
    ++g.mpr_hist[histogram_bin(q.mpr)];
  };
  for (const auto& q : queries) {
    add(overall, q);
    if (q.n_terms >= 1 && q.n_terms <= by_terms.size()) add(by_terms[q.n_terms - 1], q);
  }
  auto finish = [](GroupSummary& g) {
    if (g.count == 0) return;
    g.mean_precision /= static_cast<double>(g.count);
    g.mean_mpr /= static_cast<double>(g.count);
  };
  finish(overall);
  for (auto& g : by_terms) finish(g);
}

EvalReport evaluate(const ProjectionHead& head, const EmbeddingProvider& provider, const VectorIndex& index,
                    const std::vector<QAPair>& test_set) {
  if (test_set.empty()) throw InputError("cannot evaluate an empty test set");
  EvalReport report;
  report.queries.reserve(test_set.size());
  for (const auto& pair : test_set) {
    const EmbeddingVector q = project(head, embed_text(provider, pair.nlq));
    const std::vector<RankedHit> hits = search(index, q, index.size());
    std::vector<std::string> ranking;
    ranking.reserve(hits.size());
    for (const auto& h : hits) ranking.push_back(h.accession);
    const RelevantSet relevant(pair.all_matching.begin(), pair.all_matching.end());

    QueryEvaluation e;
    e.nlq = pair.nlq;
    e.relevant = pair.all_matching;
    e.precision = retrieval_precision(ranking, relevant);
    e.mpr = mean_percentile_rank(ranking, relevant);
    e.n_terms = pair.combo.k();
    e.top.assign(ranking.begin(), ranking.begin() + static_cast<std::ptrdiff_t>(std::min(relevant.size(), ranking.size())));
    report.queries.push_back(std::move(e));
  }
  report.summarize();
  return report;
}

std::string write_eval_report(const EvalReport& report) {
  nlohmann::ordered_json doc;
  doc["queries"] = report.overall.count;
  doc["mean_precision"] = report.overall.mean_precision;
  doc["mean_mpr"] = report.overall.mean_mpr;
  doc["histogram_bin_width"] = 1.0 / static_cast<double>(kHistogramBins);
  doc["overall"] = group_json(report.overall);
  nlohmann::ordered_json groups = nlohmann::ordered_json::object();
  for (std::size_t k = 0; k < report.by_terms.size(); ++k) groups[std::to_string(k + 1)] = group_json(report.by_terms[k]);
  doc["by_n_terms"] = std::move(groups);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& q : report.queries) {
    nlohmann::ordered_json row;
    row["nlq"] = q.nlq;
    row["n_terms"] = q.n_terms;
    row["precision"] = q.precision;
    row["mpr"] = q.mpr;
    row["relevant"] = q.relevant;
    row["top"] = q.top;
    rows.push_back(std::move(row));
  }
  doc["per_query"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string write_eval_summary(const EvalReport& report) {
  std::string out = "group\tcount\tmean_precision\tmean_mpr\n";
  out += "all\t" + std::to_string(report.overall.count) + "\t" + fixed(report.overall.mean_precision) + "\t" +
         fixed(report.overall.mean_mpr) + "\n";
  for (std::size_t k = 0; k < report.by_terms.size(); ++k) {
    const auto& g = report.by_terms[k];
    out += "n_terms=" + std::to_string(k + 1) + "\t" + std::to_string(g.count) + "\t" + fixed(g.mean_precision) +
           "\t" + fixed(g.mean_mpr) + "\n";
  }
  return out;
}

}  // namespace neuroembed
