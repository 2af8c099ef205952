#include "neuroembed/qagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "neuroembed/error.hpp"
#include "neuroembed/rng.hpp"
#include "neuroembed/text.hpp"

namespace neuroembed {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

/// Per-dimension canonical -> sorted record positions.
using InvertedIndex = PerDimension<std::unordered_map<std::string, std::vector<std::size_t>>>;

InvertedIndex invert(const CohortCatalog& catalog) {
  InvertedIndex inv;
  for (std::size_t r = 0; r < catalog.records.size(); ++r) {
    for (Dimension d : kAllDimensions) {
      for (const auto& v : catalog.records[r].at(d)) {
        auto& slots = inv[index_of(d)][v];
        if (slots.empty() || slots.back() != r) slots.push_back(r);
      }
    }
  }
  return inv;
}

std::vector<std::size_t> intersect(const QueryCombo& combo, const TermSet& vals, const InvertedIndex& inv) {
  std::vector<std::size_t> acc;
  bool first = true;
  for (const auto& [d, term] : combo.terms) {
    const auto& canon_map = vals[index_of(d)];
    auto cit = canon_map.find(term);
    const std::string& canonical = cit == canon_map.end() ? term : cit->second;
    const auto& dim = inv[index_of(d)];
    auto it = dim.find(canonical);
    if (it == dim.end()) return {};
    if (first) {
      acc = it->second;
      first = false;
    } else {
      std::vector<std::size_t> next;
      std::set_intersection(acc.begin(), acc.end(), it->second.begin(), it->second.end(), std::back_inserter(next));
      acc = std::move(next);
    }
    if (acc.empty()) return {};
  }
  return acc;
}

/// Sorted distinct draws from [0, total), all of them when total <= budget.
std::vector<std::uint64_t> sample_indices(std::uint64_t total, std::size_t budget, Rng& rng) {
  std::vector<std::uint64_t> out;
  if (total <= budget) {
    out.resize(static_cast<std::size_t>(total));
    std::iota(out.begin(), out.end(), std::uint64_t{0});
    return out;
  }
  if (total <= 2 * static_cast<std::uint64_t>(budget)) {
    std::vector<std::uint64_t> all(static_cast<std::size_t>(total));
    std::iota(all.begin(), all.end(), std::uint64_t{0});
    for (std::size_t i = 0; i < budget; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(all.size() - i));
      std::swap(all[i], all[j]);
    }
    out.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(budget));
  } else {
    std::unordered_set<std::uint64_t> seen;
    while (out.size() < budget) {
      std::uint64_t x = rng.uniform_index(total);
      if (seen.insert(x).second) out.push_back(x);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<Dimension>> dimension_subsets(std::size_t k) {
  std::vector<std::vector<Dimension>> out;
  for (unsigned mask = 1; mask < (1u << kDimensionCount); ++mask) {
    std::vector<Dimension> subset;
    for (Dimension d : kAllDimensions) {
      if (mask & (1u << index_of(d))) subset.push_back(d);
    }
    if (subset.size() == k) out.push_back(std::move(subset));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](Dimension x, Dimension y) { return index_of(x) < index_of(y); });
  });
  return out;
}

bool ends_with_word(std::string_view s, std::string_view word) {
  if (s == word) return true;
  return s.size() > word.size() && s.substr(s.size() - word.size()) == word && s[s.size() - word.size() - 1] == ' ';
}

ordered_json combo_json(const QueryCombo& combo) {
  ordered_json out = ordered_json::object();
  for (const auto& [d, term] : combo.terms) out[std::string(dimension_name(d))] = term;
  return out;
}

}  // namespace

std::string_view split_name(Split s) { return s == Split::Train ? "train" : "test"; }

const std::string* QueryCombo::term(Dimension d) const {
  for (const auto& [dim, t] : terms) {
    if (dim == d) return &t;
  }
  return nullptr;
}

RenderRules RenderRules::defaults() {
  RenderRules r;
  r.templates = {"Give me papers about", "Can you show findings about", "Explore data related to",
                 "Show me studies on",   "What research exists on",     "I'd like to know about"};
  r.test_only_template = 6;
  r.subject = "cohorts";
  r.order = {Dimension::Po, Dimension::Ti, Dimension::As, Dimension::Ph};
  r.connectives[index_of(Dimension::Po)] = {"within", "population", false};
  r.connectives[index_of(Dimension::Ti)] = {"from", "", false};
  r.connectives[index_of(Dimension::As)] = {"from", "assay", true};
  r.connectives[index_of(Dimension::Ph)] = {"with", "observations", true};
  return r;
}

namespace {

// Largest-remainder apportionment: the total is round(ratio * sum) and each
// dimension gets the floor or ceiling of its own share.
PerDimension<std::size_t> train_targets(const PerDimension<std::size_t>& sizes, double ratio) {
  PerDimension<std::size_t> out{};
  std::size_t sum = 0, assigned = 0;
  std::vector<std::pair<double, std::size_t>> remainders;
  for (std::size_t i = 0; i < kDimensionCount; ++i) {
    if (sizes[i] < 2) continue;
    const double share = ratio * static_cast<double>(sizes[i]);
    out[i] = static_cast<std::size_t>(std::floor(share));
    sum += sizes[i];
    assigned += out[i];
    remainders.emplace_back(share - std::floor(share), i);
  }
  const auto total = static_cast<std::size_t>(std::lround(ratio * static_cast<double>(sum)));
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t j = 0; assigned < total && j < remainders.size(); ++j, ++assigned) ++out[remainders[j].second];
  return out;
}

}  // namespace

SplitVocabulary stratified_split(const AugmentedVocabulary& vocab, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw InputError("split ratio must lie in (0, 1)");
  SplitVocabulary split;
  split.seed = seed;
  std::unordered_map<std::string, Split> placed;
  PerDimension<std::size_t> sizes{};
  for (Dimension d : kAllDimensions) sizes[index_of(d)] = vocab.terms(d).size();
  const PerDimension<std::size_t> targets = train_targets(sizes, ratio);

  for (Dimension d : kAllDimensions) {
    std::unordered_map<std::string, std::string> canonical_of;
    for (const auto& [canonical, entry] : vocab.at(d)) {
      canonical_of.emplace(canonical, canonical);
      for (const auto& s : entry.synonyms) canonical_of.emplace(s, canonical);
    }
    std::vector<std::string> terms = vocab.terms(d);
    auto& train = split.train[index_of(d)];
    auto& test = split.test[index_of(d)];
    auto put = [&](const std::string& t, Split side) {
      (side == Split::Train ? train : test).emplace(t, canonical_of.at(t));
      placed.emplace(t, side);
    };

    if (terms.size() < 2) {
      if (!terms.empty()) {
        split.warnings.push_back("dimension " + std::string(dimension_name(d)) +
                                 " has fewer than 2 terms; all assigned to train");
      }
      for (const auto& t : terms) {
        auto it = placed.find(t);
        put(t, it == placed.end() ? Split::Train : it->second);
      }
      continue;
    }

    const std::size_t target = targets[index_of(d)];
    std::size_t forced_train = 0;
    std::vector<std::string> free;
    for (const auto& t : terms) {
      auto it = placed.find(t);
      if (it == placed.end()) {
        free.push_back(t);
      } else {
        if (it->second == Split::Train) ++forced_train;
        put(t, it->second);
      }
    }
    Rng rng(Rng::derive_seed(seed, index_of(d)));
    rng.shuffle(std::span<std::string>(free));
    const std::size_t need = target > forced_train ? std::min(target - forced_train, free.size()) : 0;
    for (std::size_t i = 0; i < free.size(); ++i) put(free[i], i < need ? Split::Train : Split::Test);
  }
  return split;
}

std::vector<std::string> matching_cohorts(const QueryCombo& combo, const TermSet& vals, const CohortCatalog& catalog) {
  std::vector<std::string> out;
  for (std::size_t r : intersect(combo, vals, invert(catalog))) out.push_back(catalog.records[r].accession);
  return out;
}

std::vector<CandidatePair> enumerate_pairs(const TermSet& vals, const CohortCatalog& catalog, std::uint64_t seed,
                                           std::size_t budget) {
  std::vector<CandidatePair> out;
  if (catalog.empty()) return out;
  const InvertedIndex inv = invert(catalog);
  PerDimension<std::vector<std::string>> lists;
  for (Dimension d : kAllDimensions) {
    for (const auto& [term, canonical] : vals[index_of(d)]) lists[index_of(d)].push_back(term);
  }

  for (std::size_t k = 1; k <= kDimensionCount; ++k) {
    std::vector<std::vector<Dimension>> subsets;
    std::vector<std::uint64_t> offsets;  // start of each subset's block
    std::uint64_t total = 0;
    for (auto& subset : dimension_subsets(k)) {
      std::uint64_t n = 1;
      for (Dimension d : subset) n *= lists[index_of(d)].size();
      if (n == 0) continue;
      subsets.push_back(std::move(subset));
      offsets.push_back(total);
      total += n;
    }
    if (total == 0) continue;

    Rng sampler(Rng::derive_seed(seed, 10 + k));
    Rng chooser(Rng::derive_seed(seed, 20 + k));
    for (std::uint64_t idx : sample_indices(total, budget, sampler)) {
      const auto block = static_cast<std::size_t>(std::upper_bound(offsets.begin(), offsets.end(), idx) -
                                                  offsets.begin() - 1);
      std::uint64_t local = idx - offsets[block];
      const auto& subset = subsets[block];
      QueryCombo combo;
      combo.terms.resize(subset.size());
      for (std::size_t i = subset.size(); i-- > 0;) {
        const auto& list = lists[index_of(subset[i])];
        combo.terms[i] = {subset[i], list[static_cast<std::size_t>(local % list.size())]};
        local /= list.size();
      }
      std::vector<std::size_t> hits = intersect(combo, vals, inv);
      if (hits.empty()) continue;
      CandidatePair pair;
      pair.combo = std::move(combo);
      for (std::size_t r : hits) pair.all_matching.push_back(catalog.records[r].accession);
      pair.accession = pair.all_matching[static_cast<std::size_t>(chooser.uniform_index(hits.size()))];
      out.push_back(std::move(pair));
    }
  }
  return out;
}

std::string render_nlq(const QueryCombo& combo, int template_id, const RenderRules& rules) {
  if (template_id < 1 || template_id > rules.template_count()) {
    throw InputError("template id " + std::to_string(template_id) + " out of range");
  }
  if (combo.terms.empty()) throw InputError("empty query combo");

  std::vector<Dimension> order;
  for (Dimension d : rules.order) {
    if (combo.term(d) != nullptr && std::find(order.begin(), order.end(), d) == order.end()) order.push_back(d);
  }
  for (const auto& [d, term] : combo.terms) {
    if (std::find(order.begin(), order.end(), d) == order.end()) order.push_back(d);
  }

  std::vector<std::string> parts;
  auto add = [&](std::string_view s) {
    if (!text::trim(s).empty()) parts.emplace_back(text::trim(s));
  };
  add(rules.templates[static_cast<std::size_t>(template_id - 1)]);
  add(rules.subject);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Connective& c = rules.connectives[index_of(order[i])];
    const std::string& term = *combo.term(order[i]);
    add(c.prefix);
    add(term);
    const bool last = i + 1 == order.size();
    if (!c.suffix.empty() && (!c.suffix_when_last || last) && !ends_with_word(term, c.suffix)) add(c.suffix);
  }
  return text::join(parts, " ");
}

bool uses_only(const QueryCombo& combo, const TermSet& vals) {
  for (const auto& [d, term] : combo.terms) {
    if (vals[index_of(d)].count(term) == 0) return false;
  }
  return !combo.terms.empty();
}

QADataset generate_qad(const AugmentedVocabulary& vocab, const CohortCatalog& catalog, const QAConfig& config) {
  QADataset out;
  out.split = stratified_split(vocab, config.ratio, Rng::derive_seed(config.seed, 1));
  if (catalog.empty()) return out;
  const RenderRules& rules = config.rules;

  std::vector<int> train_templates;
  std::vector<int> test_templates;
  for (int t = 1; t <= rules.template_count(); ++t) {
    if (t != rules.test_only_template) train_templates.push_back(t);
    test_templates.push_back(t);
  }
  if (train_templates.empty()) throw InputError("no template is available for training");

  std::vector<QAPair> final_qa;
  auto realize = [&](std::vector<CandidatePair> candidates, const std::vector<int>& templates, Split origin,
                     std::uint64_t stream) {
    Rng rng(Rng::derive_seed(config.seed, stream));
    for (auto& c : candidates) {
      QAPair p;
      p.template_id = templates[static_cast<std::size_t>(rng.uniform_index(templates.size()))];
      p.nlq = render_nlq(c.combo, p.template_id, rules);
      p.accession = std::move(c.accession);
      p.all_matching = std::move(c.all_matching);
      p.combo = std::move(c.combo);
      p.split = origin;
      final_qa.push_back(std::move(p));
    }
    return candidates.size();
  };
  out.train_candidates =
      realize(enumerate_pairs(out.split.train, catalog, Rng::derive_seed(config.seed, 2), config.budget),
              train_templates, Split::Train, 4);
  out.test_candidates =
      realize(enumerate_pairs(out.split.test, catalog, Rng::derive_seed(config.seed, 3), config.budget),
              test_templates, Split::Test, 5);

  for (auto& p : final_qa) {
    if (uses_only(p.combo, out.split.train) && p.template_id != rules.test_only_template) {
      p.split = Split::Train;
      out.train.push_back(std::move(p));
    } else if (uses_only(p.combo, out.split.test)) {
      p.split = Split::Test;
      out.test.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<QAPair> subsample_train(const std::vector<QAPair>& train, std::size_t test_size, std::size_t factor,
                                    std::uint64_t seed) {
  if (factor < 1) throw InputError("subsample factor must be at least 1");
  const std::size_t target = std::min(train.size(), factor * test_size);
  if (target == train.size()) return train;
  std::vector<std::size_t> idx(train.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < target; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(target);
  std::sort(idx.begin(), idx.end());
  std::vector<QAPair> out;
  out.reserve(target);
  for (std::size_t i : idx) out.push_back(train[i]);
  return out;
}

std::string write_qa(const std::vector<QAPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    ordered_json obj;
    obj["nlq"] = p.nlq;
    obj["accession"] = p.accession;
    obj["all_matching"] = p.all_matching;
    obj["terms"] = combo_json(p.combo);
    obj["n_terms"] = p.combo.k();
    obj["template_id"] = p.template_id;
    obj["split"] = split_name(p.split);
    out += obj.dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<QAPair> parse_qa(std::string_view jsonl) {
  std::vector<QAPair> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < jsonl.size()) {
    std::size_t nl = jsonl.find('\n', start);
    std::string_view line = jsonl.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? jsonl.size() : nl + 1;
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      json obj = json::parse(line);
      QAPair p;
      p.nlq = obj.at("nlq").get<std::string>();
      p.accession = obj.at("accession").get<std::string>();
      p.all_matching = obj.at("all_matching").get<std::vector<std::string>>();
      for (Dimension d : kAllDimensions) {
        auto it = obj.at("terms").find(std::string(dimension_name(d)));
        if (it != obj.at("terms").end()) p.combo.terms.emplace_back(d, it->get<std::string>());
      }
      p.template_id = obj.at("template_id").get<int>();
      const std::string split = obj.at("split").get<std::string>();
      if (split != "train" && split != "test") throw ParseError("split must be train or test", line_no);
      p.split = split == "train" ? Split::Train : Split::Test;
      if (p.combo.terms.empty() || p.all_matching.empty()) throw ParseError("pair without terms or answers", line_no);
      if (obj.contains("n_terms") && obj["n_terms"].get<std::size_t>() != p.combo.k()) {
        throw ParseError("n_terms disagrees with terms", line_no);
      }
      out.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw ParseError(std::string("invalid QA pair: ") + e.what(), line_no);
    }
  }
  return out;
}

}  // namespace neuroembed
