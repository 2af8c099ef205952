// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "../demo_fixture.hpp"
#include "../gradient_check.hpp"
#include "../mini_fixture.hpp"
#include "../oracles.hpp"
#include "../qa_oracle.hpp"
#include "../support.hpp"
#include "neuroembed/augment.hpp"
#include "neuroembed/eval.hpp"
#include "neuroembed/fileio.hpp"
#include "neuroembed/index.hpp"
#include "neuroembed/loss.hpp"
#include "neuroembed/ontology.hpp"
#include "neuroembed/qagen.hpp"
#include "neuroembed/rng.hpp"
#include "neuroembed/serialize.hpp"
#include "pipeline.hpp"

using namespace neuroembed;
using testing_support::TempDir;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* pattern, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c, d);
  return buf;
}

Verdict metrics_oracle() {
  Verdict v;
  Rng rng(101);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::string> ranking;
    const std::size_t n = 1 + rng.uniform_index(200);
    for (std::size_t i = 0; i < n; ++i) ranking.push_back("GSE" + std::to_string(i));
    rng.shuffle(std::span<std::string>(ranking));
    const std::size_t r = 1 + rng.uniform_index(std::min<std::size_t>(n, 40));
    RelevantSet relevant;
    while (relevant.size() < r) relevant.insert(ranking[rng.uniform_index(n)]);
    worst = std::max({worst, std::abs(retrieval_precision(ranking, relevant) - oracle::r_precision(ranking, relevant)),
                      std::abs(mean_percentile_rank(ranking, relevant) - oracle::mpr(ranking, relevant))});
  }
  v.require(worst <= 1e-12, "metric mismatch");
  v.detail = fmt("1000 instances, max abs diff %.3g", worst) + (v.pass ? "" : "; " + v.detail);
  return v;
}

std::u32string random_u32(Rng& rng) {
  static const std::u32string alphabet = U"abcdeé中ß";
  std::u32string s(rng.uniform_index(31), U'a');
  for (auto& c : s) c = alphabet[rng.uniform_index(rng.uniform01() < 0.5 ? 3 : alphabet.size())];
  return s;
}

Verdict levenshtein_oracle() {
  Verdict v;
  Rng rng(202);
  std::vector<std::u32string> xs, ys;
  std::size_t mismatches = 0, asymmetric = 0, triangle = 0;
  for (int i = 0; i < 10000; ++i) {
    xs.push_back(random_u32(rng));
    ys.push_back(random_u32(rng));
    const std::size_t d = levenshtein(xs.back(), ys.back());
    mismatches += d != oracle::edit_distance(xs.back(), ys.back());
    asymmetric += d != levenshtein(ys.back(), xs.back());
  }
  for (int i = 0; i + 1 < 10000; ++i) {
    const auto &a = xs[i], &b = ys[i], &c = xs[i + 1];
    const std::size_t ab = levenshtein(a, b), bc = levenshtein(b, c), ac = levenshtein(a, c);
    triangle += ac > ab + bc || ab > ac + bc || bc > ab + ac;
  }
  v.require(mismatches == 0 && asymmetric == 0 && triangle == 0, "property violated");
  v.detail = fmt("10000 pairs, %.0f oracle mismatches, %.0f asymmetric, %.0f triangle violations", mismatches,
                 asymmetric, triangle);
  return v;
}

Verdict gradient_check() {
  Verdict v;
  Rng rng(303);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 2 + rng.uniform_index(6);
    const std::size_t p = 2 + rng.uniform_index(7);
    auto [head, batch] = oracle::random_problem(rng, d, p, trial % 3 == 0);
    LossConfig cfg;
    cfg.variant = trial % 2 ? LossVariant::Hinge : LossVariant::InfoNce;
    worst = std::max(worst, oracle::check_gradient(head, batch, cfg, 1e-5).max_rel_error);
  }
  v.require(worst < 1e-4, "relative error too large");
  v.detail = fmt("100 trials, max relative error %.3g", worst);
  return v;
}

Verdict closed_form_losses() {
  Verdict v;
  double worst = 0;
  for (Eigen::Index p : {2, 4, 8}) {
    TrainingBatch uniform{Eigen::MatrixXd::Ones(6, p), Eigen::MatrixXd::Ones(6, p)};
    worst = std::max(worst, std::abs(infonce_loss(uniform, LossConfig{}) - std::log(static_cast<double>(p))));
  }
  TrainingBatch separable{Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2)};
  const double sep = infonce_loss(separable, LossConfig{});
  v.require(worst <= 1e-9, "uniform batch off ln P");
  v.require(sep < 1e-8, "separable loss too large");
  v.detail = fmt("max |loss - ln P| %.3g, separable loss %.3g", worst, sep);
  return v;
}

Verdict qa_integrity() {
  Verdict v;
  const auto& a = demo::augmented();
  const auto& catalog = a.result.catalog;
  std::size_t with_synonyms = 0, vocab_terms = 0;
  for (Dimension d : kAllDimensions) {
    for (const auto& [canon, entry] : a.result.vocabulary.at(d)) {
      ++vocab_terms;
      with_synonyms += !entry.synonyms.empty();
    }
  }
  v.require(catalog.size() >= 200, "fewer than 200 cohorts");
  v.require(with_synonyms >= 120, "fewer than 120 terms with synonyms");

  TempDir dir("accept_qagen");
  write_file_atomic(dir / "catalog.jsonl", write_catalog(catalog));
  write_file_atomic(dir / "vocab.json", write_vocabulary(a.result.vocabulary));
  pipeline::QagenOptions o;
  o.catalog = dir / "catalog.jsonl";
  o.vocab = dir / "vocab.json";
  o.seed = 7;
  o.train_out = dir / "train.jsonl";
  o.test_out = dir / "test.jsonl";
  QADataset data = pipeline::run_qagen(o);
  const auto train = parse_qa(read_file(o.train_out));
  const auto test = parse_qa(read_file(o.test_out));
  v.require(train == data.train && test == data.test, "written pairs differ from returned pairs");

  QAConfig cfg;
  cfg.seed = 7;
  const std::size_t available = generate_qad(a.result.vocabulary, catalog, cfg).train.size();
  v.require(train.size() == std::min(available, 4 * test.size()), "train size is not min(available, 4 x test)");

  std::size_t shared = 0;
  for (const auto& side : data.split.train) {
    for (const auto& [term, canon] : side) {
      for (const auto& other : data.split.test) shared += other.count(term);
    }
  }
  v.require(shared == 0, "train and test term sets overlap");

  std::size_t bad = 0, test_template_in_train = 0;
  for (const auto* set : {&train, &test}) {
    for (const auto& p : *set) {
      const bool is_train = p.split == Split::Train;
      const TermSet& own = is_train ? data.split.train : data.split.test;
      const TermSet& other = is_train ? data.split.test : data.split.train;
      bool ok = uses_only(p.combo, own) && p.all_matching == oracle::matching(p.combo, own, catalog) &&
                std::find(p.all_matching.begin(), p.all_matching.end(), p.accession) != p.all_matching.end();
      std::vector<Dimension> dims;
      for (const auto& [d, t] : p.combo.terms) dims.push_back(d);
      auto parsed = oracle::back_parse(p.nlq, dims, cfg.rules);
      if (parsed) std::sort(parsed->begin(), parsed->end());
      auto expected_terms = p.combo.terms;
      std::sort(expected_terms.begin(), expected_terms.end());
      ok = ok && parsed && *parsed == expected_terms;
      if (parsed) {
        for (const auto& [d, term] : *parsed) {
          for (const auto& side : other) ok = ok && side.count(term) == 0;
        }
      }
      bad += !ok;
      test_template_in_train += is_train && p.template_id == cfg.rules.test_only_template;
    }
  }
  v.require(bad == 0, "pairs fail re-verification");
  v.require(test_template_in_train == 0, "test-only template used in train");
  std::ostringstream s;
  s << catalog.size() << " cohorts, " << with_synonyms << "/" << vocab_terms << " terms with synonyms, train "
    << train.size() << " (available " << available << "), test " << test.size() << ", " << bad
    << " unverified pairs, " << shared << " shared terms, " << test_template_in_train << " test-template train pairs";
  v.detail = s.str() + (v.pass ? "" : "; " + v.detail);
  return v;
}

struct DemoRun {
  TempDir dir{"accept_demo"};
  pipeline::DemoResult result;
  double seconds = 0;
};

DemoRun& demo_run(int which) {
  static DemoRun runs[2];
  static bool done[2] = {false, false};
  if (!done[which]) {
    const auto t0 = std::chrono::steady_clock::now();
    pipeline::DemoOptions o;
    o.fixtures = testing_support::demo_dir();
    o.out = runs[which].dir.path();
    runs[which].result = pipeline::run_demo(o);
    runs[which].seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    done[which] = true;
  }
  return runs[which];
}

Verdict training_gain() {
  Verdict v;
  const auto& r = demo_run(0).result;
  const double dp = r.trained.overall.mean_precision - r.baseline.overall.mean_precision;
  const double dm = r.trained.overall.mean_mpr - r.baseline.overall.mean_mpr;
  const double ratio = r.curve.final_train_loss / r.curve.initial_train_loss;
  v.require(dp >= 0.20, "R-precision gain below 0.20");
  v.require(dm >= 0.15, "MPR gain below 0.15");
  v.require(ratio < 0.5, "final loss not below half of initial");
  v.detail = fmt("R-precision %.4f -> %.4f, MPR %.4f -> %.4f", r.baseline.overall.mean_precision,
                 r.trained.overall.mean_precision, r.baseline.overall.mean_mpr, r.trained.overall.mean_mpr) +
             fmt(", loss ratio %.3f", ratio) + (v.pass ? "" : "; " + v.detail);
  return v;
}

Verdict augmentation_report_fidelity() {
  Verdict v;
  auto result = augment_catalog(mini::catalog(), mini::registry());
  v.require(result.stats == mini::expected_stats(), "mini fixture counts differ");
  v.require(augmentation_report(result.stats) == augmentation_report(mini::expected_stats()), "report text differs");
  const std::string po = augmentation_report_row(Dimension::Po, DimensionStats{33, 5, 28, 100, 100, 0, 0, 100, 0, 105, 0});
  v.require(po == "Po\t33\t5\t28\t100\t100 (100.00)\t0 (0.00)\t0 (0.00)\t100 (100.00)\t0 (0.00)\t105",
            "Po row renders differently");
  std::string shown = po;
  for (auto& c : shown) c = c == '\t' ? ' ' : c;
  v.detail = "mini report exact, literal row: " + shown + (v.pass ? "" : "; " + v.detail);
  return v;
}

Verdict index_correctness() {
  Verdict v;
  Rng rng(808);
  const std::size_t d = 32;
  std::vector<std::pair<std::string, EmbeddingVector>> rows;
  auto random_vec = [&] {
    Eigen::VectorXd x(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.normal();
    return x;
  };
  for (std::size_t i = 0; i < 500; ++i) rows.emplace_back("GSE" + std::to_string((i * 389) % 500), random_vec());
  // a few exact duplicates to exercise the tie-break
  for (std::size_t i = 0; i < 5; ++i) rows[490 + i].second = rows[i].second;
  const VectorIndex index = build_index(rows);
  std::ostringstream out;
  save_index(index, out);
  std::istringstream in(out.str());
  const VectorIndex back = load_index(in);
  std::ostringstream again;
  save_index(back, again);
  v.require(back.matrix() == index.matrix() && back.ids() == index.ids() && again.str() == out.str(),
            "round trip changed bytes");
  std::size_t wrong = 0;
  for (int q = 0; q < 100; ++q) {
    Eigen::VectorXd query = q < 5 ? rows[static_cast<std::size_t>(q)].second : random_vec();
    const std::size_t k = 1 + rng.uniform_index(50);
    auto hits = search(index, query, k);
    auto expected = oracle::full_sort(index, query);
    bool ok = hits.size() == k && search(back, query, k) == hits;
    for (std::size_t r = 0; ok && r < k; ++r) {
      ok = hits[r].accession == expected[r].first && std::abs(hits[r].similarity - expected[r].second) < 1e-12;
    }
    wrong += !ok;
  }
  v.require(wrong == 0, "top-k differs from brute force");
  v.detail = fmt("100 queries over 500 vectors, %.0f mismatches, %.0f index bytes identical after reload", wrong,
                 static_cast<double>(out.str().size()));
  return v;
}

Verdict demo_determinism() {
  Verdict v;
  const fs::path a = demo_run(0).dir.path(), b = demo_run(1).dir.path();
  namespace f = pipeline::demo_files;
  std::size_t compared = 0;
  for (const std::string name : {f::kTrain, f::kTest, "model.json", f::kEvalReport, f::kEvalSummary, "index.bin",
                                 f::kBaselineModel, f::kBaselineReport, f::kCurve, "vocab.json", "catalog.jsonl"}) {
    const bool same = read_file(a / name) == read_file(b / name);
    v.require(same, name + " differs");
    ++compared;
  }
  v.detail = std::to_string(compared) + " output files byte-identical across two runs" + (v.pass ? "" : "; " + v.detail);
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0 means no limit
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "metric oracle equivalence", 5, metrics_oracle},
      {2, "levenshtein oracle and metric properties", 10, levenshtein_oracle},
      {3, "gradient vs finite differences", 30, gradient_check},
      {4, "closed-form loss values", 0, closed_form_losses},
      {5, "qa dataset integrity on the demo fixture", 20, qa_integrity},
      {6, "training improves retrieval", 120, training_gain},
      {7, "augmentation report fidelity", 5, augmentation_report_fidelity},
      {8, "index correctness and persistence", 10, index_correctness},
      {9, "end-to-end determinism", 0, demo_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.id == 6) seconds = demo_run(0).seconds;
    if (c.limit_seconds > 0 && seconds >= c.limit_seconds) {
      v.pass = false;
      v.detail += fmt("; took %.1fs, limit %.0fs", seconds, c.limit_seconds);
    }
    std::printf("%s criterion %d: %s (%s) [%.2fs]\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(),
                seconds);
    std::fflush(stdout);
    failures += !v.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
