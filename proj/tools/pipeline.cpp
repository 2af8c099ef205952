#include "pipeline.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "neuroembed/catalog.hpp"
#include "neuroembed/error.hpp"
#include "neuroembed/fileio.hpp"
#include "neuroembed/index.hpp"
#include "neuroembed/ontology.hpp"
#include "neuroembed/qagen.hpp"
#include "neuroembed/rng.hpp"
#include "neuroembed/serialize.hpp"
#include "neuroembed/service.hpp"

namespace neuroembed::pipeline {

namespace {

constexpr double kInitNoise = 1e-3;
constexpr std::uint64_t kSubsampleStream = 6;
constexpr std::uint64_t kValidationStream = 7;
constexpr std::uint64_t kInitStream = 8;

CohortCatalog load_catalog(const fs::path& path) {
  return parse_catalog_text(read_file(path));
}

std::vector<QAPair> load_qa(const fs::path& path) {
  return parse_qa(read_file(path));
}

std::unique_ptr<EmbeddingProvider> provider_for(const Model& model) {
  return make_provider(model.provider_id, model.head.d_in());
}

void write_index(const fs::path& path, const VectorIndex& index) {
  std::ostringstream out(std::ios::binary);
  save_index(index, out);
  write_file_atomic(path, out.str());
}

VectorIndex read_index(const fs::path& path) {
  std::istringstream in(read_file(path), std::ios::binary);
  return load_index(in);
}

VectorIndex embed_catalog(const CohortCatalog& catalog, const Model& model) {
  auto provider = provider_for(model);
  std::vector<std::pair<std::string, EmbeddingVector>> rows;
  rows.reserve(catalog.size());
  for (const auto& r : catalog.records) {
    rows.emplace_back(r.accession, project(model.head, embed_text(*provider, cohort_text(r))));
  }
  return build_index(rows);
}

}  // namespace

void require_inputs(std::initializer_list<const fs::path*> paths) {
  for (const fs::path* p : paths) {
    if (p->empty()) throw InputError("a required path was not given");
    std::error_code ec;
    if (!fs::exists(*p, ec)) throw IoError("no such file or directory: " + p->string());
  }
}

fs::path default_fixture_dir() {
#ifdef NEUROEMBED_DEMO_DIR
  return fs::path(NEUROEMBED_DEMO_DIR);
#else
  return fs::path("data/demo");
#endif
}

OntologyRegistry load_registry(const fs::path& dir) {
  require_inputs({&dir});
  OntologyRegistry registry;
  const std::pair<const char*, OntologyId> owl[] = {
      {"efo.owl", OntologyId::EFO}, {"uberon.owl", OntologyId::UBERON}, {"ncbitaxon.owl", OntologyId::NCBI_TAXON}};
  for (const auto& [name, id] : owl) {
    fs::path p = dir / name;
    if (fs::exists(p)) registry.add_table(parse_owl_synonyms(read_file(p), id));
  }
  if (fs::path p = dir / "mesh.xml"; fs::exists(p)) registry.add_table(parse_mesh_concepts(read_file(p)));
  if (fs::path p = dir / "umls.tsv"; fs::exists(p)) {
    std::ifstream in(p);
    if (!in) throw IoError("cannot open " + p.string());
    registry.add_table(load_umls_dict(in));
  }
  return registry;
}

std::size_t run_ingest(const IngestOptions& o) {
  require_inputs({&o.catalog, &o.terms});
  CohortCatalog catalog = load_catalog(o.catalog);
  auto sets = parse_disease_terms(read_file(o.terms));
  CohortCatalog kept = filter_disease(catalog, sets);
  write_file_atomic(o.out, write_catalog(kept));
  return kept.size();
}

AugmentationStats run_augment(const AugmentOptions& o) {
  require_inputs({&o.catalog, &o.ontologies});
  OntologyRegistry registry = load_registry(o.ontologies);
  AugmentResult result = augment_catalog(load_catalog(o.catalog), registry, o.threshold);
  write_file_atomic(o.vocab, write_vocabulary(result.vocabulary));
  if (!o.catalog_out.empty()) write_file_atomic(o.catalog_out, write_catalog(result.catalog));
  if (!o.report.empty()) write_file_atomic(o.report, augmentation_report(result.stats));
  if (!o.stats.empty()) write_file_atomic(o.stats, write_stats(result.stats));
  return result.stats;
}

QADataset run_qagen(const QagenOptions& o) {
  require_inputs({&o.catalog, &o.vocab});
  CohortCatalog catalog = load_catalog(o.catalog);
  AugmentedVocabulary vocab = parse_vocabulary(read_file(o.vocab));
  QAConfig config;
  config.ratio = o.ratio;
  config.seed = o.seed;
  config.budget = o.budget;
  QADataset data = generate_qad(vocab, catalog, config);
  data.train = subsample_train(data.train, data.test.size(), o.factor, Rng::derive_seed(o.seed, kSubsampleStream));
  write_file_atomic(o.train_out, write_qa(data.train));
  write_file_atomic(o.test_out, write_qa(data.test));
  return data;
}

LossCurve run_train(const TrainOptions& o) {
  require_inputs({&o.train, &o.catalog});
  CohortCatalog catalog = load_catalog(o.catalog);
  std::vector<TextPair> pairs = make_text_pairs(load_qa(o.train), catalog);

  std::vector<TextPair> validation;
  if (o.val_fraction > 0.0 && pairs.size() >= 20) {
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(Rng::derive_seed(o.config.seed, kValidationStream));
    rng.shuffle(std::span<std::size_t>(order));
    auto n_val = static_cast<std::size_t>(std::lround(o.val_fraction * static_cast<double>(pairs.size())));
    std::vector<bool> held(pairs.size(), false);
    for (std::size_t i = 0; i < n_val; ++i) held[order[i]] = true;
    std::vector<TextPair> kept;
    for (std::size_t i = 0; i < pairs.size(); ++i) (held[i] ? validation : kept).push_back(std::move(pairs[i]));
    pairs = std::move(kept);
  }

  HashedTokenProvider provider(o.dimension);
  ProjectionHead init =
      ProjectionHead::identity_with_noise(o.dimension, kInitNoise, Rng::derive_seed(o.config.seed, kInitStream));
  Model model{provider.provider_id(), init, o.loss};
  LossCurve curve;
  if (!o.baseline_only) {
    TrainResult result = train(init, pairs, provider, o.config, o.loss, validation);
    model.head = std::move(result.head);
    curve = std::move(result.curve);
  }
  write_file_atomic(o.model, write_model(model));
  if (!o.curve.empty()) write_file_atomic(o.curve, write_loss_curve(curve));
  return curve;
}

std::size_t run_index(const IndexOptions& o) {
  require_inputs({&o.catalog, &o.model});
  Model model = parse_model(read_file(o.model));
  VectorIndex index = embed_catalog(load_catalog(o.catalog), model);
  write_index(o.index, index);
  return index.size();
}

EvalReport run_eval(const EvalOptions& o) {
  require_inputs({&o.model, &o.index, &o.test});
  Model model = parse_model(read_file(o.model));
  auto provider = provider_for(model);
  VectorIndex index = read_index(o.index);
  EvalReport report = evaluate(model.head, *provider, index, load_qa(o.test));
  write_file_atomic(o.report, write_eval_report(report));
  if (!o.summary.empty()) write_file_atomic(o.summary, write_eval_summary(report));
  return report;
}

DemoResult run_demo(const DemoOptions& o) {
  const fs::path& fx = o.fixtures;
  const fs::path raw = fx / "catalog.jsonl";
  const fs::path terms = fx / "disease_terms.json";
  require_inputs({&fx, &raw, &terms});
  fs::create_directories(o.out);
  namespace f = demo_files;
  const fs::path out = o.out;
  DemoResult result;

  run_ingest({raw, terms, out / f::kFiltered});

  AugmentOptions aug;
  aug.catalog = out / f::kFiltered;
  aug.ontologies = fx;
  aug.vocab = out / std::string(snapshot_files::kVocabulary);
  aug.catalog_out = out / std::string(snapshot_files::kCatalog);
  aug.report = out / f::kReport;
  aug.stats = out / std::string(snapshot_files::kStats);
  result.stats = run_augment(aug);

  QagenOptions qa;
  qa.catalog = aug.catalog_out;
  qa.vocab = aug.vocab;
  qa.seed = o.seed;
  qa.budget = o.budget;
  qa.train_out = out / f::kTrain;
  qa.test_out = out / f::kTest;
  QADataset data = run_qagen(qa);
  result.train_pairs = data.train.size();
  result.test_pairs = data.test.size();

  TrainOptions tr = o.train;
  tr.train = qa.train_out;
  tr.catalog = aug.catalog_out;
  tr.config.seed = o.seed;

  tr.baseline_only = true;
  tr.model = out / f::kBaselineModel;
  tr.curve.clear();
  run_train(tr);
  run_index({aug.catalog_out, tr.model, out / f::kBaselineIndex});
  result.baseline =
      run_eval({tr.model, out / f::kBaselineIndex, qa.test_out, out / f::kBaselineReport, out / f::kBaselineSummary});

  tr.baseline_only = false;
  tr.model = out / std::string(snapshot_files::kModel);
  tr.curve = out / f::kCurve;
  result.curve = run_train(tr);
  const fs::path index = out / std::string(snapshot_files::kIndex);
  run_index({aug.catalog_out, tr.model, index});
  result.trained = run_eval({tr.model, index, qa.test_out, out / f::kEvalReport, out / f::kEvalSummary});
  return result;
}

}  // namespace neuroembed::pipeline
