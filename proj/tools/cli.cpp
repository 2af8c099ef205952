#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <ostream>

#include "neuroembed/error.hpp"
#include "neuroembed/service.hpp"
#include "pipeline.hpp"

namespace neuroembed::cli {

namespace {

namespace p = pipeline;

constexpr int kUsage = 2;
constexpr int kFailure = 1;

void add_train_flags(CLI::App& cmd, p::TrainOptions& t) {
  cmd.add_option("--epochs", t.config.epochs, "passes over the training pairs")->capture_default_str();
  cmd.add_option("--warmup", t.config.warmup_fraction, "fraction of steps in linear warm-up")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd.add_option("--batch", t.config.batch_size, "pairs per batch")->check(CLI::Range(2, 1 << 20))->capture_default_str();
  cmd.add_option("--lr", t.config.learning_rate, "learning rate")->check(CLI::PositiveNumber)->capture_default_str();
  cmd.add_option("--scale", t.loss.scale, "InfoNCE similarity scale")->check(CLI::PositiveNumber)->capture_default_str();
  cmd.add_option("--margin", t.loss.margin, "hinge margin")->check(CLI::NonNegativeNumber)->capture_default_str();
  cmd.add_option("--dim", t.dimension, "embedding dimension")->check(CLI::Range(2, 1 << 16))->capture_default_str();
  cmd.add_option_function<std::string>(
         "--loss",
         [&t](const std::string& v) {
           auto parsed = parse_loss_variant(v);
           if (!parsed) throw CLI::ValidationError("--loss", "expected infonce or hinge");
           t.loss.variant = *parsed;
         },
         "infonce or hinge")
      ->check(CLI::IsMember({"infonce", "hinge"}));
}

void print_means(std::ostream& out, const char* label, const EvalReport& r) {
  out << label << " queries=" << r.overall.count << " precision=" << std::fixed << std::setprecision(4)
      << r.overall.mean_precision << " mpr=" << r.overall.mean_mpr << '\n';
  out.unsetf(std::ios::floatfield);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cohort retrieval pipeline: ingest, augment, qagen, train, index, eval, serve, demo"};
  app.name("neuroembed");
  app.require_subcommand(1);
  std::function<void()> action;

  p::IngestOptions ingest;
  auto* c_ingest = app.add_subcommand("ingest", "keep cohorts that mention their disease in title or summary");
  c_ingest->add_option("--catalog", ingest.catalog, "raw catalog JSONL")->required();
  c_ingest->add_option("--terms", ingest.terms, "disease term sets JSON")->required();
  c_ingest->add_option("--out", ingest.out, "filtered catalog JSONL")->required();
  c_ingest->callback([&] {
    action = [&] { out << "kept " << p::run_ingest(ingest) << " cohorts\n"; };
  });

  p::AugmentOptions augment;
  auto* c_aug = app.add_subcommand("augment", "normalize metadata against ontologies and collect synonyms");
  c_aug->add_option("--catalog", augment.catalog, "filtered catalog JSONL")->required();
  c_aug->add_option("--ontologies", augment.ontologies, "directory of ontology files")->required();
  c_aug->add_option("--threshold", augment.threshold, "fuzzy match threshold")
      ->check(CLI::Range(0.0, 100.0))
      ->capture_default_str();
  c_aug->add_option("--vocab", augment.vocab, "vocabulary JSON output")->required();
  c_aug->add_option("--catalog-out", augment.catalog_out, "normalized catalog output");
  c_aug->add_option("--report", augment.report, "augmentation report TSV");
  c_aug->add_option("--stats", augment.stats, "augmentation stats JSON");
  c_aug->callback([&] {
    action = [&] {
      auto stats = p::run_augment(augment);
      out << augmentation_report(stats);
    };
  });

  p::QagenOptions qagen;
  auto* c_qa = app.add_subcommand("qagen", "generate train and test question-cohort pairs");
  c_qa->add_option("--catalog", qagen.catalog, "normalized catalog JSONL")->required();
  c_qa->add_option("--vocab", qagen.vocab, "vocabulary JSON")->required();
  c_qa->add_option("--seed", qagen.seed, "sampling seed")->required();
  c_qa->add_option("--budget", qagen.budget, "combos sampled per combo size")->capture_default_str();
  c_qa->add_option("--factor", qagen.factor, "train size as a multiple of test size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_qa->add_option("--train-out", qagen.train_out, "train pairs JSONL")->required();
  c_qa->add_option("--test-out", qagen.test_out, "test pairs JSONL")->required();
  c_qa->callback([&] {
    action = [&] {
      auto data = p::run_qagen(qagen);
      out << "train " << data.train.size() << " pairs, test " << data.test.size() << " pairs\n";
    };
  });

  p::TrainOptions train;
  auto* c_train = app.add_subcommand("train", "fine-tune the projection head");
  c_train->add_option("--train", train.train, "train pairs JSONL")->required();
  c_train->add_option("--catalog", train.catalog, "normalized catalog JSONL")->required();
  c_train->add_option("--model", train.model, "model JSON output")->required();
  c_train->add_option("--curve", train.curve, "loss curve TSV");
  c_train->add_option("--seed", train.config.seed, "shuffle and init seed")->required();
  c_train->add_flag("--baseline", train.baseline_only, "write the untrained initial head");
  add_train_flags(*c_train, train);
  c_train->callback([&] {
    action = [&] {
      auto curve = p::run_train(train);
      out << "steps " << curve.total_steps << ", loss " << curve.initial_train_loss << " -> "
          << curve.final_train_loss << '\n';
    };
  });

  p::IndexOptions index;
  auto* c_index = app.add_subcommand("index", "embed every cohort into a vector index");
  c_index->add_option("--catalog", index.catalog, "normalized catalog JSONL")->required();
  c_index->add_option("--model", index.model, "model JSON")->required();
  c_index->add_option("--index", index.index, "index output")->required();
  c_index->callback([&] {
    action = [&] { out << "indexed " << p::run_index(index) << " cohorts\n"; };
  });

  p::EvalOptions eval;
  auto* c_eval = app.add_subcommand("eval", "score the test pairs against the index");
  c_eval->add_option("--model", eval.model, "model JSON")->required();
  c_eval->add_option("--index", eval.index, "index file")->required();
  c_eval->add_option("--test", eval.test, "test pairs JSONL")->required();
  c_eval->add_option("--report", eval.report, "report JSON output")->required();
  c_eval->add_option("--summary", eval.summary, "per-group summary TSV");
  c_eval->callback([&] {
    action = [&] { print_means(out, "eval", p::run_eval(eval)); };
  });

  std::string snapshot;
  std::string host = "127.0.0.1";
  int port = 8080;
  ServiceConfig service_config;
  auto* c_serve = app.add_subcommand("serve", "serve the HTTP search API from a snapshot directory");
  c_serve->add_option("--snapshot", snapshot, "snapshot directory");
  c_serve->add_option("--host", host, "bind address")->capture_default_str();
  c_serve->add_option("--port", port, "listen port")->check(CLI::Range(0, 65535))->capture_default_str();
  c_serve->add_option("--k", service_config.default_k, "default result count")
      ->check(CLI::Range(std::size_t{1}, kMaxK))
      ->capture_default_str();
  c_serve->callback([&] {
    action = [&] {
      if (const char* env = std::getenv("NEUROEMBED_SNAPSHOT"); env && *env) snapshot = env;
      if (snapshot.empty()) throw InputError("no snapshot directory: pass --snapshot or set NEUROEMBED_SNAPSHOT");
      SearchService service(service_config);
      service.install(Snapshot::load(snapshot));
      out << "serving " << snapshot << " on " << host << ':' << port << std::endl;
      if (!serve_http(service, host, port)) throw IoError("cannot listen on " + host + ":" + std::to_string(port));
    };
  });

  p::DemoOptions demo;
  demo.fixtures = p::default_fixture_dir();
  auto* c_demo = app.add_subcommand("demo", "run the whole pipeline on the bundled fixtures");
  c_demo->add_option("--fixtures", demo.fixtures, "fixture directory")->capture_default_str();
  c_demo->add_option("--out", demo.out, "output (snapshot) directory")->required();
  c_demo->add_option("--seed", demo.seed, "seed for every sampling step")->capture_default_str();
  c_demo->add_option("--budget", demo.budget, "combos sampled per combo size")->capture_default_str();
  add_train_flags(*c_demo, demo.train);
  c_demo->callback([&] {
    action = [&] {
      auto r = p::run_demo(demo);
      out << "train " << r.train_pairs << " pairs, test " << r.test_pairs << " pairs\n";
      print_means(out, "baseline", r.baseline);
      print_means(out, "trained", r.trained);
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (action) action();
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kFailure;
}

}  // namespace neuroembed::cli
