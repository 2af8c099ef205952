#include <gtest/gtest.h>

#include <future>

#include <json.hpp>

#include "../snapshot_fixture.hpp"
#include "neuroembed/error.hpp"
#include "neuroembed/service.hpp"

// after Eigen
#include <httplib.h>

using namespace neuroembed;
using nlohmann::json;
using testing_support::TempDir;

namespace {

class MiniService : public ::testing::Test {
 protected:
  void SetUp() override {
    snapshots::write_mini(dir_.path());
    service_.install(Snapshot::load(dir_.path()));
  }

  TempDir dir_{"mini_snapshot"};
  SearchService service_;
};

json body_of(const Response& r) { return json::parse(r.body); }

}  // namespace

TEST_F(MiniService, QueryReturnsRankedHitsWithMetadata) {
  const auto* rec = service_.current()->catalog.find("GSE2");
  ASSERT_NE(rec, nullptr);
  auto r = service_.handle_query(cohort_text(*rec), 3);
  ASSERT_EQ(r.status, 200);
  auto doc = body_of(r);
  ASSERT_EQ(doc["hits"].size(), 3u);
  EXPECT_EQ(doc["hits"][0]["accession"], "GSE2");
  EXPECT_EQ(doc["hits"][0]["rank"], 1);
  EXPECT_NEAR(doc["hits"][0]["similarity"].get<double>(), 1.0, 1e-6);
  EXPECT_EQ(doc["hits"][0]["title"], rec->title);
  EXPECT_EQ(doc["hits"][0]["source_url"], "https://www.ncbi.nlm.nih.gov/geo/query/acc.cgi?acc=GSE2");
  EXPECT_EQ(doc["hits"][0]["metadata"].size(), 4u);
  for (std::size_t i = 1; i < 3; ++i) {
    EXPECT_EQ(doc["hits"][i]["rank"], i + 1);
    EXPECT_LE(doc["hits"][i]["similarity"].get<double>(), doc["hits"][i - 1]["similarity"].get<double>());
  }
}

TEST_F(MiniService, KBeyondSizeAndDefaults) {
  EXPECT_EQ(body_of(service_.handle_query(R"({"text": "tremor", "k": 50})"))["hits"].size(), 3u);
  auto doc = body_of(service_.handle_query(R"({"text": "tremor"})"));
  EXPECT_EQ(doc["k"], 10);
  EXPECT_EQ(doc["hits"].size(), 3u);
}

TEST_F(MiniService, BadQueriesAre400) {
  EXPECT_EQ(service_.handle_query(R"({"text": "   "})").status, 400);
  EXPECT_EQ(service_.handle_query(R"({"k": 3})").status, 400);
  EXPECT_EQ(service_.handle_query("not json").status, 400);
  EXPECT_EQ(service_.handle_query(R"({"text": "tremor", "k": 0})").status, 400);
  EXPECT_EQ(service_.handle_query(R"({"text": "tremor", "k": 1001})").status, 400);
  EXPECT_EQ(service_.handle_query(R"({"text": "tremor", "k": "3"})").status, 400);
  EXPECT_EQ(service_.handle_query(R"({"text": "tremor", "k": 1000})").status, 200);
}

TEST(Service, NoSnapshotIs503) {
  SearchService s;
  EXPECT_EQ(s.handle_query("tremor", 3).status, 503);
  EXPECT_EQ(s.handle_get_cohort("GSE1").status, 503);
  auto health = body_of(s.handle_health());
  EXPECT_EQ(health["status"], "ok");
  EXPECT_EQ(health["snapshot_loaded"], false);
  auto stats = body_of(s.handle_stats());
  EXPECT_EQ(stats["loaded"], false);
  EXPECT_EQ(stats["catalog_size"], 0);
  EXPECT_EQ(stats["index_size"], 0);
  for (const auto& [dim, row] : stats["augmentation"].items()) {
    for (const auto& [field, value] : row.items()) EXPECT_EQ(value, 0) << dim << " " << field;
  }
}

TEST_F(MiniService, CohortDetailFlagsUnmapped) {
  auto ok = service_.handle_get_cohort("GSE3");
  ASSERT_EQ(ok.status, 200);
  auto doc = body_of(ok);
  EXPECT_EQ(doc["accession"], "GSE3");
  EXPECT_EQ(doc["has_unmapped"], true);
  bool flagged = false;
  for (const auto& [dim, view] : doc["dimensions"].items()) {
    for (const auto& raw : view["raw"]) {
      if (raw["value"] == "unknown area") flagged = raw["unmapped"].get<bool>();
    }
  }
  EXPECT_TRUE(flagged);
  EXPECT_EQ(body_of(service_.handle_get_cohort("GSE1"))["has_unmapped"], false);
  EXPECT_EQ(service_.handle_get_cohort("GSE404").status, 404);
}

TEST_F(MiniService, StatsMirrorSnapshot) {
  auto doc = body_of(service_.handle_stats());
  EXPECT_EQ(doc["loaded"], true);
  EXPECT_EQ(doc["catalog_size"], 3);
  EXPECT_EQ(doc["index_size"], 3);
  EXPECT_EQ(doc["model"]["d_out"], 64);
  EXPECT_EQ(doc["model"]["provider_id"], "hashed-token-v1");
  EXPECT_EQ(json::parse(write_stats(mini::expected_stats())), doc["augmentation"]);
}

TEST_F(MiniService, ReloadSwapsOrKeepsOldSnapshot) {
  const auto before = service_.handle_stats().body;
  auto bad = service_.handle_reload(R"({"snapshot_dir": "/nonexistent/snapshot"})");
  EXPECT_EQ(bad.status, 400);
  EXPECT_NE(bad.body.find("/nonexistent/snapshot"), std::string::npos);
  EXPECT_EQ(service_.handle_stats().body, before);
  EXPECT_EQ(service_.handle_reload("{}").status, 400);

  TempDir other("mini_snapshot_b");
  snapshots::write_mini(other.path());
  const auto old = service_.current();
  auto ok = service_.handle_reload(json{{"snapshot_dir", other.path().string()}}.dump());
  EXPECT_EQ(ok.status, 200);
  EXPECT_NE(service_.current(), old);
  EXPECT_EQ(service_.current()->directory, other.path().string());
  EXPECT_EQ(service_.handle_stats().body, before);
}

TEST_F(MiniService, CorruptIndexRefusesToLoad) {
  TempDir other("mini_snapshot_c");
  snapshots::write_mini(other.path());
  write_file_atomic(other / "index.bin", "garbage");
  EXPECT_THROW(Snapshot::load(other.path()), FormatError);
  EXPECT_EQ(service_.handle_reload(json{{"snapshot_dir", other.path().string()}}.dump()).status, 400);
  EXPECT_EQ(service_.current()->directory, dir_.path().string());
}

TEST_F(MiniService, ConcurrentIdenticalRequestsAgree) {
  const std::string request = R"({"text": "homo sapiens rna sequencing tremor", "k": 3})";
  const std::string expected = service_.handle_query(request).body;
  std::vector<std::future<std::string>> futures;
  for (int i = 0; i < 8; ++i) {
    futures.push_back(std::async(std::launch::async, [&] {
      std::string last;
      for (int j = 0; j < 25; ++j) last = service_.handle_query(request).body;
      return last;
    }));
  }
  for (auto& f : futures) EXPECT_EQ(f.get(), expected);
}

TEST_F(MiniService, ServesOverHttp) {
  HttpServer server(service_, "127.0.0.1", 0);
  ASSERT_GT(server.port(), 0);
  httplib::Client client("127.0.0.1", server.port());
  auto health = client.Get("/v1/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(json::parse(health->body)["status"], "ok");

  auto query = client.Post("/v1/query", R"({"text": "tremor", "k": 2})", "application/json");
  ASSERT_TRUE(query);
  EXPECT_EQ(query->status, 200);
  EXPECT_EQ(query->body, service_.handle_query(R"({"text": "tremor", "k": 2})").body);
  EXPECT_EQ(query->get_header_value("Content-Type"), "application/json");

  auto cohort = client.Get("/v1/cohorts/GSE1");
  ASSERT_TRUE(cohort);
  EXPECT_EQ(cohort->status, 200);
  EXPECT_EQ(client.Get("/v1/cohorts/NOPE")->status, 404);
  EXPECT_EQ(client.Get("/v1/stats")->body, service_.handle_stats().body);
  EXPECT_EQ(client.Post("/v1/query", "{}", "application/json")->status, 400);
  EXPECT_EQ(client.Post("/v1/reload", R"({"snapshot_dir": "/missing"})", "application/json")->status, 400);
  server.stop();
  EXPECT_FALSE(server.running());
}

TEST(DemoService, ExampleQueryFindsSubstantiaNigraCohorts) {
  SearchService s;
  s.install(Snapshot::load(snapshots::demo()));
  auto r = s.handle_query("Show me Parkinson's disease cohorts profiled with RNA-Seq in substantia nigra tissue", 10);
  ASSERT_EQ(r.status, 200);
  auto doc = body_of(r);
  ASSERT_EQ(doc["hits"].size(), 10u);
  std::size_t nigra = 0;
  for (const auto& hit : doc["hits"]) {
    for (const auto& v : hit["metadata"]["Ti"]) nigra += v.get<std::string>() == "substantia nigra";
  }
  EXPECT_GE(nigra, 1u);
  EXPECT_EQ(s.handle_query("Show me Parkinson's disease cohorts profiled with RNA-Seq in substantia nigra tissue", 10).body,
            r.body);
}

TEST(DemoService, StatsMatchBuildOutputs) {
  SearchService s;
  s.install(Snapshot::load(snapshots::demo()));
  auto doc = body_of(s.handle_stats());
  auto stats = parse_stats(read_file(snapshots::demo() / "augment_stats.json"));
  EXPECT_EQ(json::parse(write_stats(stats)), doc["augmentation"]);
  auto catalog = parse_catalog_text(read_file(snapshots::demo() / "catalog.jsonl"));
  EXPECT_EQ(doc["catalog_size"], catalog.size());
  EXPECT_EQ(doc["index_size"], catalog.size());
  const std::string report = read_file(snapshots::demo() / "augment_report.tsv");
  EXPECT_EQ(augmentation_report(stats), report);
}
