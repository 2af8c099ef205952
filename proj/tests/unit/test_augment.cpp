#include <gtest/gtest.h>

#include <set>

#include "../mini_fixture.hpp"
#include "neuroembed/augment.hpp"
#include "neuroembed/error.hpp"
#include "neuroembed/serialize.hpp"

using namespace neuroembed;

TEST(Registry, DefaultRoutes) {
  OntologyRegistry r;
  EXPECT_EQ(r.route(Dimension::Po), (std::vector<OntologyId>{OntologyId::NCBI_TAXON, OntologyId::MESH, OntologyId::UMLS}));
  EXPECT_EQ(r.route(Dimension::As), (std::vector<OntologyId>{OntologyId::EFO, OntologyId::MESH, OntologyId::UMLS}));
  EXPECT_EQ(r.route(Dimension::Ph), (std::vector<OntologyId>{OntologyId::EFO, OntologyId::MESH, OntologyId::UMLS}));
  EXPECT_EQ(r.route(Dimension::Ti), (std::vector<OntologyId>{OntologyId::UBERON, OntologyId::MESH, OntologyId::UMLS}));
}

TEST(NormalizeTerm, ExactPrimaryStopsSearch) {
  auto reg = mini::registry();
  auto nt = normalize_term("Substantia Nigra", Dimension::Ti, reg);
  EXPECT_EQ(nt.match.kind, MatchKind::Exact);
  EXPECT_EQ(nt.match.ontology, OntologyId::UBERON);
  EXPECT_EQ(nt.canonical.value(), "substantia nigra");
  EXPECT_EQ(nt.raw, "Substantia Nigra");
}

TEST(NormalizeTerm, NothingMatches) {
  auto reg = mini::registry();
  auto nt = normalize_term("unknown area", Dimension::Ti, reg);
  EXPECT_EQ(nt.match.kind, MatchKind::None);
  EXPECT_FALSE(nt.canonical.has_value());
}

TEST(NormalizeTerm, PrimaryFuzzyBeatsFallbackExact) {
  OntologyRegistry reg;
  SynonymTable uberon(OntologyId::UBERON);
  uberon.add("U1", "hippocampus", {});
  SynonymTable mesh(OntologyId::MESH);
  mesh.add("D1", "hippocampos", {});
  reg.add_table(std::move(uberon));
  reg.add_table(std::move(mesh));
  auto nt = normalize_term("hippocampos", Dimension::Ti, reg);
  EXPECT_EQ(nt.match.kind, MatchKind::Fuzzy);
  EXPECT_EQ(nt.match.ontology, OntologyId::UBERON);
  EXPECT_NEAR(nt.match.score, 100.0 * (1.0 - 1.0 / 11.0), 1e-12);
}

TEST(ExpandSynonyms, Examples) {
  OntologyRegistry reg;
  SynonymTable efo(OntologyId::EFO);
  efo.add("E1", "tremor", {"shaking", "trembling", "tremors", "Tremor"});
  efo.add("E2", "ataxia", {});
  reg.add_table(std::move(efo));
  EXPECT_EQ(expand_synonyms("tremor", Dimension::Ph, reg).size(), 3u);
  EXPECT_TRUE(expand_synonyms("ataxia", Dimension::Ph, reg).empty());
  EXPECT_THROW(expand_synonyms("psychosis", Dimension::Ph, reg), LookupError);
}

TEST(AugmentCatalog, MiniFixtureCountsExact) {
  auto result = augment_catalog(mini::catalog(), mini::registry());
  for (Dimension d : kAllDimensions) {
    EXPECT_EQ(result.stats.at(d), mini::expected_stats().at(d)) << dimension_name(d);
  }
}

TEST(AugmentCatalog, PopulationRawsShareCanonical) {
  auto result = augment_catalog(mini::catalog(), mini::registry());
  const auto& recs = result.catalog.records;
  EXPECT_EQ(recs[0].at(Dimension::Po), std::vector<std::string>{"homo sapiens"});
  EXPECT_EQ(recs[1].at(Dimension::Po), std::vector<std::string>{"homo sapiens"});
  EXPECT_EQ(recs[2].at(Dimension::Po), std::vector<std::string>{"zebra"});
  EXPECT_EQ(recs[2].unmapped[index_of(Dimension::Po)], std::vector<std::string>{"zebra"});
  EXPECT_EQ(recs[1].raw[index_of(Dimension::Po)], std::vector<std::string>{"human"});
  EXPECT_EQ(result.vocabulary.at(Dimension::Po).size(), 1u);
  EXPECT_EQ(result.vocabulary.at(Dimension::Ti).at("cerebral cortex").kind, MatchKind::Fuzzy);
  EXPECT_EQ(result.vocabulary.at(Dimension::Ti).at("brain").source, OntologyId::MESH);
}

TEST(AugmentCatalog, AllUnmappableTissue) {
  auto c = mini::catalog();
  for (auto& r : c.records) r.at(Dimension::Ti) = {"nowhere " + r.accession};
  auto result = augment_catalog(c, mini::registry());
  const auto& ti = result.stats.at(Dimension::Ti);
  EXPECT_EQ(ti.final_count, 0u);
  EXPECT_EQ(ti.no_match, ti.original_count);
}

TEST(AugmentCatalog, CountInvariantsHold) {
  auto result = augment_catalog(mini::catalog(), mini::registry());
  for (Dimension d : kAllDimensions) {
    const auto& s = result.stats.at(d);
    EXPECT_EQ(s.no_match + s.match, s.original_count);
    EXPECT_EQ(s.direct + s.fuzzy, s.match);
    EXPECT_EQ(s.primary + s.mesh + s.umls, s.match);
  }
}

TEST(AugmentCatalog, IdempotentOnNormalizedCatalog) {
  auto reg = mini::registry();
  auto first = augment_catalog(mini::catalog(), reg);
  auto second = augment_catalog(first.catalog, reg);
  for (std::size_t i = 0; i < first.catalog.size(); ++i) {
    EXPECT_EQ(second.catalog.records[i].values, first.catalog.records[i].values);
    EXPECT_EQ(second.catalog.records[i].raw, first.catalog.records[i].raw);
  }
  for (Dimension d : kAllDimensions) {
    const auto& s = second.stats.at(d);
    EXPECT_EQ(s.fuzzy, 0u);
    EXPECT_EQ(s.direct, s.match);
  }
}

TEST(AugmentCatalog, SynonymsResolveBackExactly) {
  auto reg = mini::registry();
  auto result = augment_catalog(mini::catalog(), reg);
  for (Dimension d : kAllDimensions) {
    for (const auto& [canonical, entry] : result.vocabulary.at(d)) {
      for (const auto& s : entry.synonyms) {
        auto m = lookup(s, *reg.table(entry.source));
        EXPECT_EQ(m.kind, MatchKind::Exact) << s;
        EXPECT_EQ(m.canonical.value(), canonical) << s;
      }
    }
  }
}

TEST(AugmentCatalog, CollisionKeepsFirstWriter) {
  OntologyRegistry reg;
  SynonymTable uberon(OntologyId::UBERON);
  uberon.add("U1", "putamen", {"lentiform"});
  uberon.add("U2", "globus pallidus", {"pallidum"});
  SynonymTable mesh(OntologyId::MESH);
  mesh.add("D1", "lentiform nucleus", {"pallidum", "lenticular nucleus"});
  reg.add_table(std::move(uberon));
  reg.add_table(std::move(mesh));
  CohortCatalog c;
  CohortRecord r;
  r.accession = "A";
  r.at(Dimension::Ti) = {"putamen", "globus pallidus", "lentiform nucleus"};
  c.records.push_back(r);
  auto result = augment_catalog(c, reg);
  const auto& ti = result.vocabulary.at(Dimension::Ti);
  EXPECT_EQ(ti.at("globus pallidus").synonyms, std::vector<std::string>{"pallidum"});
  EXPECT_EQ(ti.at("lentiform nucleus").synonyms, std::vector<std::string>{"lenticular nucleus"});
  EXPECT_EQ(result.stats.at(Dimension::Ti).collisions, 1u);
  std::set<std::string> seen;
  for (const auto& [canonical, e] : ti) {
    EXPECT_TRUE(seen.insert(canonical).second);
    for (const auto& s : e.synonyms) EXPECT_TRUE(seen.insert(s).second) << s;
  }
}

TEST(Report, PopulationRowFromLiteralStats) {
  DimensionStats po{33, 5, 28, 100, 100, 0, 0, 100, 0, 105, 0};
  EXPECT_EQ(augmentation_report_row(Dimension::Po, po),
            "Po\t33\t5\t28\t100\t100 (100.00)\t0 (0.00)\t0 (0.00)\t100 (100.00)\t0 (0.00)\t105");
}

TEST(Report, PhenotypeDirectShare) {
  DimensionStats ph{13, 0, 13, 292, 0, 292, 0, 45, 247, 292, 0};
  EXPECT_NEAR(ph.direct_pct(), 15.41, 0.005);
  EXPECT_NE(augmentation_report_row(Dimension::Ph, ph).find("45 (15.41)\t247 (84.59)"), std::string::npos);
}

TEST(Report, AllZeroRow) {
  EXPECT_EQ(augmentation_report_row(Dimension::Ti, DimensionStats{}),
            "Ti\t0\t0\t0\t0\t0 (0.00)\t0 (0.00)\t0 (0.00)\t0 (0.00)\t0 (0.00)\t0");
}

TEST(Report, MiniFixtureReportText) {
  auto result = augment_catalog(mini::catalog(), mini::registry());
  EXPECT_EQ(augmentation_report(result.stats),
            "Field\tOriginal Count\tNo Match\tMatch\tSynonyms\tEFO/NCBI/UBERON (%)\tMeSH (%)\tUMLS (%)\tDirect (%)\t"
            "Fuzzy (%)\tFinal Count\n"
            "Ti\t4\t1\t3\t2\t2 (66.67)\t1 (33.33)\t0 (0.00)\t2 (66.67)\t1 (33.33)\t3\n"
            "Po\t3\t1\t2\t2\t2 (100.00)\t0 (0.00)\t0 (0.00)\t2 (100.00)\t0 (0.00)\t1\n"
            "As\t2\t0\t2\t2\t2 (100.00)\t0 (0.00)\t0 (0.00)\t2 (100.00)\t0 (0.00)\t1\n"
            "Ph\t3\t0\t3\t4\t1 (33.33)\t1 (33.33)\t1 (33.33)\t3 (100.00)\t0 (0.00)\t3\n");
}

TEST(Serialize, VocabularyAndStatsRoundTrip) {
  auto result = augment_catalog(mini::catalog(), mini::registry());
  auto vocab = parse_vocabulary(write_vocabulary(result.vocabulary));
  for (Dimension d : kAllDimensions) {
    ASSERT_EQ(vocab.at(d).size(), result.vocabulary.at(d).size());
    for (const auto& [k, e] : result.vocabulary.at(d)) {
      EXPECT_EQ(vocab.at(d).at(k).synonyms, e.synonyms);
      EXPECT_EQ(vocab.at(d).at(k).source, e.source);
      EXPECT_EQ(vocab.at(d).at(k).kind, e.kind);
    }
  }
  EXPECT_EQ(parse_stats(write_stats(result.stats)), result.stats);
}
