#pragma once

// Hand-built ontologies and catalog with known augmentation counts.

#include "neuroembed/augment.hpp"
#include "neuroembed/catalog.hpp"

namespace mini {

inline neuroembed::OntologyRegistry registry() {
  using namespace neuroembed;
  OntologyRegistry reg;
  SynonymTable taxon(OntologyId::NCBI_TAXON);
  taxon.add("NCBITaxon_9606", "homo sapiens", {"human", "man"});
  taxon.add("NCBITaxon_10090", "mus musculus", {"mouse"});
  SynonymTable uberon(OntologyId::UBERON);
  uberon.add("UBERON_0000956", "cerebral cortex", {"brain cortex"});
  uberon.add("UBERON_0002038", "substantia nigra", {});
  SynonymTable efo(OntologyId::EFO);
  efo.add("EFO_0008896", "rna sequencing", {"rna-seq", "rnaseq"});
  efo.add("EFO_0009001", "tremor", {"shaking"});
  SynonymTable mesh(OntologyId::MESH);
  mesh.add("D001921", "brain", {"encephalon"});
  mesh.add("D010300", "parkinson disease", {"paralysis agitans", "idiopathic parkinson's disease"});
  SynonymTable umls(OntologyId::UMLS);
  umls.add("C0575081", "gait disturbance", {"abnormal gait"});
  for (auto* t : {&taxon, &uberon, &efo, &mesh, &umls}) reg.add_table(std::move(*t));
  return reg;
}

inline neuroembed::CohortCatalog catalog() {
  using namespace neuroembed;
  auto rec = [](std::string acc, std::vector<std::string> po, std::vector<std::string> as,
                std::vector<std::string> ph, std::vector<std::string> ti) {
    CohortRecord r;
    r.accession = std::move(acc);
    r.title = "Parkinson's disease study " + r.accession;
    r.disease = "Parkinson's disease";
    r.at(Dimension::Po) = std::move(po);
    r.at(Dimension::As) = std::move(as);
    r.at(Dimension::Ph) = std::move(ph);
    r.at(Dimension::Ti) = std::move(ti);
    return r;
  };
  CohortCatalog c;
  c.records.push_back(rec("GSE1", {"Homo sapiens"}, {"RNA-seq"}, {"tremor"}, {"substantia nigra", "Brain"}));
  c.records.push_back(rec("GSE2", {"human"}, {"rna sequencing"}, {"abnormal gait"}, {"cerebral cortx"}));
  c.records.push_back(rec("GSE3", {"zebra"}, {}, {"Paralysis agitans"}, {"unknown area"}));
  return c;
}

/// Expected counts, worked out by hand from the tables above.
inline neuroembed::AugmentationStats expected_stats() {
  using namespace neuroembed;
  AugmentationStats s;
  //                 orig no  match syn prim mesh umls dir fuz final coll
  s.at(Dimension::Po) = {3, 1, 2, 2, 2, 0, 0, 2, 0, 1, 0};
  s.at(Dimension::Ti) = {4, 1, 3, 2, 2, 1, 0, 2, 1, 3, 0};
  s.at(Dimension::As) = {2, 0, 2, 2, 2, 0, 0, 2, 0, 1, 0};
  s.at(Dimension::Ph) = {3, 0, 3, 4, 1, 1, 1, 3, 0, 3, 0};
  return s;
}

}  // namespace mini
