// Writes the bundled demo fixtures: a raw cohort catalog, disease term sets,
// and small ontology files for every dimension.
//
//   make_demo_fixture <out-dir> [seed]

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "neuroembed/fileio.hpp"
#include "neuroembed/rng.hpp"

namespace fs = std::filesystem;
using neuroembed::Rng;
using nlohmann::ordered_json;

namespace {

struct Word {
  std::string base;
  std::string alias1;
  std::string alias2;
};

struct Concept {
  std::string id;
  std::string label;
  std::vector<std::string> synonyms;
};

/// Two-part names whose synonyms swap both words for aliases.
std::vector<Concept> compose(const std::string& prefix, int first_id, const std::vector<Word>& left,
                             const std::vector<Word>& right) {
  std::vector<Concept> out;
  int id = first_id;
  for (const auto& l : left) {
    for (const auto& r : right) {
      Concept c;
      c.id = prefix + std::to_string(id++);
      c.label = l.base + " " + r.base;
      c.synonyms = {l.alias1 + " " + r.alias1, l.alias1 + " " + r.alias2, l.alias2 + " " + r.alias1,
                    l.alias2 + " " + r.alias2};
      out.push_back(std::move(c));
    }
  }
  return out;
}

const std::vector<Word> kRegions = {
    {"frontal", "frontalis", "frons"},        {"temporal", "temporalis", "tempora"},
    {"parietal", "parietalis", "paries"},     {"occipital", "occipitalis", "occiput"},
    {"dorsal", "dorsalis", "tergal"},         {"ventral", "ventralis", "abdominal"},
    {"medial", "medialis", "mesial"},         {"lateral", "lateralis", "flank"},
};
const std::vector<Word> kStructures = {
    {"cortex", "pallium", "mantle"},          {"striatum", "neostriatum", "striate"},
    {"thalamus", "thalami", "diencephalon"},  {"cerebellum", "parencephalon", "hindbrain"},
    {"hippocampus", "ammonis", "hippocampal"}, {"gyrus", "convolution", "gyri"},
};
const std::vector<Word> kTargets = {
    {"rna", "transcript", "mrna"},            {"methylation", "methylome", "cpg"},
    {"protein", "proteome", "peptide"},       {"chromatin", "nucleosome", "histone"},
    {"microrna", "mirna", "smallrna"},        {"genotype", "snp", "allele"},
};
const std::vector<Word> kMethods = {
    {"sequencing", "seq", "ngs"},
    {"array", "microarray", "chip"},
    {"spectrometry", "spectrometric", "ms"},
    {"imaging", "scan", "tomography"},
};
const std::vector<Word> kSeverities = {
    {"early", "incipient", "prodromal"},      {"late", "advanced", "terminal"},
    {"mild", "slight", "minor"},              {"severe", "marked", "profound"},
    {"progressive", "worsening", "advancing"}, {"familial", "hereditary", "inherited"},
    {"sporadic", "idiopathic", "nonfamilial"},
};
const std::vector<Word> kSymptoms = {
    {"tremor", "shaking", "trembling"},          {"dementia", "amentia", "dementing"},
    {"rigidity", "stiffness", "rigor"},          {"bradykinesia", "slowness", "hypokinesia"},
    {"neurodegeneration", "neurodegenerative", "atrophy"},
    {"ataxia", "incoordination", "dystaxia"},    {"psychosis", "hallucinosis", "psychotic"},
};

struct Ontologies {
  std::vector<Concept> taxon, uberon, efo_assay, efo_phenotype;
  std::vector<Concept> mesh_ti, mesh_ph, umls_as, umls_ph;
};

Ontologies build_ontologies() {
  Ontologies o;
  o.taxon = {
      {"NCBITaxon_9606", "homo sapiens", {"human", "man"}},
      {"NCBITaxon_10090", "mus musculus", {"mouse", "house mouse"}},
      {"NCBITaxon_10116", "rattus norvegicus", {"rat", "brown rat"}},
      {"NCBITaxon_9544", "macaca mulatta", {"rhesus macaque", "rhesus monkey"}},
      {"NCBITaxon_7955", "danio rerio", {"zebrafish", "zebra danio"}},
      {"NCBITaxon_7227", "drosophila melanogaster", {"fruit fly", "vinegar fly"}},
      {"NCBITaxon_6239", "caenorhabditis elegans", {"roundworm", "nematode"}},
      {"NCBITaxon_9823", "sus scrofa", {"pig", "swine"}},
  };
  o.uberon = compose("UBERON_00", 1001, kRegions, kStructures);
  o.uberon.push_back({"UBERON_0002038", "substantia nigra", {"black substance", "nigral region"}});
  o.uberon.push_back({"UBERON_0000178", "blood", {"whole blood", "peripheral blood"}});
  o.efo_assay = compose("EFO_00", 2001, kTargets, kMethods);
  o.efo_assay.push_back({"EFO_0002770", "rna profiling by array", {"expression profiling by array", "transcription profiling by array"}});
  o.efo_phenotype = compose("EFO_01", 3001, kSeverities, kSymptoms);
  o.efo_phenotype.push_back({"EFO_0001461", "healthy control", {"normal control", "unaffected control"}});
  o.mesh_ti = {{"D002552", "cerebral ventricles", {"brain ventricles", "ventricular system"}},
               {"D013116", "spinal cord", {"medulla spinalis", "myelon"}}};
  o.mesh_ph = {{"D020734", "parkinsonian disorders", {"parkinsonian syndromes", "parkinsonism"}}};
  o.umls_as = {{"C0872252", "flow cytometry", {"facs", "cytofluorometry"}}};
  o.umls_ph = {{"C0234133", "gait disturbance", {"abnormal gait", "walking difficulty"}}};
  return o;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '\'': out += "&apos;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string owl(const std::vector<const std::vector<Concept>*>& groups) {
  std::string out =
      "<?xml version=\"1.0\"?>\n"
      "<rdf:RDF xmlns:rdf=\"http://www.w3.org/1999/02/22-rdf-syntax-ns#\"\n"
      "         xmlns:rdfs=\"http://www.w3.org/2000/01/rdf-schema#\"\n"
      "         xmlns:owl=\"http://www.w3.org/2002/07/owl#\"\n"
      "         xmlns:oboInOwl=\"http://www.geneontology.org/formats/oboInOwl#\">\n"
      "  <owl:Ontology rdf:about=\"http://purl.obolibrary.org/obo/demo.owl\"/>\n";
  for (const auto* group : groups) {
    for (const auto& c : *group) {
      out += "  <owl:Class rdf:about=\"http://purl.obolibrary.org/obo/" + c.id + "\">\n";
      out += "    <rdfs:label>" + xml_escape(c.label) + "</rdfs:label>\n";
      for (const auto& s : c.synonyms) out += "    <oboInOwl:hasExactSynonym>" + xml_escape(s) + "</oboInOwl:hasExactSynonym>\n";
      out += "  </owl:Class>\n";
    }
  }
  out += "</rdf:RDF>\n";
  return out;
}

std::string mesh(const std::vector<const std::vector<Concept>*>& groups) {
  std::string out = "<?xml version=\"1.0\"?>\n<DescriptorRecordSet LanguageCode=\"eng\">\n";
  for (const auto* group : groups) {
    for (const auto& c : *group) {
      out += "  <DescriptorRecord DescriptorClass=\"1\">\n";
      out += "    <DescriptorUI>" + c.id + "</DescriptorUI>\n";
      out += "    <DescriptorName><String>" + xml_escape(c.label) + "</String></DescriptorName>\n";
      out += "    <ConceptList>\n      <Concept PreferredConceptYN=\"Y\">\n        <TermList>\n";
      out += "          <Term><String>" + xml_escape(c.label) + "</String></Term>\n";
      for (const auto& s : c.synonyms) out += "          <Term><String>" + xml_escape(s) + "</String></Term>\n";
      out += "        </TermList>\n      </Concept>\n    </ConceptList>\n  </DescriptorRecord>\n";
    }
  }
  out += "</DescriptorRecordSet>\n";
  return out;
}

std::string umls(const std::vector<const std::vector<Concept>*>& groups) {
  std::string out;
  for (const auto* group : groups) {
    for (const auto& c : *group) {
      for (const auto& s : c.synonyms) out += c.id + "\t" + c.label + "\t" + s + "\n";
    }
  }
  return out;
}

struct Disease {
  std::string label;
  std::vector<std::string> terms;
};

const std::vector<Disease> kDiseases = {
    {"Parkinson's disease", {"parkinson", "parkinson's", "pd"}},
    {"Alzheimer's disease", {"alzheimer", "alzheimer's", "ad"}},
    {"Amyotrophic lateral sclerosis", {"als", "motor neuron disease"}},
    {"Huntington's disease", {"huntington", "huntington's", "hd"}},
    {"Multiple sclerosis", {"ms lesions", "demyelination"}},
};

const std::vector<std::string> kTitleHeads = {
    "Genome-wide analysis of", "Molecular profiling in", "Integrative data on", "New findings about",
    "Cell type changes in",   "Research resource for",  "Longitudinal studies of", "Explore the landscape of",
    "Related papers and data on", "Signatures that show",
};
const std::vector<std::string> kTitleTails = {
    "patients", "brain tissue", "postmortem samples", "model organisms", "a multi-site cohort",
    "iPSC-derived neurons", "biobank donors", "a discovery cohort",
};
const std::vector<std::string> kFiller = {
    "Samples were collected under a standard protocol.",
    "Libraries were prepared in batches and processed together.",
    "Quality control removed outliers before analysis.",
    "Differential analysis identified candidate genes and pathways.",
    "Results were replicated in an independent set.",
};

std::string pick(Rng& rng, const std::vector<std::string>& v) {
  return v[static_cast<std::size_t>(rng.uniform_index(v.size()))];
}

const Concept& pick(Rng& rng, const std::vector<Concept>& v) {
  return v[static_cast<std::size_t>(rng.uniform_index(v.size()))];
}

/// A raw metadata value: mostly the label, sometimes a synonym or a typo.
std::string surface(Rng& rng, const Concept& c) {
  double u = rng.uniform01();
  if (u < 0.70 || c.synonyms.empty()) return c.label;
  if (u < 0.85) return pick(rng, c.synonyms);
  std::string s = c.label;
  if (s.size() > 8) {
    std::size_t pos = 1 + static_cast<std::size_t>(rng.uniform_index(s.size() - 2));
    if (s[pos] != ' ' && s[pos + 1] != ' ') std::swap(s[pos], s[pos + 1]);
  }
  return s;
}

const std::vector<std::string> kUnmappable = {"tissue sample 4", "pooled", "unknown region", "not applicable"};

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: make_demo_fixture <out-dir> [seed]\n";
    return 2;
  }
  const fs::path dir = argv[1];
  const std::uint64_t seed = argc > 2 ? std::stoull(argv[2]) : 20240501;
  fs::create_directories(dir);
  Ontologies o = build_ontologies();

  std::vector<Concept> ti = o.uberon;
  ti.insert(ti.end(), o.mesh_ti.begin(), o.mesh_ti.end());
  std::vector<Concept> as = o.efo_assay;
  as.insert(as.end(), o.umls_as.begin(), o.umls_as.end());
  std::vector<Concept> ph = o.efo_phenotype;
  ph.insert(ph.end(), o.mesh_ph.begin(), o.mesh_ph.end());
  ph.insert(ph.end(), o.umls_ph.begin(), o.umls_ph.end());

  Rng rng(seed);
  std::string catalog;
  const std::size_t n_records = 420;
  std::size_t ti_next = 0, as_next = 0, ph_next = 0;
  for (std::size_t i = 0; i < n_records; ++i) {
    const Disease& disease = kDiseases[static_cast<std::size_t>(rng.uniform_index(kDiseases.size()))];
    const std::string dterm = pick(rng, disease.terms);
    const double route = rng.uniform01();
    // ~12% never mention the disease outside boilerplate; a few carry an unknown label.
    const bool mention = route >= 0.12;
    const bool unknown = route >= 0.12 && route < 0.15;

    std::string title = pick(rng, kTitleHeads) + " " + pick(rng, kTitleTails);
    std::string summary = "This dataset is part of a public series.";
    if (mention) {
      if (rng.uniform01() < 0.6) {
        title = pick(rng, kTitleHeads) + " " + dterm + " " + pick(rng, kTitleTails);
      } else {
        summary += " We studied " + dterm + " in " + pick(rng, kTitleTails) + ".";
      }
    } else {
      summary = "Prior work on " + dterm + " motivated this dataset. " + pick(rng, kFiller) + "";
    }
    summary += " " + pick(rng, kFiller) + " Data are available from the repository.";

    ordered_json rec;
    char acc[16];
    std::snprintf(acc, sizeof acc, "GSE%06zu", 100000 + i * 37);
    rec["accession"] = acc;
    rec["title"] = title;
    rec["summary"] = summary;
    if (rng.uniform01() < 0.5) {
      rec["pmid"] = std::to_string(30000000 + i * 131);
      rec["publication_title"] = "A cohort resource: " + pick(rng, kTitleTails);
    } else {
      rec["pmid"] = nullptr;
      rec["publication_title"] = nullptr;
    }
    rec["disease"] = unknown ? std::string("Essential tremor") : disease.label;

    std::vector<std::string> po{surface(rng, rng.uniform01() < 0.6 ? o.taxon[0] : pick(rng, o.taxon))};
    std::vector<std::string> ti_v{surface(rng, ti[ti_next++ % ti.size()])};
    if (rng.uniform01() < 0.3) ti_v.push_back(surface(rng, pick(rng, ti)));
    std::vector<std::string> as_v{surface(rng, as[as_next++ % as.size()])};
    std::vector<std::string> ph_v{surface(rng, ph[ph_next++ % ph.size()])};
    if (rng.uniform01() < 0.3) ph_v.push_back(surface(rng, pick(rng, ph)));
    if (rng.uniform01() < 0.05) ti_v.push_back(pick(rng, kUnmappable));
    if (rng.uniform01() < 0.03) ph_v.push_back(pick(rng, kUnmappable));
    rec["po"] = po;
    rec["as"] = as_v;
    rec["ph"] = ph_v;
    rec["ti"] = ti_v;
    catalog += rec.dump() + "\n";
  }

  ordered_json terms;
  for (const auto& d : kDiseases) terms[d.label] = d.terms;

  neuroembed::write_file_atomic(dir / "catalog.jsonl", catalog);
  neuroembed::write_file_atomic(dir / "disease_terms.json", terms.dump(2) + "\n");
  neuroembed::write_file_atomic(dir / "ncbitaxon.owl", owl({&o.taxon}));
  neuroembed::write_file_atomic(dir / "uberon.owl", owl({&o.uberon}));
  neuroembed::write_file_atomic(dir / "efo.owl", owl({&o.efo_assay, &o.efo_phenotype}));
  neuroembed::write_file_atomic(dir / "mesh.xml", mesh({&o.mesh_ti, &o.mesh_ph}));
  neuroembed::write_file_atomic(dir / "umls.tsv", umls({&o.umls_as, &o.umls_ph}));
  std::cout << "wrote " << n_records << " raw cohorts to " << dir.string() << '\n';
  return 0;
}
