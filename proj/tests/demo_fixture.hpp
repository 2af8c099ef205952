#pragma once

// Loads the bundled demo fixture through ingest and augmentation, in memory.

#include <filesystem>

#include "neuroembed/augment.hpp"
#include "neuroembed/catalog.hpp"
#include "neuroembed/fileio.hpp"
#include "pipeline.hpp"

namespace demo {

struct Augmented {
  neuroembed::CohortCatalog raw;
  neuroembed::CohortCatalog filtered;
  neuroembed::AugmentResult result;
};

inline const Augmented& augmented() {
  static const Augmented data = [] {
    using namespace neuroembed;
    const std::filesystem::path dir = NEUROEMBED_TEST_DEMO_DIR;
    Augmented a;
    a.raw = parse_catalog_text(read_file(dir / "catalog.jsonl"));
    a.filtered = filter_disease(a.raw, parse_disease_terms(read_file(dir / "disease_terms.json")));
    a.result = augment_catalog(a.filtered, pipeline::load_registry(dir));
    return a;
  }();
  return data;
}

}  // namespace demo
