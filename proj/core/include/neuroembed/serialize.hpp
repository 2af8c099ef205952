#pragma once

#include <string>
#include <string_view>

#include "neuroembed/augment.hpp"

namespace neuroembed {

/// {"Po": {"canonical": {"synonyms": [...], "source": "NCBI_TAXON", "kind": "exact"}}, ...}
std::string write_vocabulary(const AugmentedVocabulary& vocab);
AugmentedVocabulary parse_vocabulary(std::string_view json_text);

std::string write_stats(const AugmentationStats& stats);
AugmentationStats parse_stats(std::string_view json_text);

}  // namespace neuroembed
