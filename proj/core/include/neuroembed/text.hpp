#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace neuroembed::text {

/// ASCII lowercase; bytes outside ASCII are copied unchanged.
std::string to_lower(std::string_view s);

std::string_view trim(std::string_view s);

/// Matching form for ontology labels and metadata values: surrounding quotes
/// stripped, lowercased, trimmed, internal whitespace runs collapsed to one space.
std::string normalize_label(std::string_view s);

/// Decodes UTF-8 into Unicode scalar values. Invalid sequences become U+FFFD.
std::u32string decode_utf8(std::string_view s);

/// Lowercased tokens split on ASCII non-alphanumerics. Non-ASCII bytes are
/// treated as token characters.
std::vector<std::string> tokenize(std::string_view s);

/// Sentences split on '.', '!' or '?' followed by whitespace or end of text.
/// Each sentence keeps its terminator and is trimmed.
std::vector<std::string> split_sentences(std::string_view s);

/// Case-insensitive search for `needle` in `haystack` where the match is not
/// adjacent to another word character on either side.
bool contains_word(std::string_view haystack, std::string_view needle);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace neuroembed::text
