#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace neuroembed {

/// Throws IoError naming the path.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// FNV-1a 64 of the bytes as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace neuroembed
