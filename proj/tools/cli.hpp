#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace neuroembed::cli {

/// Runs one subcommand. `args` excludes the program name.
/// Returns 0 on success, 1 on I/O or validation failure, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace neuroembed::cli
