#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nwa::cli {

enum Exit { ok = 0, usage = 2, input = 3, resource = 4 };

/// Runs one subcommand; `args` excludes the program name. FILE arguments
/// that are "-" or omitted read `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace nwa::cli
