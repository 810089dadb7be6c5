#pragma once

#include "nwa/nwa.hpp"

#include <string>
#include <string_view>

namespace nwa {

/// Parses the textual NWA format. Syntax errors carry "line L, col C".
Nwa parse_nwa(std::string_view text);

/// Normalized text: one declaration per line, slaves in index order.
std::string serialize_nwa(const Nwa& nwa);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace nwa
