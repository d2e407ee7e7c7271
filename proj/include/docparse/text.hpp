#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace docparse {

/// Decode UTF-8 to Unicode scalar values; invalid bytes pass through as
/// single code points so metrics stay total on dirty input.
std::vector<uint32_t> utf8_decode(const std::string& s);

std::string trim(const std::string& s);

std::vector<std::string> split_lines(const std::string& s);

}  // namespace docparse
