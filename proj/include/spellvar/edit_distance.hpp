#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace spellvar {

// Decodes UTF-8; malformed bytes are kept as single code units.
std::u32string decode_utf8(std::string_view s);

// Unit-cost insert/delete/substitute distance over code points.
std::size_t levenshtein(std::string_view a, std::string_view b);

// levenshtein(a, b) / (|a| + |b|), in [0, 1]; 0 when both are empty.
double normalized_levenshtein(std::string_view a, std::string_view b);

}  // namespace spellvar
