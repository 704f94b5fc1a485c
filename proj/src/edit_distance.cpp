#include "spellvar/edit_distance.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace spellvar {

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    }
    bool ok = len > 0 && i + len <= s.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (b & 0x3F);
      }
    }
    if (!ok) {
      out.push_back(b0);
      ++i;
    } else {
      out.push_back(cp);
      i += len;
    }
  }
  return out;
}

std::size_t levenshtein(std::string_view a_utf8, std::string_view b_utf8) {
  const auto a = decode_utf8(a_utf8);
  const auto b = decode_utf8(b_utf8);
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();

  // Two-row DP over the shorter string.
  const auto& outer = a.size() >= b.size() ? a : b;
  const auto& inner = a.size() >= b.size() ? b : a;
  std::vector<std::size_t> prev(inner.size() + 1), cur(inner.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= outer.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= inner.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (outer[i - 1] == inner[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[inner.size()];
}

double normalized_levenshtein(std::string_view a, std::string_view b) {
  const std::size_t total = decode_utf8(a).size() + decode_utf8(b).size();
  if (total == 0) return 0.0;
  return static_cast<double>(levenshtein(a, b)) / static_cast<double>(total);
}

}  // namespace spellvar
