#include <doctest.h>

#include <string>

#include "oracles.hpp"
#include "spellvar/edit_distance.hpp"
#include "spellvar/random.hpp"

using namespace spellvar;

TEST_CASE("normalized Levenshtein reference values") {
  CHECK(normalized_levenshtein("ur", "your") == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(normalized_levenshtein("m8", "mate") == 0.5);
  CHECK(normalized_levenshtein("mate", "mate") == 0.0);
  CHECK(normalized_levenshtein("", "") == 0.0);
  CHECK(normalized_levenshtein("sum1", "someone") == doctest::Approx(5.0 / 11.0));
  CHECK(normalized_levenshtein("lol", "the") == 0.5);
}

TEST_CASE("Levenshtein works on code points") {
  CHECK(levenshtein("caf\xC3\xA9", "cafe") == 1);
  CHECK(decode_utf8("\xE2\x9F\xA8").size() == 1);
  CHECK(normalized_levenshtein("\xC3\xA9", "e") == 0.5);
}

TEST_CASE("Levenshtein matches the full-table oracle exhaustively up to length 4") {
  std::vector<std::string> words{""};
  for (std::size_t len = 1; len <= 4; ++len) {
    std::vector<std::string> next;
    for (const auto& w : words) {
      if (w.size() + 1 != len) continue;
      for (char c : std::string("abc")) next.push_back(w + c);
    }
    words.insert(words.end(), next.begin(), next.end());
  }
  REQUIRE(words.size() == 121);
  for (const auto& a : words) {
    for (const auto& b : words) {
      REQUIRE(levenshtein(a, b) == oracle::edit_distance(a, b));
      REQUIRE(normalized_levenshtein(a, b) == oracle::normalized_edit_distance(a, b));
    }
  }
}

TEST_CASE("Levenshtein properties on random strings") {
  Rng rng(5);
  auto random_word = [&]() {
    std::string s;
    const auto len = rng.below(11);
    for (std::uint64_t i = 0; i < len; ++i) s += "abc"[rng.below(3)];
    return s;
  };
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_word();
    const auto b = random_word();
    const double d = normalized_levenshtein(a, b);
    CHECK(d == normalized_levenshtein(b, a));
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    CHECK((d == 0.0) == (a == b));
  }
}
