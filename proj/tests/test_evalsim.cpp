#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "oracles.hpp"
#include "spellvar/errors.hpp"
#include "spellvar/evalsim.hpp"
#include "spellvar/random.hpp"
#include "spellvar/synthetic.hpp"

using namespace spellvar;
using namespace spellvar::evalsim;

namespace {

std::string message_of(const std::string& text) {
  try {
    parse_embeddings(text);
  } catch (const DataError& e) {
    return e.what();
  }
  return {};
}

VariantPair pair(std::string a, std::string b) {
  VariantPair p;
  p.informal = std::move(a);
  p.formal = std::move(b);
  return p;
}

}  // namespace

TEST_CASE("embedding loader with and without a header") {
  const auto t = parse_embeddings("2 3\nur 1 0 0\nyour 0.5 0.5 0\n");
  CHECK(t.size() == 2);
  CHECK(t.dimension() == 3);
  CHECK(t.cosine(0, 1) == doctest::Approx(std::sqrt(0.5)));
  const auto u = parse_embeddings("ur 1 0\nyour 0 1\nur 5 5\n");
  CHECK(u.size() == 2);
  CHECK(u.vector(*u.index_of("ur"))[0] == 1.0f);
}

TEST_CASE("embedding loader errors name the line") {
  CHECK(message_of("a 1 2\nb 1\n").find("line 2") != std::string::npos);
  CHECK(message_of("a 1 2\nb 1 x\n").find("line 2") != std::string::npos);
  CHECK(message_of("a 0 0\n").find("line 1") != std::string::npos);
  CHECK_FALSE(message_of("3 2\na 1 2\nb 2 1\n").empty());
  CHECK_FALSE(message_of("").empty());
  CHECK_THROWS_AS(load_embeddings("/nonexistent/vectors.txt"), DataError);
}

TEST_CASE("rank counts strictly closer words and ignores ties") {
  const auto t = parse_embeddings("u 1 0\nf 0.8 0.6\nx 0.9 0.1\ny 0.8 0.6\nz -1 0\n");
  const auto r = rank_of_formal(t, "u", "f");
  REQUIRE(r.rank);
  CHECK(*r.rank == 2);
  CHECK(*rank_of_formal(t, "u", "x").rank == 1);
  CHECK(*rank_of_formal(t, "u", "z").rank == 4);
  CHECK_FALSE(rank_of_formal(t, "u", "missing").rank);
  CHECK_FALSE(rank_of_formal(t, "missing", "f").miss_reason.empty());
}

TEST_CASE("ranks match the full-sort oracle") {
  const auto fx = synthetic::make_embedding_fixture(120, 20, 8, 5);
  Rng rng(41);
  for (int i = 0; i < 300; ++i) {
    const auto a = static_cast<std::size_t>(rng.below(fx.table.size()));
    auto b = static_cast<std::size_t>(rng.below(fx.table.size()));
    if (a == b) continue;
    const auto serial = rank_of_formal(fx.table, fx.table.word(a), fx.table.word(b), Execution::serial);
    const auto parallel = rank_of_formal(fx.table, fx.table.word(a), fx.table.word(b), Execution::parallel);
    REQUIRE(serial.rank);
    CHECK(*serial.rank == oracle::rank_by_sort(fx.table, a, b));
    CHECK(serial.rank == parallel.rank);
  }
}

TEST_CASE("ranks are invariant to vector scaling") {
  const auto fx = synthetic::make_embedding_fixture(60, 10, 8, 6);
  EmbeddingTable scaled;
  Rng rng(42);
  for (std::size_t i = 0; i < fx.table.size(); ++i) {
    const float k = static_cast<float>(rng.uniform(0.5, 4.0));
    std::vector<float> v(fx.table.vector(i).begin(), fx.table.vector(i).end());
    for (auto& x : v) x *= k;
    scaled.add(fx.table.word(i), v);
  }
  for (const auto& p : fx.pairs) {
    CHECK(rank_of_formal(scaled, p.informal, p.formal).rank == rank_of_formal(fx.table, p.informal, p.formal).rank);
  }
}

TEST_CASE("evaluate_pairs on planted pairs") {
  const auto fx = synthetic::make_embedding_fixture();
  const auto report = evaluate_pairs(fx.table, fx.pairs, fx.formal_vocab, {100, 1, 50, 20, 1});
  CHECK(report.ks == std::vector<std::size_t>{1, 20, 50, 100});
  CHECK(report.matched_pairs == 20);
  CHECK(report.accuracy.at(1) == 1.0);
  double last = 0.0;
  for (auto k : report.ks) {
    CHECK(report.accuracy.at(k) >= last);
    last = report.accuracy.at(k);
  }
  CHECK(format_report_tsv(report).find("informal\tformal") == 0);
}

TEST_CASE("evaluate_pairs filters, lowercases and deduplicates") {
  const auto t = parse_embeddings("ur 1 0\nyour 1 0.1\nthe 0 1\n");
  const std::vector<VariantPair> pairs{pair("UR", "Your"), pair("ur", "your"), pair("ur", "the"),
                                       pair("ur", "absent")};
  const auto r = evaluate_pairs(t, pairs, {"your", "absent"}, {1});
  CHECK(r.per_pair.size() == 3);
  CHECK(r.matched_pairs == 1);
  CHECK(r.accuracy.at(1) == 1.0);
  CHECK_THROWS_AS(evaluate_pairs(t, {pair("ur", "the")}, {"your"}, {1}), DataError);
}

TEST_CASE("pearson") {
  const std::vector<double> x{1, 2, 3, 4};
  CHECK(std::abs(pearson(x, std::vector<double>{1, 3, 2, 4}) - 0.8) < 1e-12);
  CHECK(pearson(x, std::vector<double>{3, 5, 7, 9}) == 1.0);
  CHECK(pearson(x, std::vector<double>{-2, -4, -6, -8}) == -1.0);
  Rng rng(43);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> a(10), b(10);
    for (int j = 0; j < 10; ++j) {
      a[j] = rng.uniform(-5, 5);
      b[j] = rng.uniform(-5, 5);
    }
    CHECK(pearson(a, b) == doctest::Approx(oracle::pearson(a, b)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(pearson(x, std::vector<double>{1, 1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(pearson(x, std::vector<double>{1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(pearson(std::vector<double>{1}, std::vector<double>{1}), std::invalid_argument);
}
