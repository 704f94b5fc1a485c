#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "oracles.hpp"
#include "scoring_instances.hpp"
#include "spellvar/bootstrap.hpp"
#include "spellvar/errors.hpp"
#include "spellvar/synthetic.hpp"

using namespace spellvar;
using namespace spellvar::bootstrap;

namespace {

DictEntry entry(const std::string& id, const std::string& head, const std::string& def) {
  return synthetic::make_entry(id, head, def);
}

Corpus small_corpus() {
  Corpus c;
  c.entries.push_back(entry("a", "ur", "another way of saying your"));
  c.entries.push_back(entry("b", "m8", "another way of saying mate"));
  c.entries.push_back(entry("c", "gr8", "another way of saying great"));
  c.entries.push_back(entry("d", "lol", "another way of saying the"));
  c.entries.push_back(entry("e", "sum1", "another way of saying someone"));
  c.entries.push_back(entry("f", "pls", "a way to ask , please"));
  return c;
}

}  // namespace

TEST_CASE("rlogf formula") {
  CHECK(rlogf(0, 5) == 0.0);
  CHECK(rlogf(1, 5) == 0.0);
  CHECK(rlogf(4, 0) == 0.0);
  CHECK(rlogf(4, 8) == doctest::Approx(1.0));
  CHECK(rlogf(8, 8) == doctest::Approx(3.0));
}

TEST_CASE("pattern scores match the formula on random instances") {
  Rng rng(101);
  for (int i = 0; i < 200; ++i) {
    const auto inst = instances::make_pattern_instance(rng);
    const auto s = score_pattern(inst.pattern, inst.pools, inst.corpus);
    REQUIRE(s.F == inst.F);
    REQUIRE(s.N_total == inst.N);
    CHECK(std::abs(s.score - oracle::rlogf(double(inst.F), double(inst.N))) < 1e-12);
  }
}

TEST_CASE("tuple scores match the formula on random instances") {
  Rng rng(102);
  for (int i = 0; i < 500; ++i) {
    auto inst = instances::make_tuple_instance(rng);
    for (bool variant : {false, true}) {
      const double got = score_tuple(inst.candidate, inst.pattern_F, variant);
      CHECK(std::abs(got - oracle::tuple_score(inst.F, inst.candidate.occurrence_count, variant)) < 1e-12);
      CHECK(inst.candidate.score == got);
    }
  }
  TupleStats empty;
  CHECK_THROWS_AS(score_tuple(empty, {}, false), std::invalid_argument);
}

TEST_CASE("label_occurrences finds formal words under their informal headwords") {
  const Corpus c = small_corpus();
  const auto pools = Pools::from_seeds({{"UR", "Your"}, {"m8", "mate"}, {"zz", "another"}});
  const auto occ = label_occurrences(c, pools);
  REQUIRE(occ.size() == 2);
  CHECK(occ[0] == Occurrence{0, 4});
  CHECK(occ[1] == Occurrence{1, 4});
}

TEST_CASE("generate_patterns enumerates every sub-window once") {
  const Corpus c = small_corpus();
  const auto patterns = generate_patterns(c, {{0, 4}}, 3);
  // slot at the end: l in 1..3, r = 0
  REQUIRE(patterns.size() == 3);
  std::vector<std::string> ids;
  for (const auto& p : patterns) ids.push_back(p.id());
  CHECK(std::is_sorted(ids.begin(), ids.end()));
  CHECK(std::find(ids.begin(), ids.end(), "way of saying ⟨SLOT⟩") != ids.end());

  const auto mid = generate_patterns(c, {{0, 2}}, 3);
  // left 0..2, right 0..2 minus the empty window
  CHECK(mid.size() == 3 * 3 - 1);
  CHECK(generate_patterns(c, {{0, 2}, {1, 2}}, 1).size() == 3);
  CHECK_THROWS_AS(generate_patterns(c, {{0, 2}}, 0), std::invalid_argument);
}

TEST_CASE("pattern matching respects boundaries") {
  const auto toks = tokenize("way of saying x");
  SurfacePattern p{{"saying"}, {}};
  CHECK(p.matches_at(toks, 3));
  CHECK_FALSE(p.matches_at(toks, 2));
  SurfacePattern q{{}, {"x"}};
  CHECK(q.matches_at(toks, 2));
  CHECK_FALSE(q.matches_at(toks, 3));
  CHECK_FALSE(SurfacePattern({"a", "b", "c", "d", "e"}, {}).matches_at(toks, 3));
}

TEST_CASE("unusable and identity fillers never become candidates") {
  const auto e = entry("x", "ok", "ok or \" ok\"");
  CHECK_FALSE(candidate_at(e, 0));
  CHECK_FALSE(candidate_at(e, 2));
  CHECK(is_usable_filler("m8"));
  CHECK_FALSE(is_usable_filler("--"));
  CHECK(is_usable_filler("\xC3\xA9"));
}

TEST_CASE("match_tuples counts distinct sites and skips pooled tuples") {
  Corpus c = small_corpus();
  c.entries.push_back(entry("g", "gr8", "another way of saying great , way of saying great"));
  auto pools = Pools::from_seeds({{"ur", "your"}, {"m8", "mate"}});
  SurfacePattern p{{"saying"}, {}};
  pools.pattern_pool.emplace(p.id(), p);
  SurfacePattern q{{"of", "saying"}, {}};
  pools.pattern_pool.emplace(q.id(), q);
  const auto tuples = match_tuples(pools, c);
  REQUIRE(tuples.size() == 3);
  const auto gr8 = std::find_if(tuples.begin(), tuples.end(),
                                [](const TupleStats& t) { return t.tuple.first == "gr8"; });
  REQUIRE(gr8 != tuples.end());
  CHECK(gr8->occurrence_count == 3);
  CHECK(gr8->matching_patterns.size() == 2);
  CHECK(gr8->source_entry == "c");
  for (const auto& t : tuples) CHECK_FALSE(pools.tuple_pool.contains(t.tuple));
  CHECK_THROWS_AS(match_tuples(Pools{}, c), std::invalid_argument);
}

TEST_CASE("stopword constraint keeps close variants and drops the rest") {
  std::vector<TupleStats> c(4);
  c[0].tuple = {"sum1", "someone"};
  c[1].tuple = {"lol", "the"};
  c[2].tuple = {"gr8", "great"};
  c[3].tuple = {"lol", "something"};
  const std::set<std::string> stop{"someone", "the", "something"};
  const auto kept = apply_constraints(c, stop, 0.5);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].tuple.second == "someone");
  CHECK(kept[1].tuple.second == "great");
  // strict mode gates every candidate; gr8/great is 3/8 apart
  CHECK(apply_constraints(c, {}, 0.3, true).empty());
  CHECK(apply_constraints(c, {}, 0.5, true).size() == 2);
}

TEST_CASE("run with zero iterations returns the seeds only") {
  BootstrapConfig cfg;
  cfg.seeds = {{"ur", "your"}};
  cfg.max_iterations = 0;
  const auto r = run(small_corpus(), cfg);
  CHECK(r.pairs.empty());
  CHECK(r.trace.empty());
  CHECK(r.pools.tuple_pool.size() == 1);
}

TEST_CASE("run stops early when seeds never occur") {
  BootstrapConfig cfg;
  cfg.seeds = {{"nope", "never"}};
  const auto r = run(small_corpus(), cfg);
  CHECK(r.pairs.empty());
  REQUIRE(r.trace.size() == 1);
  CHECK(r.trace[0].note == "early stop: no seed occurrences in corpus");
}

TEST_CASE("config validation") {
  BootstrapConfig cfg;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.seeds = {{"a", "b"}};
  cfg.validate();
  cfg.window = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.window = 3;
  cfg.pattern_threshold = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.pattern_threshold = 0.7;
  cfg.tuple_threshold = 0.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("pools only grow and seeds are never emitted") {
  const auto syn = synthetic::make_bootstrap_corpus();
  BootstrapConfig cfg;
  for (const auto& s : syn.seeds) cfg.seeds.push_back(s);
  cfg.stopwords = load_stopwords(std::string(SPELLVAR_DATA_DIR) + "/stopwords.txt");
  const auto r = run(syn.corpus, cfg);
  std::size_t last_tuples = cfg.seeds.size();
  std::size_t last_patterns = 0;
  for (const auto& t : r.trace) {
    CHECK(t.tuple_pool_size >= last_tuples);
    CHECK(t.pattern_pool_size >= last_patterns);
    CHECK(t.new_tuples <= cfg.top_n_tuples);
    CHECK(t.accepted_patterns.size() <= cfg.top_n_patterns);
    last_tuples = t.tuple_pool_size;
    last_patterns = t.pattern_pool_size;
  }
  CHECK(r.pools.tuple_pool.size() == cfg.seeds.size() + r.pairs.size());
  for (const auto& p : r.pairs) {
    CHECK_FALSE(r.pools.seeds.contains({p.informal, p.formal}));
    CHECK(p.informal != p.formal);
  }
}

TEST_CASE("serial and parallel pattern matching agree") {
  const auto syn = synthetic::make_bootstrap_corpus();
  auto pools = Pools::from_seeds(syn.seeds);
  const auto patterns = generate_patterns(syn.corpus, label_occurrences(syn.corpus, pools), 3);
  const auto a = find_matches(syn.corpus, patterns, Execution::serial);
  const auto b = find_matches(syn.corpus, patterns, Execution::parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].pattern == b[i].pattern);
    CHECK(a[i].entry == b[i].entry);
    CHECK(a[i].position == b[i].position);
  }
}

TEST_CASE("trace serializes one JSON object per iteration") {
  const auto syn = synthetic::make_bootstrap_corpus();
  BootstrapConfig cfg;
  for (const auto& s : syn.seeds) cfg.seeds.push_back(s);
  cfg.max_iterations = 2;
  const auto r = run(syn.corpus, cfg);
  const auto text = format_trace_jsonl(r.trace);
  CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(r.trace.size()));
  CHECK(text.find("\"iteration\":1") != std::string::npos);
}
