#pragma once

// Pattern-based bootstrapping: grow a pattern pool and a tuple pool from a
// handful of seed pairs, scoring patterns with RlogF and candidate tuples by
// the averaged log-count of the patterns that extract them.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spellvar/corpus.hpp"
#include "spellvar/pairs.hpp"
#include "spellvar/parallel.hpp"

namespace spellvar::bootstrap {

// (informal, formal), both lowercase.
using Tuple = std::pair<std::string, std::string>;

inline constexpr std::string_view kSlot = "⟨SLOT⟩";

// Context template with one single-token slot. Matches at position v when the
// |left| tokens before v and the |right| tokens after v equal the context
// (compared on lowercased tokens).
struct SurfacePattern {
  std::vector<std::string> left;
  std::vector<std::string> right;

  // Canonical rendering "left ⟨SLOT⟩ right", single-space separated.
  std::string id() const;
  bool matches_at(const std::vector<Token>& tokens, std::size_t v) const;

  friend bool operator==(const SurfacePattern&, const SurfacePattern&) = default;
};

struct BootstrapConfig {
  std::vector<Tuple> seeds;
  int max_iterations = 8;
  double pattern_threshold = 0.7;  // alpha, fraction of the iteration's best pattern score
  double tuple_threshold = 0.7;    // beta, fraction of the iteration's best tuple score
  int window = 3;
  std::size_t top_n_tuples = 10;
  std::size_t top_n_patterns = 10;
  double levenshtein_tau = 0.5;
  bool use_tuple_count_variant = false;
  bool strict_constraint = false;  // apply the Levenshtein gate to every candidate
  std::set<std::string> stopwords;
  Execution exec = Execution::parallel;

  void validate() const;
};

struct PatternStats {
  SurfacePattern pattern;
  std::size_t F = 0;        // distinct extracted tuples already in the tuple pool
  std::size_t N_total = 0;  // distinct tuples the pattern extracts
  double score = 0.0;
};

struct TupleStats {
  Tuple tuple;
  std::set<std::string> matching_patterns;
  std::size_t occurrence_count = 0;  // distinct (entry, position) extraction sites
  std::string source_entry;          // first entry the candidate was extracted from
  double score = 0.0;
};

struct Pools {
  std::set<Tuple> seeds;
  std::set<Tuple> tuple_pool;
  std::map<std::string, SurfacePattern> pattern_pool;  // keyed by id()

  static Pools from_seeds(const std::vector<Tuple>& seeds);
};

struct Occurrence {
  std::size_t entry = 0;     // index into Corpus::entries
  std::size_t position = 0;  // slot index in the definition
  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

// Site where some pattern's slot is filled by a usable candidate.
struct Match {
  std::size_t pattern = 0;  // index into the pattern list passed in
  std::size_t entry = 0;
  std::size_t position = 0;
};

// Filler tokens must carry at least one letter or digit.
bool is_usable_filler(std::string_view lower);

// Candidate tuple extracted at a site, or nullopt for unusable or identity
// fillers.
std::optional<Tuple> candidate_at(const DictEntry& entry, std::size_t position);

// Every definition position filled by the formal side of a pooled tuple, in
// entries whose headword is the informal side.
std::vector<Occurrence> label_occurrences(const Corpus& corpus, const Pools& pools);

// All (l, r) context sub-windows with l, r <= w and l + r >= 1, deduplicated
// and sorted by id.
std::vector<SurfacePattern> generate_patterns(const Corpus& corpus,
                                              const std::vector<Occurrence>& occurrences, int w);

// All pattern matches that yield a usable candidate, ordered by entry,
// position, then pattern index. The parallel path hashes every context window
// once per position; Execution::serial scans pattern by pattern.
std::vector<Match> find_matches(const Corpus& corpus, const std::vector<SurfacePattern>& patterns,
                                Execution exec = Execution::parallel);

// (F / N) * log2(F), zero when F <= 1 or N == 0.
double rlogf(std::size_t F, std::size_t N_total);

PatternStats score_pattern(const SurfacePattern& pattern, const Pools& pools, const Corpus& corpus);
std::vector<PatternStats> score_patterns(const std::vector<SurfacePattern>& patterns,
                                         const Pools& pools, const Corpus& corpus,
                                         Execution exec = Execution::parallel);

// Candidates extracted by the pattern pool, aggregated corpus-wide, with
// pooled tuples excluded. Sorted by tuple. Throws std::invalid_argument on an
// empty pattern pool.
std::vector<TupleStats> match_tuples(const Pools& pools, const Corpus& corpus,
                                     Execution exec = Execution::parallel);

// mean_j log2(F_j + 1) over the matching patterns, times log2(occurrence
// count) for the tuple-count variant. Stores the result in candidate.score.
double score_tuple(TupleStats& candidate, const std::map<std::string, std::size_t>& pattern_F,
                   bool variant);

// Stopword-formal candidates survive only when normalized Levenshtein
// distance < tau; strict mode applies the test to every candidate.
std::vector<TupleStats> apply_constraints(std::vector<TupleStats> candidates,
                                          const std::set<std::string>& stopwords, double tau,
                                          bool strict = false);

struct AcceptedPattern {
  std::string id;
  double score = 0.0;
  std::size_t F = 0;
  std::size_t N_total = 0;
  bool is_new = false;
};

struct IterationTrace {
  int iteration = 0;
  std::size_t occurrences = 0;
  std::size_t candidate_patterns = 0;
  std::size_t new_patterns = 0;
  std::size_t candidate_tuples = 0;
  std::size_t filtered_tuples = 0;  // removed by the stopword constraint
  std::size_t new_tuples = 0;
  std::size_t pattern_pool_size = 0;
  std::size_t tuple_pool_size = 0;
  std::vector<AcceptedPattern> accepted_patterns;
  std::string note;
};

struct BootstrapResult {
  Pools pools;
  std::vector<VariantPair> pairs;  // tuple pool minus seeds, in promotion order
  std::vector<IterationTrace> trace;
};

BootstrapResult run(const Corpus& corpus, const BootstrapConfig& config);

// One JSON record per iteration.
std::string format_trace_jsonl(const std::vector<IterationTrace>& trace);

}  // namespace spellvar::bootstrap
