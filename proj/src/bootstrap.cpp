#include "spellvar/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include <fmt/format.h>
#include <json.hpp>

#include "spellvar/edit_distance.hpp"
#include "spellvar/errors.hpp"

namespace spellvar::bootstrap {

namespace {

void append_joined(std::string& out, const std::vector<std::string>& words, std::size_t begin,
                   std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) {
    if (!out.empty()) out += ' ';
    out += words[i];
  }
}

// Builds the id of the pattern with `l` tokens of left context and `r` of
// right context around position v, without materializing the pattern.
std::string window_id(const std::vector<std::string>& lowers, std::size_t v, std::size_t l,
                      std::size_t r) {
  std::string id;
  append_joined(id, lowers, v - l, v);
  if (!id.empty()) id += ' ';
  id += kSlot;
  for (std::size_t i = v + 1; i <= v + r; ++i) {
    id += ' ';
    id += lowers[i];
  }
  return id;
}

std::vector<std::string> lowers_of(const DictEntry& entry) {
  std::vector<std::string> out;
  out.reserve(entry.definition.size());
  for (const auto& t : entry.definition) out.push_back(t.lower);
  return out;
}

bool tuple_order(const TupleStats& a, const TupleStats& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.tuple < b.tuple;
}

}  // namespace

std::string SurfacePattern::id() const {
  std::string out;
  append_joined(out, left, 0, left.size());
  if (!out.empty()) out += ' ';
  out += kSlot;
  for (const auto& w : right) {
    out += ' ';
    out += w;
  }
  return out;
}

bool SurfacePattern::matches_at(const std::vector<Token>& tokens, std::size_t v) const {
  if (v >= tokens.size() || v < left.size() || v + right.size() >= tokens.size()) return false;
  for (std::size_t i = 0; i < left.size(); ++i) {
    if (tokens[v - left.size() + i].lower != left[i]) return false;
  }
  for (std::size_t i = 0; i < right.size(); ++i) {
    if (tokens[v + 1 + i].lower != right[i]) return false;
  }
  return true;
}

void BootstrapConfig::validate() const {
  if (seeds.empty()) throw ConfigError("bootstrap: at least one seed tuple is required");
  if (max_iterations < 0) throw ConfigError("bootstrap: max_iterations must be >= 0");
  if (window < 1) throw ConfigError("bootstrap: window must be >= 1");
  if (!(pattern_threshold >= 0.7 && pattern_threshold < 1.0)) {
    throw ConfigError("bootstrap: pattern threshold (alpha) must be in [0.7, 1)");
  }
  if (!(tuple_threshold >= 0.7 && tuple_threshold < 1.0)) {
    throw ConfigError("bootstrap: tuple threshold (beta) must be in [0.7, 1)");
  }
  if (!(levenshtein_tau > 0.0 && levenshtein_tau <= 1.0)) {
    throw ConfigError("bootstrap: levenshtein tau must be in (0, 1]");
  }
  if (top_n_tuples == 0 || top_n_patterns == 0) {
    throw ConfigError("bootstrap: top-n sizes must be positive");
  }
}

Pools Pools::from_seeds(const std::vector<Tuple>& seeds) {
  Pools pools;
  for (const auto& [informal, formal] : seeds) {
    Tuple t{to_lower(informal), to_lower(formal)};
    pools.seeds.insert(t);
    pools.tuple_pool.insert(std::move(t));
  }
  return pools;
}

bool is_usable_filler(std::string_view lower) {
  for (char c : lower) {
    const auto u = static_cast<unsigned char>(c);
    if (u >= 0x80 || std::isalnum(u)) return true;
  }
  return false;
}

std::optional<Tuple> candidate_at(const DictEntry& entry, std::size_t position) {
  const auto& filler = entry.definition[position].lower;
  if (!is_usable_filler(filler)) return std::nullopt;
  std::string informal = to_lower(entry.headword);
  if (informal == filler) return std::nullopt;
  return Tuple{std::move(informal), filler};
}

std::vector<Occurrence> label_occurrences(const Corpus& corpus, const Pools& pools) {
  std::unordered_map<std::string, std::vector<std::size_t>> by_headword;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    by_headword[to_lower(corpus.entries[i].headword)].push_back(i);
  }
  std::vector<Occurrence> out;
  for (const auto& [informal, formal] : pools.tuple_pool) {
    const auto it = by_headword.find(informal);
    if (it == by_headword.end()) continue;
    for (const std::size_t e : it->second) {
      const auto& tokens = corpus.entries[e].definition;
      for (std::size_t v = 0; v < tokens.size(); ++v) {
        if (tokens[v].lower == formal) out.push_back({e, v});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Occurrence& a, const Occurrence& b) {
    return std::tie(a.entry, a.position) < std::tie(b.entry, b.position);
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<SurfacePattern> generate_patterns(const Corpus& corpus,
                                              const std::vector<Occurrence>& occurrences, int w) {
  if (w < 1) throw std::invalid_argument("generate_patterns: window must be >= 1");
  const auto window = static_cast<std::size_t>(w);
  std::map<std::string, SurfacePattern> unique;
  for (const auto& occ : occurrences) {
    const auto lowers = lowers_of(corpus.entries.at(occ.entry));
    const std::size_t v = occ.position;
    const std::size_t max_l = std::min(window, v);
    const std::size_t max_r = std::min(window, lowers.size() - 1 - v);
    for (std::size_t l = 0; l <= max_l; ++l) {
      for (std::size_t r = 0; r <= max_r; ++r) {
        if (l + r == 0) continue;
        SurfacePattern p;
        p.left.assign(lowers.begin() + static_cast<std::ptrdiff_t>(v - l),
                      lowers.begin() + static_cast<std::ptrdiff_t>(v));
        p.right.assign(lowers.begin() + static_cast<std::ptrdiff_t>(v + 1),
                       lowers.begin() + static_cast<std::ptrdiff_t>(v + 1 + r));
        auto id = p.id();
        unique.try_emplace(std::move(id), std::move(p));
      }
    }
  }
  std::vector<SurfacePattern> out;
  out.reserve(unique.size());
  for (auto& [id, p] : unique) out.push_back(std::move(p));
  return out;
}

std::vector<Match> find_matches(const Corpus& corpus, const std::vector<SurfacePattern>& patterns,
                                Execution exec) {
  std::vector<std::vector<Match>> per_entry(corpus.size());

  if (exec == Execution::serial) {
    for (std::size_t e = 0; e < corpus.size(); ++e) {
      const auto& entry = corpus.entries[e];
      for (std::size_t v = 0; v < entry.definition.size(); ++v) {
        if (!candidate_at(entry, v)) continue;
        for (std::size_t p = 0; p < patterns.size(); ++p) {
          if (patterns[p].matches_at(entry.definition, v)) per_entry[e].push_back({p, e, v});
        }
      }
    }
  } else {
    std::unordered_map<std::string, std::vector<std::size_t>> index;
    std::size_t max_left = 0;
    std::size_t max_right = 0;
    for (std::size_t p = 0; p < patterns.size(); ++p) {
      index[patterns[p].id()].push_back(p);
      max_left = std::max(max_left, patterns[p].left.size());
      max_right = std::max(max_right, patterns[p].right.size());
    }
    for_each_index(corpus.size(), exec, [&](std::size_t e) {
      const auto& entry = corpus.entries[e];
      const auto lowers = lowers_of(entry);
      auto& out = per_entry[e];
      for (std::size_t v = 0; v < lowers.size(); ++v) {
        if (!candidate_at(entry, v)) continue;
        const std::size_t first = out.size();
        const std::size_t max_l = std::min(max_left, v);
        const std::size_t max_r = std::min(max_right, lowers.size() - 1 - v);
        for (std::size_t l = 0; l <= max_l; ++l) {
          for (std::size_t r = 0; r <= max_r; ++r) {
            if (l + r == 0) continue;
            const auto it = index.find(window_id(lowers, v, l, r));
            if (it == index.end()) continue;
            for (const std::size_t p : it->second) out.push_back({p, e, v});
          }
        }
        std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(),
                  [](const Match& a, const Match& b) { return a.pattern < b.pattern; });
      }
    });
  }

  std::vector<Match> all;
  for (auto& bucket : per_entry) all.insert(all.end(), bucket.begin(), bucket.end());
  return all;
}

double rlogf(std::size_t F, std::size_t N_total) {
  if (F <= 1 || N_total == 0) return 0.0;
  const double f = static_cast<double>(F);
  return f / static_cast<double>(N_total) * std::log2(f);
}

std::vector<PatternStats> score_patterns(const std::vector<SurfacePattern>& patterns,
                                         const Pools& pools, const Corpus& corpus,
                                         Execution exec) {
  std::vector<std::set<Tuple>> extracted(patterns.size());
  for (const auto& m : find_matches(corpus, patterns, exec)) {
    extracted[m.pattern].insert(*candidate_at(corpus.entries[m.entry], m.position));
  }
  std::vector<PatternStats> out(patterns.size());
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    auto& s = out[p];
    s.pattern = patterns[p];
    s.N_total = extracted[p].size();
    s.F = static_cast<std::size_t>(std::count_if(
        extracted[p].begin(), extracted[p].end(),
        [&](const Tuple& t) { return pools.tuple_pool.contains(t); }));
    s.score = rlogf(s.F, s.N_total);
  }
  return out;
}

PatternStats score_pattern(const SurfacePattern& pattern, const Pools& pools, const Corpus& corpus) {
  return score_patterns({pattern}, pools, corpus, Execution::serial).front();
}

std::vector<TupleStats> match_tuples(const Pools& pools, const Corpus& corpus, Execution exec) {
  if (pools.pattern_pool.empty()) throw std::invalid_argument("match_tuples: empty pool");
  std::vector<SurfacePattern> patterns;
  std::vector<std::string> ids;
  for (const auto& [id, p] : pools.pattern_pool) {
    ids.push_back(id);
    patterns.push_back(p);
  }

  std::map<Tuple, TupleStats> by_tuple;
  std::map<Tuple, std::set<std::pair<std::size_t, std::size_t>>> sites;
  for (const auto& m : find_matches(corpus, patterns, exec)) {
    const auto& entry = corpus.entries[m.entry];
    auto tuple = *candidate_at(entry, m.position);
    if (pools.tuple_pool.contains(tuple)) continue;
    auto [it, inserted] = by_tuple.try_emplace(tuple);
    if (inserted) {
      it->second.tuple = tuple;
      it->second.source_entry = entry.entry_id;
    }
    it->second.matching_patterns.insert(ids[m.pattern]);
    sites[tuple].emplace(m.entry, m.position);
  }

  std::vector<TupleStats> out;
  out.reserve(by_tuple.size());
  for (auto& [tuple, stats] : by_tuple) {
    stats.occurrence_count = sites[tuple].size();
    out.push_back(std::move(stats));
  }
  return out;
}

double score_tuple(TupleStats& candidate, const std::map<std::string, std::size_t>& pattern_F,
                   bool variant) {
  if (candidate.matching_patterns.empty()) {
    throw std::invalid_argument("score_tuple: candidate has no matching patterns");
  }
  double sum = 0.0;
  for (const auto& id : candidate.matching_patterns) {
    const auto it = pattern_F.find(id);
    const double f = it == pattern_F.end() ? 0.0 : static_cast<double>(it->second);
    sum += std::log2(f + 1.0);
  }
  double score = sum / static_cast<double>(candidate.matching_patterns.size());
  if (variant) score *= std::log2(static_cast<double>(candidate.occurrence_count));
  candidate.score = score;
  return score;
}

std::vector<TupleStats> apply_constraints(std::vector<TupleStats> candidates,
                                          const std::set<std::string>& stopwords, double tau,
                                          bool strict) {
  std::erase_if(candidates, [&](const TupleStats& c) {
    const auto& [informal, formal] = c.tuple;
    if (!strict && !stopwords.contains(formal)) return false;
    return !(normalized_levenshtein(informal, formal) < tau);
  });
  return candidates;
}

BootstrapResult run(const Corpus& corpus, const BootstrapConfig& config) {
  config.validate();
  BootstrapResult result;
  auto& pools = result.pools;
  pools = Pools::from_seeds(config.seeds);

  for (int it = 1; it <= config.max_iterations; ++it) {
    IterationTrace trace;
    trace.iteration = it;

    const auto occurrences = label_occurrences(corpus, pools);
    trace.occurrences = occurrences.size();

    // Candidate patterns are rescored together with the pooled ones so the
    // threshold and the top-n cap see the whole ranking.
    auto candidates = generate_patterns(corpus, occurrences, config.window);
    trace.candidate_patterns = candidates.size();
    std::set<std::string> candidate_ids;
    for (const auto& c : candidates) candidate_ids.insert(c.id());
    for (const auto& [id, p] : pools.pattern_pool) {
      if (!candidate_ids.contains(id)) candidates.push_back(p);
    }
    auto stats = score_patterns(candidates, pools, corpus, config.exec);
    std::vector<std::pair<std::string, const PatternStats*>> ranked;
    ranked.reserve(stats.size());
    for (const auto& s : stats) ranked.emplace_back(s.pattern.id(), &s);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.second->score != b.second->score) return a.second->score > b.second->score;
      return a.first < b.first;
    });
    const double best_pattern = ranked.empty() ? 0.0 : ranked.front().second->score;
    const double pattern_cut = config.pattern_threshold * best_pattern;

    std::map<std::string, std::size_t> pattern_F;
    for (const auto& [id, s] : ranked) pattern_F[id] = s->F;

    for (const auto& [id, s] : ranked) {
      if (trace.accepted_patterns.size() >= config.top_n_patterns) break;
      if (!(s->score > 0.0 && s->score > pattern_cut)) break;
      const bool is_new = !pools.pattern_pool.contains(id);
      if (is_new) {
        pools.pattern_pool.emplace(id, s->pattern);
        ++trace.new_patterns;
      }
      trace.accepted_patterns.push_back({id, s->score, s->F, s->N_total, is_new});
    }

    if (!pools.pattern_pool.empty()) {
      auto tuples = match_tuples(pools, corpus, config.exec);
      trace.candidate_tuples = tuples.size();
      tuples = apply_constraints(std::move(tuples), config.stopwords, config.levenshtein_tau,
                                 config.strict_constraint);
      trace.filtered_tuples = trace.candidate_tuples - tuples.size();

      double best_tuple = 0.0;
      for (auto& t : tuples) {
        best_tuple = std::max(best_tuple, score_tuple(t, pattern_F, config.use_tuple_count_variant));
      }
      const double tuple_cut = config.tuple_threshold * best_tuple;
      std::sort(tuples.begin(), tuples.end(), tuple_order);
      for (const auto& t : tuples) {
        if (trace.new_tuples >= config.top_n_tuples) break;
        if (!(t.score > 0.0 && t.score > tuple_cut)) break;
        pools.tuple_pool.insert(t.tuple);
        ++trace.new_tuples;
        VariantPair p;
        p.informal = t.tuple.first;
        p.formal = t.tuple.second;
        p.score = t.score;
        p.method = Method::bootstrap;
        p.iteration = it;
        p.source_entry = t.source_entry;
        result.pairs.push_back(std::move(p));
      }
    }

    trace.pattern_pool_size = pools.pattern_pool.size();
    trace.tuple_pool_size = pools.tuple_pool.size();
    const bool stalled = trace.new_patterns == 0 && trace.new_tuples == 0;
    if (stalled) {
      trace.note = occurrences.empty() && pools.pattern_pool.empty()
                       ? "early stop: no seed occurrences in corpus"
                       : "early stop: no new patterns or tuples";
    }
    result.trace.push_back(std::move(trace));
    if (stalled) break;
  }
  return result;
}

std::string format_trace_jsonl(const std::vector<IterationTrace>& trace) {
  std::string out;
  for (const auto& t : trace) {
    nlohmann::ordered_json rec;
    rec["iteration"] = t.iteration;
    rec["occurrences"] = t.occurrences;
    rec["candidate_patterns"] = t.candidate_patterns;
    rec["new_patterns"] = t.new_patterns;
    rec["candidate_tuples"] = t.candidate_tuples;
    rec["filtered_tuples"] = t.filtered_tuples;
    rec["new_tuples"] = t.new_tuples;
    rec["pattern_pool_size"] = t.pattern_pool_size;
    rec["tuple_pool_size"] = t.tuple_pool_size;
    auto patterns = nlohmann::ordered_json::array();
    for (const auto& p : t.accepted_patterns) {
      nlohmann::ordered_json jp;
      jp["pattern"] = p.id;
      jp["score"] = p.score;
      jp["F"] = p.F;
      jp["N"] = p.N_total;
      jp["new"] = p.is_new;
      patterns.push_back(std::move(jp));
    }
    rec["accepted_patterns"] = std::move(patterns);
    if (!t.note.empty()) rec["note"] = t.note;
    out += rec.dump();
    out += '\n';
  }
  return out;
}

}  // namespace spellvar::bootstrap
