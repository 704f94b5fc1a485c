#include "spellvar/selftrain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include <fmt/format.h>
#include <json.hpp>

#include "spellvar/errors.hpp"
#include "spellvar/random.hpp"

namespace spellvar::selftrain {

void SelfTrainConfig::validate() const {
  if (max_iterations < 0) throw ConfigError("self-training iterations must be >= 0");
  if (!(confidence_tau >= 0.0 && confidence_tau <= 1.0)) {
    throw ConfigError("confidence threshold must lie in [0, 1]");
  }
  if (window < 0) throw ConfigError("window must be >= 0");
  train.validate();
}

void SearchSpace::validate() const {
  auto check = [](const std::pair<double, double>& r, const char* name) {
    if (!(r.first > 0.0) || !(r.first < r.second) || !std::isfinite(r.second)) {
      throw ConfigError(fmt::format("{} range must satisfy 0 < low < high", name));
    }
  };
  check(l1_range, "l1");
  check(l2_range, "l2");
  if (trials < 1) throw ConfigError("random search needs at least one trial");
  if (folds < 2) throw ConfigError("cross-validation needs at least two folds");
}

double token_f1(const std::vector<crf::TagSequence>& gold,
                const std::vector<crf::TagSequence>& predicted) {
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    for (std::size_t t = 0; t < gold[s].size(); ++t) {
      const bool g = gold[s][t] == crf::Tag::I;
      const bool p = predicted[s][t] == crf::Tag::I;
      tp += g && p;
      fp += !g && p;
      fn += g && !p;
    }
  }
  if (tp + fp + fn == 0) return 1.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

SearchResult random_search(const std::vector<crf::LabeledSequence>& gold, const SearchSpace& space,
                           const crf::TrainConfig& base, Execution exec) {
  space.validate();
  const auto folds = static_cast<std::size_t>(space.folds);
  if (gold.size() < folds) {
    throw ConfigError(fmt::format("random search: {} sequences is fewer than {} folds", gold.size(),
                                  space.folds));
  }

  Rng rng(space.seed);
  std::vector<std::size_t> order(gold.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  SearchResult result;
  for (int i = 0; i < space.trials; ++i) {
    TrialResult trial;
    trial.l1 = rng.log_uniform(space.l1_range.first, space.l1_range.second);
    trial.l2 = rng.log_uniform(space.l2_range.first, space.l2_range.second);
    result.trials.push_back(trial);
  }

  for (auto& trial : result.trials) {
    crf::TrainConfig cfg = base;
    cfg.l1 = trial.l1;
    cfg.l2 = trial.l2;
    for (std::size_t k = 0; k < folds; ++k) {
      const std::size_t lo = gold.size() * k / folds;
      const std::size_t hi = gold.size() * (k + 1) / folds;
      std::vector<crf::LabeledSequence> train_set;
      train_set.reserve(gold.size() - (hi - lo));
      for (std::size_t j = 0; j < order.size(); ++j) {
        if (j < lo || j >= hi) train_set.push_back(gold[order[j]]);
      }
      const crf::CrfModel model = crf::train(train_set, cfg, exec);
      std::vector<crf::TagSequence> truth, predicted;
      for (std::size_t j = lo; j < hi; ++j) {
        const auto& seq = gold[order[j]];
        truth.push_back(seq.labels);
        predicted.push_back(crf::viterbi_decode(model, seq.features).labels);
      }
      trial.fold_f1.push_back(token_f1(truth, predicted));
    }
    trial.mean_f1 = std::accumulate(trial.fold_f1.begin(), trial.fold_f1.end(), 0.0) /
                    static_cast<double>(folds);
  }

  const TrialResult* best = &result.trials.front();
  for (const auto& t : result.trials) {
    if (t.mean_f1 > best->mean_f1 ||
        (t.mean_f1 == best->mean_f1 && std::tie(t.l1, t.l2) < std::tie(best->l1, best->l2))) {
      best = &t;
    }
  }
  result.best_l1 = best->l1;
  result.best_l2 = best->l2;
  result.fold_scores = best->fold_f1;
  result.best_mean_f1 = best->mean_f1;
  return result;
}

std::vector<VariantPair> pairs_from_tagging(const DictEntry& entry, const crf::TagSequence& labels,
                                            const std::vector<crf::LabelScores>& marginals,
                                            int iteration) {
  std::vector<VariantPair> out;
  const auto& toks = entry.definition;
  const std::size_t n = std::min(labels.size(), toks.size());
  std::size_t t = 0;
  while (t < n) {
    if (labels[t] != crf::Tag::I) {
      ++t;
      continue;
    }
    std::string formal;
    double score = 1.0;
    for (; t < n && labels[t] == crf::Tag::I; ++t) {
      if (!formal.empty()) formal += ' ';
      formal += toks[t].lower;
      if (t < marginals.size()) score = std::min(score, marginals[t][1]);
    }
    const std::string informal = to_lower(entry.headword);
    if (is_identity_pair(informal, formal)) continue;
    VariantPair p;
    p.informal = informal;
    p.formal = std::move(formal);
    p.score = score;
    p.method = Method::crf;
    p.iteration = iteration;
    p.source_entry = entry.entry_id;
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

bool needs_annotation(const DictEntry& e) {
  return std::any_of(e.definition.begin(), e.definition.end(),
                     [](const Token& t) { return t.upos == kSentinel; });
}

struct Tagged {
  crf::TagSequence confident;
  std::vector<crf::LabelScores> marginals;
  bool promote = false;
};

}  // namespace

SelfTrainResult self_train(std::vector<crf::LabeledEntry> gold, const Corpus& unlabeled,
                           const SelfTrainConfig& config) {
  config.validate();
  if (gold.empty()) throw DataError("self-training needs at least one gold sequence");

  const FallbackAnnotator fallback;
  crf::annotate_labeled(gold, fallback);
  const bool annotate_pool =
      std::any_of(unlabeled.entries.begin(), unlabeled.entries.end(), needs_annotation);
  const Corpus pool = annotate_pool ? annotate(unlabeled, fallback) : unlabeled;

  crf::TrainConfig train_cfg = config.train;
  train_cfg.window = config.window;

  std::vector<crf::LabeledSequence> X = crf::to_sequences(gold, config.window);
  std::vector<std::size_t> U;  // indices into pool.entries
  std::vector<crf::FeatureSet> pool_features(pool.entries.size());
  for (std::size_t i = 0; i < pool.entries.size(); ++i) {
    if (pool.entries[i].definition.empty()) continue;
    pool_features[i] = crf::extract_features(pool.entries[i], config.window);
    U.push_back(i);
  }

  SelfTrainResult result;
  std::set<std::pair<std::string, std::string>> seen_pairs;

  if (config.max_iterations == 0) {
    result.model = crf::train(X, train_cfg, config.exec);
    return result;
  }

  for (int it = 1; it <= config.max_iterations; ++it) {
    IterationTrace trace;
    trace.iteration = it;
    trace.training_size = X.size();
    result.model = crf::train(X, train_cfg, config.exec);
    trace.objective = result.model.info.objective;
    trace.optimizer_iterations = result.model.info.iterations;

    std::vector<Tagged> tagged(U.size());
    const crf::CrfModel& model = result.model;
    const double tau = config.confidence_tau;
    for_each_index(U.size(), config.exec, [&](std::size_t k) {
      const auto& feats = pool_features[U[k]];
      const auto path = crf::viterbi_decode(model, feats);
      auto& out = tagged[k];
      out.marginals = crf::marginals(model, feats);
      out.confident.assign(feats.size(), crf::Tag::O);
      for (std::size_t t = 0; t < feats.size(); ++t) {
        if (path.labels[t] == crf::Tag::I && out.marginals[t][1] > tau) {
          out.confident[t] = crf::Tag::I;
          out.promote = true;
        }
      }
    });

    std::vector<std::size_t> remaining;
    for (std::size_t k = 0; k < U.size(); ++k) {
      const auto& tg = tagged[k];
      if (!tg.promote) {
        remaining.push_back(U[k]);
        continue;
      }
      const DictEntry& entry = pool.entries[U[k]];
      X.push_back({pool_features[U[k]], tg.confident});
      SilverRecord rec;
      rec.entry_id = entry.entry_id;
      rec.iteration = it;
      rec.labels = tg.confident;
      for (const auto& m : tg.marginals) rec.p_inside.push_back(m[1]);
      result.silver.push_back(std::move(rec));
      trace.promoted_entries.push_back(entry.entry_id);
      for (auto& p : pairs_from_tagging(entry, tg.confident, tg.marginals, it)) {
        if (!seen_pairs.emplace(p.informal, p.formal).second) continue;
        result.pairs.push_back(std::move(p));
        ++trace.new_pairs;
      }
    }
    trace.promoted = trace.promoted_entries.size();
    U = std::move(remaining);
    trace.remaining = U.size();
    trace.cumulative_pairs = result.pairs.size();
    const bool stalled = trace.promoted == 0;
    if (stalled) trace.note = "early stop: no confident entries";
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
    rec["training_size"] = t.training_size;
    rec["promoted"] = t.promoted;
    rec["remaining"] = t.remaining;
    rec["new_pairs"] = t.new_pairs;
    rec["cumulative_pairs"] = t.cumulative_pairs;
    rec["objective"] = t.objective;
    rec["optimizer_iterations"] = t.optimizer_iterations;
    rec["promoted_entries"] = t.promoted_entries;
    if (!t.note.empty()) rec["note"] = t.note;
    out += rec.dump();
    out += '\n';
  }
  return out;
}

}  // namespace spellvar::selftrain
