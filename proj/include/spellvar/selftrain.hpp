#pragma once

// Self-training loop around the CRF: train on gold plus frozen silver data,
// tag the unlabeled pool, promote confidently tagged entries, repeat. Also
// random hyperparameter search with k-fold cross-validation.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spellvar/corpus.hpp"
#include "spellvar/crf.hpp"
#include "spellvar/pairs.hpp"
#include "spellvar/parallel.hpp"

namespace spellvar::selftrain {

struct SelfTrainConfig {
  int max_iterations = 5;
  double confidence_tau = 0.9;
  int window = 3;  // overrides train.window
  crf::TrainConfig train;
  Execution exec = Execution::parallel;

  void validate() const;
};

struct SearchSpace {
  std::pair<double, double> l1_range{0.01, 10.0};
  std::pair<double, double> l2_range{0.001, 1.0};
  int trials = 50;
  int folds = 3;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrialResult {
  double l1 = 0.0;
  double l2 = 0.0;
  std::vector<double> fold_f1;
  double mean_f1 = 0.0;
};

struct SearchResult {
  double best_l1 = 0.0;
  double best_l2 = 0.0;
  std::vector<double> fold_scores;  // of the best trial
  double best_mean_f1 = 0.0;
  std::vector<TrialResult> trials;  // in sampling order
};

// Token-level F1 on label I. A fold with no gold and no predicted I tokens
// scores 1.
double token_f1(const std::vector<crf::TagSequence>& gold,
                const std::vector<crf::TagSequence>& predicted);

// Throws ConfigError when there are fewer sequences than folds.
SearchResult random_search(const std::vector<crf::LabeledSequence>& gold, const SearchSpace& space,
                           const crf::TrainConfig& base = {}, Execution exec = Execution::parallel);

// One pair per maximal run of I tokens: (headword, run lowers joined by
// spaces), scored by the smallest P(I) in the run. Identity pairs are dropped.
std::vector<VariantPair> pairs_from_tagging(const DictEntry& entry, const crf::TagSequence& labels,
                                            const std::vector<crf::LabelScores>& marginals,
                                            int iteration = 0);

struct SilverRecord {
  std::string entry_id;
  int iteration = 0;
  crf::TagSequence labels;
  std::vector<double> p_inside;  // marginal P(I) per token at promotion time
};

struct IterationTrace {
  int iteration = 0;
  std::size_t training_size = 0;  // |X| the model was trained on
  std::size_t promoted = 0;
  std::size_t remaining = 0;  // |U| after promotion
  std::size_t new_pairs = 0;
  std::size_t cumulative_pairs = 0;
  double objective = 0.0;
  int optimizer_iterations = 0;
  std::vector<std::string> promoted_entries;
  std::string note;
};

struct SelfTrainResult {
  crf::CrfModel model;  // the last model trained
  std::vector<VariantPair> pairs;
  std::vector<IterationTrace> trace;
  std::vector<SilverRecord> silver;
};

// Entries without POS annotation (gold or unlabeled) go through the fallback
// annotator first.
SelfTrainResult self_train(std::vector<crf::LabeledEntry> gold, const Corpus& unlabeled,
                           const SelfTrainConfig& config);

std::string format_trace_jsonl(const std::vector<IterationTrace>& trace);

}  // namespace spellvar::selftrain
