#pragma once

// Small CRF problems with known structure, shared by the unit tests and the
// acceptance runner.

#include <string>
#include <vector>

#include "spellvar/crf.hpp"
#include "spellvar/random.hpp"

namespace toy {

// Random scores in [-2, 2) for an n-position lattice.
inline spellvar::crf::Lattice random_lattice(spellvar::Rng& rng, std::size_t n) {
  spellvar::crf::Lattice lat;
  lat.emissions.resize(n);
  for (auto& e : lat.emissions) e = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
  for (auto& row : lat.transitions) row = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
  return lat;
}

// Random compiled data: `features` ids, a few active per position, random tags.
inline spellvar::crf::CompiledData random_data(spellvar::Rng& rng, std::size_t features,
                                               std::size_t sequences) {
  spellvar::crf::CompiledData data;
  for (std::size_t f = 0; f < features; ++f) data.feature_names.push_back("f" + std::to_string(f));
  for (std::size_t s = 0; s < sequences; ++s) {
    spellvar::crf::CompiledSequence seq;
    const auto len = 1 + rng.below(6);
    for (std::uint64_t t = 0; t < len; ++t) {
      std::vector<std::uint32_t> active;
      const auto k = 1 + rng.below(3);
      for (std::uint64_t j = 0; j < k; ++j) active.push_back(static_cast<std::uint32_t>(rng.below(features)));
      seq.features.push_back(active);
      seq.labels.push_back(static_cast<spellvar::crf::Tag>(rng.below(2)));
    }
    data.sequences.push_back(std::move(seq));
  }
  return data;
}

inline std::vector<double> random_weights(spellvar::Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  for (auto& x : w) x = rng.uniform(-1, 1);
  return w;
}

// Sequences where a token is I exactly when it is one of the target words.
// Every position also carries a handful of irrelevant random features.
inline std::vector<spellvar::crf::LabeledSequence> separable(spellvar::Rng& rng, std::size_t count) {
  const std::vector<std::string> targets{"ur", "m8", "gr8", "pls", "thx"};
  const std::vector<std::string> fillers{"another", "way", "of", "saying", "a", "word", "for", "the"};
  std::vector<spellvar::crf::LabeledSequence> out;
  for (std::size_t s = 0; s < count; ++s) {
    spellvar::crf::LabeledSequence seq;
    const auto len = 3 + rng.below(6);
    for (std::uint64_t t = 0; t < len; ++t) {
      const bool inside = rng.below(4) == 0;
      const std::string word = inside ? rng.pick(targets) : rng.pick(fillers);
      std::vector<std::string> feats{"bias", "word.lower=" + word};
      for (int k = 0; k < 4; ++k) feats.push_back("noise=" + std::to_string(rng.below(30)));
      seq.features.push_back(std::move(feats));
      seq.labels.push_back(inside ? spellvar::crf::Tag::I : spellvar::crf::Tag::O);
    }
    out.push_back(std::move(seq));
  }
  return out;
}

inline double training_accuracy(const spellvar::crf::CrfModel& model,
                                const std::vector<spellvar::crf::LabeledSequence>& data) {
  std::size_t right = 0, total = 0;
  for (const auto& seq : data) {
    const auto decoded = spellvar::crf::viterbi_decode(model, seq.features);
    for (std::size_t t = 0; t < seq.labels.size(); ++t) {
      right += decoded.labels[t] == seq.labels[t];
      ++total;
    }
  }
  return static_cast<double>(right) / static_cast<double>(total);
}

inline double weight_norm(const spellvar::crf::CrfModel& model) {
  double s = 0.0;
  for (const auto& [name, w] : model.state_weights) s += w[0] * w[0] + w[1] * w[1];
  for (const auto& row : model.transitions) s += row[0] * row[0] + row[1] * row[1];
  return std::sqrt(s);
}

}  // namespace toy
