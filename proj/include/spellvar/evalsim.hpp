#pragma once

// Spelling-variant similarity: does the formal word rank among the top-k
// cosine neighbors of the informal word? Plus Pearson correlation.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "spellvar/pairs.hpp"
#include "spellvar/parallel.hpp"

namespace spellvar::evalsim {

class EmbeddingTable {
 public:
  // Throws DataError on a dimension mismatch or a zero vector.
  void add(std::string word, std::vector<float> vec);

  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  bool contains(std::string_view word) const;
  std::optional<std::size_t> index_of(std::string_view word) const;

  const std::string& word(std::size_t i) const { return words_[i]; }
  std::span<const float> vector(std::size_t i) const;
  double norm(std::size_t i) const { return norms_[i]; }
  double cosine(std::size_t a, std::size_t b) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<float> data_;  // row-major, size() x dimension()
  std::vector<double> norms_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Text format: optional "count dimension" header, then "word v1 ... vd".
// Duplicate words keep their first vector. A file without vectors is an error.
EmbeddingTable parse_embeddings(std::string_view text);
EmbeddingTable load_embeddings(const std::filesystem::path& path);

struct Rank {
  std::optional<std::size_t> rank;  // 1-based
  std::string miss_reason;
};

// 1 + number of other words (informal excluded) strictly closer to the
// informal word than the formal word is. Exact ties do not count.
Rank rank_of_formal(const EmbeddingTable& table, std::string_view informal, std::string_view formal,
                    Execution exec = Execution::serial);

struct PairRank {
  std::string informal;
  std::string formal;
  std::optional<std::size_t> rank;
  std::string miss_reason;
};

struct EvalReport {
  std::size_t matched_pairs = 0;
  std::vector<std::size_t> ks;
  std::map<std::size_t, std::size_t> hits;
  std::map<std::size_t, double> accuracy;
  std::vector<PairRank> per_pair;  // every distinct input pair, input order
};

// Pairs are lowercased and deduplicated. A pair is matched when its formal
// word is in `formal_vocab` and both words are in the table. Throws DataError
// "no evaluable pairs" when nothing matches.
EvalReport evaluate_pairs(const EmbeddingTable& table, const std::vector<VariantPair>& pairs,
                          const std::set<std::string>& formal_vocab, std::vector<std::size_t> ks,
                          Execution exec = Execution::parallel);

std::string format_report_tsv(const EvalReport& report);
std::string format_summary(const EvalReport& report, std::string_view label);

std::set<std::string> parse_vocab(std::string_view text);
std::set<std::string> load_vocab(const std::filesystem::path& path);

// Sample correlation coefficient. Throws std::invalid_argument on length
// mismatch, fewer than two points or zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

}  // namespace spellvar::evalsim
