#include "spellvar/evalsim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "spellvar/corpus.hpp"
#include "spellvar/errors.hpp"

namespace spellvar::evalsim {

void EmbeddingTable::add(std::string word, std::vector<float> vec) {
  if (words_.empty() && dim_ == 0) dim_ = vec.size();
  if (vec.size() != dim_ || dim_ == 0) {
    throw DataError(fmt::format("vector for \"{}\" has dimension {}, expected {}", word, vec.size(),
                                dim_));
  }
  if (index_.count(word)) return;
  double sq = 0.0;
  for (const float v : vec) sq += static_cast<double>(v) * static_cast<double>(v);
  if (!(sq > 0.0)) throw DataError(fmt::format("zero vector for \"{}\"", word));
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  data_.insert(data_.end(), vec.begin(), vec.end());
  norms_.push_back(std::sqrt(sq));
}

bool EmbeddingTable::contains(std::string_view word) const { return index_of(word).has_value(); }

std::optional<std::size_t> EmbeddingTable::index_of(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const float> EmbeddingTable::vector(std::size_t i) const {
  return {data_.data() + i * dim_, dim_};
}

double EmbeddingTable::cosine(std::size_t a, std::size_t b) const {
  const auto va = vector(a);
  const auto vb = vector(b);
  double dot = 0.0;
  for (std::size_t d = 0; d < dim_; ++d) dot += static_cast<double>(va[d]) * static_cast<double>(vb[d]);
  return dot / (norms_[a] * norms_[b]);
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

EmbeddingTable parse_embeddings(std::string_view text) {
  EmbeddingTable table;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  std::size_t expected_dim = 0;
  std::optional<std::size_t> declared_count;
  std::size_t rows = 0;

  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto parts = split_ws(line);
    if (parts.empty()) continue;

    if (line_no == 1 && parts.size() == 2) {
      std::size_t count = 0, dim = 0;
      if (parse_number(parts[0], count) && parse_number(parts[1], dim)) {
        if (dim == 0) throw DataError("line 1: header declares dimension 0");
        declared_count = count;
        expected_dim = dim;
        continue;
      }
    }
    if (parts.size() < 2) throw DataError(fmt::format("line {}: word without a vector", line_no));
    const std::size_t dim = parts.size() - 1;
    if (expected_dim == 0) expected_dim = dim;
    if (dim != expected_dim) {
      throw DataError(fmt::format("line {}: vector has dimension {}, expected {}", line_no, dim,
                                  expected_dim));
    }
    std::vector<float> vec(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      if (!parse_number(parts[d + 1], vec[d]) || !std::isfinite(vec[d])) {
        throw DataError(fmt::format("line {}: non-numeric component \"{}\"", line_no, parts[d + 1]));
      }
    }
    try {
      table.add(std::string(parts[0]), std::move(vec));
    } catch (const DataError& e) {
      throw DataError(fmt::format("line {}: {}", line_no, e.what()));
    }
    ++rows;
  }
  if (declared_count && *declared_count != rows) {
    throw DataError(fmt::format("header declares {} vectors but the file has {}", *declared_count, rows));
  }
  if (rows == 0) throw DataError("no vectors");
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  try {
    return parse_embeddings(read_file(path));
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

Rank rank_of_formal(const EmbeddingTable& table, std::string_view informal, std::string_view formal,
                    Execution exec) {
  const auto a = table.index_of(informal);
  const auto f = table.index_of(formal);
  if (!a) return {std::nullopt, fmt::format("informal word \"{}\" not in table", informal)};
  if (!f) return {std::nullopt, fmt::format("formal word \"{}\" not in table", formal)};

  const double target = table.cosine(*f, *a);
  const auto blocks = reduction_blocks(table.size());
  std::vector<std::size_t> better(blocks.size(), 0);
  for_each_index(blocks.size(), exec, [&](std::size_t b) {
    std::size_t count = 0;
    for (std::size_t v = blocks[b].begin; v < blocks[b].end; ++v) {
      if (v == *a) continue;
      if (table.cosine(v, *a) > target) ++count;
    }
    better[b] = count;
  });
  std::size_t rank = 1;
  for (const auto c : better) rank += c;
  return {rank, {}};
}

EvalReport evaluate_pairs(const EmbeddingTable& table, const std::vector<VariantPair>& pairs,
                          const std::set<std::string>& formal_vocab, std::vector<std::size_t> ks,
                          Execution exec) {
  if (ks.empty()) throw ConfigError("at least one k is required");
  for (const auto k : ks) {
    if (k < 1) throw ConfigError("every k must be >= 1");
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  EvalReport report;
  report.ks = ks;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& p : pairs) {
    PairRank pr{to_lower(p.informal), to_lower(p.formal), std::nullopt, {}};
    if (!seen.emplace(pr.informal, pr.formal).second) continue;
    report.per_pair.push_back(std::move(pr));
  }

  for_each_index(report.per_pair.size(), exec, [&](std::size_t i) {
    auto& pr = report.per_pair[i];
    if (!formal_vocab.count(pr.formal)) {
      pr.miss_reason = fmt::format("formal word \"{}\" not in formal vocabulary", pr.formal);
      return;
    }
    auto r = rank_of_formal(table, pr.informal, pr.formal, Execution::serial);
    pr.rank = r.rank;
    pr.miss_reason = std::move(r.miss_reason);
  });

  for (const auto k : ks) report.hits[k] = 0;
  for (const auto& pr : report.per_pair) {
    if (!pr.rank) continue;
    ++report.matched_pairs;
    for (const auto k : ks) {
      if (*pr.rank <= k) ++report.hits[k];
    }
  }
  if (report.matched_pairs == 0) throw DataError("no evaluable pairs");
  for (const auto k : ks) {
    report.accuracy[k] =
        static_cast<double>(report.hits[k]) / static_cast<double>(report.matched_pairs);
  }
  return report;
}

std::string format_report_tsv(const EvalReport& report) {
  std::string out = "informal\tformal\trank\tstatus\n";
  for (const auto& pr : report.per_pair) {
    if (pr.rank) {
      out += fmt::format("{}\t{}\t{}\tmatched\n", pr.informal, pr.formal, *pr.rank);
    } else {
      out += fmt::format("{}\t{}\t-\tmiss: {}\n", pr.informal, pr.formal, pr.miss_reason);
    }
  }
  return out;
}

std::string format_summary(const EvalReport& report, std::string_view label) {
  std::string out = fmt::format("{}: {} matched of {} pairs\n", label, report.matched_pairs,
                                report.per_pair.size());
  for (const auto k : report.ks) {
    out += fmt::format("  top {:<4} hits {:<6} accuracy {:.4f}\n", k, report.hits.at(k),
                       report.accuracy.at(k));
  }
  return out;
}

std::set<std::string> parse_vocab(std::string_view text) {
  std::set<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto word = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (!word.empty()) out.insert(to_lower(word));
  }
  return out;
}

std::set<std::string> load_vocab(const std::filesystem::path& path) {
  return parse_vocab(read_file(path));
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument(
        fmt::format("pearson: length mismatch ({} vs {})", xs.size(), ys.size()));
  }
  if (xs.size() < 2) throw std::invalid_argument("pearson: need at least two points");
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("pearson: zero variance");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace spellvar::evalsim
