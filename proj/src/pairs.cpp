#include "spellvar/pairs.hpp"

#include <charconv>
#include <fstream>

#include <fmt/format.h>

#include "spellvar/corpus.hpp"
#include "spellvar/errors.hpp"

namespace spellvar {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::baseline: return "baseline";
    case Method::bootstrap: return "bootstrap";
    case Method::crf: return "crf";
  }
  return "unknown";
}

Method parse_method(std::string_view s) {
  if (s == "baseline") return Method::baseline;
  if (s == "bootstrap") return Method::bootstrap;
  if (s == "crf") return Method::crf;
  throw DataError(fmt::format("unknown method \"{}\"", s));
}

std::string VariantPair::provenance() const {
  if (method == Method::baseline) return rule_id;
  return std::to_string(iteration);
}

bool is_identity_pair(std::string_view informal, std::string_view formal) {
  return to_lower(informal) == to_lower(formal);
}

std::string format_pairs_tsv(const std::vector<VariantPair>& pairs) {
  std::string out = "informal\tformal\tscore\tmethod\tsource\tentry_id\n";
  for (const auto& p : pairs) {
    out += fmt::format("{}\t{}\t{:.6f}\t{}\t{}\t{}\n", p.informal, p.formal, p.score,
                       to_string(p.method), p.provenance(), p.source_entry);
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  out << content;
  if (!out) throw DataError(fmt::format("write failed for {}", path.string()));
}

void write_pairs_tsv(const std::filesystem::path& path, const std::vector<VariantPair>& pairs) {
  write_text_file(path, format_pairs_tsv(pairs));
}

std::vector<VariantPair> parse_pairs_tsv(std::string_view text) {
  std::vector<VariantPair> pairs;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(start, nl - start);
    start = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') continue;

    std::vector<std::string_view> cols;
    for (std::size_t pos = 0;;) {
      const auto tab = line.find('\t', pos);
      cols.push_back(line.substr(pos, tab == std::string_view::npos ? tab : tab - pos));
      if (tab == std::string_view::npos) break;
      pos = tab + 1;
    }
    if (cols.size() < 2) {
      throw DataError(fmt::format("line {}: expected at least 2 tab-separated columns", line_no));
    }
    if (cols[0] == "informal") continue;

    VariantPair p;
    p.informal = std::string(trim(cols[0]));
    p.formal = std::string(trim(cols[1]));
    if (p.informal.empty() || p.formal.empty()) {
      throw DataError(fmt::format("line {}: empty word in pair", line_no));
    }
    if (cols.size() >= 6) {
      const auto s = cols[2];
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), p.score);
      if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw DataError(fmt::format("line {}: bad score \"{}\"", line_no, s));
      }
      p.method = parse_method(cols[3]);
      if (p.method == Method::baseline) {
        p.rule_id = std::string(cols[4]);
      } else {
        std::from_chars(cols[4].data(), cols[4].data() + cols[4].size(), p.iteration);
      }
      p.source_entry = std::string(cols[5]);
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::vector<VariantPair> load_pairs_tsv(const std::filesystem::path& path) {
  try {
    return parse_pairs_tsv(read_file(path));
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::vector<VariantPair> load_seeds(const std::filesystem::path& path) {
  auto seeds = load_pairs_tsv(path);
  for (auto& s : seeds) {
    s.informal = to_lower(s.informal);
    s.formal = to_lower(s.formal);
    s.method = Method::bootstrap;
    s.score = 0.0;
  }
  return seeds;
}

}  // namespace spellvar
