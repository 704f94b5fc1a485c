#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace spellvar {

enum class Method { baseline, bootstrap, crf };

std::string_view to_string(Method m);
Method parse_method(std::string_view s);

// An extracted (informal, formal) spelling-variant tuple.
struct VariantPair {
  std::string informal;
  std::string formal;
  double score = 0.0;
  Method method = Method::baseline;
  int iteration = 0;
  std::string source_entry;
  std::string rule_id;  // baseline only

  // Provenance column of the TSV: rule id for baseline, iteration otherwise.
  std::string provenance() const;
};

// Case-insensitive identity check used to drop degenerate pairs.
bool is_identity_pair(std::string_view informal, std::string_view formal);

// Columns: informal, formal, score, method, rule_id/iteration, entry_id.
// The first line is a header.
std::string format_pairs_tsv(const std::vector<VariantPair>& pairs);
void write_pairs_tsv(const std::filesystem::path& path, const std::vector<VariantPair>& pairs);

// Accepts the six-column format above or a bare "informal TAB formal" file.
// A header row starting with "informal" is skipped.
std::vector<VariantPair> parse_pairs_tsv(std::string_view text);
std::vector<VariantPair> load_pairs_tsv(const std::filesystem::path& path);

// "informal TAB formal" seed tuples, lowercased.
std::vector<VariantPair> load_seeds(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace spellvar
