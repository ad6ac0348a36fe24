#pragma once

#include <filesystem>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace toprorec {

struct CleaningConfig {
  std::unordered_set<std::string> stop_words;
  // ECMAScript regexes matched against the lowercased description. Matches are
  // cut out and act as phrase boundaries.
  std::vector<std::string> blacklist;
  bool stemming = false;
  // Longest contiguous n-gram emitted as a keyword. 1 = unigrams only.
  int ngram_max = 2;

  static CleaningConfig defaults();
};

// Bundled English stop-word list.
const std::vector<std::string>& default_stop_words();
// Shipped technical-content patterns: class types, delivery modes, prerequisite clauses.
const std::vector<std::string>& default_blacklist();

// Reads a JSON cleaning config. Missing keys fall back to defaults;
// "stop_words_path" is resolved relative to the config file.
CleaningConfig load_cleaning_config(const std::filesystem::path& path);
std::vector<std::string> load_stop_words(const std::filesystem::path& path);

class TextCleaner {
 public:
  explicit TextCleaner(CleaningConfig config);

  // Keywords in order of appearance, duplicates retained (unigrams of a phrase
  // first, then its bigrams, and so on).
  [[nodiscard]] std::vector<std::string> extract(std::string_view raw) const;

  // The cleaned description as a keyword set.
  [[nodiscard]] std::set<std::string> clean(std::string_view raw) const;

  [[nodiscard]] const CleaningConfig& config() const noexcept { return config_; }

 private:
  CleaningConfig config_;
  std::regex blacklist_;
  bool has_blacklist_ = false;
};

std::set<std::string> clean_description(std::string_view raw, const CleaningConfig& config);

}  // namespace toprorec
