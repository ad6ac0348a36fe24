#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toprorec/common.hpp"

namespace toprorec {

struct WeightedKeyword {
  std::string word;
  double weight = 0.0;

  friend bool operator==(const WeightedKeyword&, const WeightedKeyword&) = default;
};

// A mined interest topic: keywords by descending weight, at most gamma of them.
struct InterestTopic {
  TopicId id = 0;
  std::vector<WeightedKeyword> keywords;

  friend bool operator==(const InterestTopic&, const InterestTopic&) = default;
};

struct TopicSet {
  std::uint32_t h = 0;
  std::uint32_t gamma = 0;
  std::vector<InterestTopic> topics;
  // Free-form description of how the topics were produced (clusterer, seed,
  // weighting). Exported under "model"; never used for scoring.
  std::map<std::string, std::string> provenance;

  [[nodiscard]] const InterestTopic* find(TopicId id) const;

  friend bool operator==(const TopicSet&, const TopicSet&) = default;
};

// Keyword order used everywhere: weight descending, then keyword ascending.
bool keyword_before(const WeightedKeyword& a, const WeightedKeyword& b);

// Sorts keywords and truncates to gamma. Throws ValidationError on an empty
// keyword list, duplicate keywords, or negative/non-finite weights.
void normalize_topic(InterestTopic& topic, std::uint32_t gamma);

// Checks id range, id uniqueness and |topics| <= h, normalizing every topic.
void validate_topic_set(TopicSet& set);

// Topics JSON: {"h", "gamma", "topics": [{"id", "keywords": [{"w", "score"}]}]}
// with an optional "model" object. `gamma_override` further truncates.
TopicSet parse_topics(std::string_view text, std::optional<std::uint32_t> gamma_override = std::nullopt);
TopicSet import_topics(const std::filesystem::path& path,
                       std::optional<std::uint32_t> gamma_override = std::nullopt);
std::string export_topics(const TopicSet& set);

}  // namespace toprorec
