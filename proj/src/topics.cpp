#include "toprorec/topics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace toprorec {

using nlohmann::json;

const InterestTopic* TopicSet::find(TopicId id) const {
  for (const auto& t : topics) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

bool keyword_before(const WeightedKeyword& a, const WeightedKeyword& b) {
  if (a.weight != b.weight) return a.weight > b.weight;
  return a.word < b.word;
}

void normalize_topic(InterestTopic& topic, std::uint32_t gamma) {
  const std::string where = "topic " + std::to_string(topic.id);
  if (topic.keywords.empty()) throw ValidationError(where + ": empty keyword list");
  std::set<std::string_view> seen;
  for (const auto& k : topic.keywords) {
    if (k.word.empty()) throw ValidationError(where + ": empty keyword");
    if (!std::isfinite(k.weight) || k.weight < 0.0) {
      throw ValidationError(where + ": keyword '" + k.word + "' has an invalid weight");
    }
    if (!seen.insert(k.word).second) throw ValidationError(where + ": duplicate keyword '" + k.word + "'");
  }
  std::stable_sort(topic.keywords.begin(), topic.keywords.end(), keyword_before);
  if (topic.keywords.size() > gamma) topic.keywords.resize(gamma);
}

void validate_topic_set(TopicSet& set) {
  if (set.h < 1) throw ValidationError("topics: h must be >= 1");
  if (set.gamma < 1) throw ValidationError("topics: gamma must be >= 1");
  if (set.topics.size() > set.h) throw ValidationError("topics: more topics than h");
  std::set<TopicId> ids;
  for (auto& t : set.topics) {
    if (t.id < 1 || t.id > set.h) throw ValidationError("topics: id " + std::to_string(t.id) + " outside 1..h");
    if (!ids.insert(t.id).second) throw ValidationError("topics: duplicate id " + std::to_string(t.id));
    normalize_topic(t, set.gamma);
  }
}

TopicSet parse_topics(std::string_view text, std::optional<std::uint32_t> gamma_override) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("topics: ") + e.what());
  }
  TopicSet set;
  try {
    set.h = j.at("h").get<std::uint32_t>();
    set.gamma = j.at("gamma").get<std::uint32_t>();
    for (const auto& jt : j.at("topics")) {
      InterestTopic t;
      t.id = jt.at("id").get<TopicId>();
      for (const auto& jk : jt.at("keywords")) {
        t.keywords.push_back({jk.at("w").get<std::string>(), jk.at("score").get<double>()});
      }
      set.topics.push_back(std::move(t));
    }
    if (j.contains("model")) {
      for (const auto& [k, v] : j.at("model").items()) set.provenance[k] = v.get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("topics: ") + e.what());
  }
  if (gamma_override) {
    if (*gamma_override < 1) throw ValidationError("topics: gamma must be >= 1");
    set.gamma = std::min(set.gamma, *gamma_override);
  }
  validate_topic_set(set);
  return set;
}

TopicSet import_topics(const std::filesystem::path& path, std::optional<std::uint32_t> gamma_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_topics(ss.str(), gamma_override);
}

std::string export_topics(const TopicSet& set) {
  json topics = json::array();
  for (const auto& t : set.topics) {
    json kws = json::array();
    for (const auto& k : t.keywords) kws.push_back({{"w", k.word}, {"score", k.weight}});
    topics.push_back({{"id", t.id}, {"keywords", std::move(kws)}});
  }
  json doc = {{"h", set.h}, {"gamma", set.gamma}, {"topics", std::move(topics)}};
  if (!set.provenance.empty()) doc["model"] = set.provenance;
  return doc.dump(1) + "\n";
}

}  // namespace toprorec
