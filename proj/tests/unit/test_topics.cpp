#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "oracles.hpp"
#include "synthetic.hpp"
#include "toprorec/snapshot.hpp"
#include "toprorec/topic_model.hpp"
#include "toprorec/topics.hpp"

using namespace toprorec;

namespace {

Course with_keywords(const std::string& id, std::map<std::string, std::uint32_t> keywords) {
  Course c;
  c.id = CourseId(id);
  c.keywords = std::move(keywords);
  return c;
}

InterestTopic topic(TopicId id, std::vector<WeightedKeyword> kws) { return {id, std::move(kws)}; }

TermMatrix two_group_matrix() {
  std::vector<Course> courses;
  const std::vector<std::string> a = {"alpha", "beta", "gamma", "delta"};
  const std::vector<std::string> b = {"one", "two", "three", "four"};
  for (int i = 0; i < 6; ++i) {
    courses.push_back(with_keywords("a" + std::to_string(i), {{"ocean", 3}, {a[i % 4], 2}, {a[(i + 1) % 4], 1}}));
    courses.push_back(with_keywords("b" + std::to_string(i), {{"music", 4}, {b[i % 4], 1}, {b[(i + 2) % 4], 3}}));
  }
  return vectorize(courses);
}

}  // namespace

TEST_CASE("vectorize two courses") {
  const std::vector<Course> courses = {with_keywords("1", {{"a", 1}, {"b", 1}}),
                                       with_keywords("2", {{"b", 1}, {"c", 1}})};
  const auto m = vectorize(courses);
  CHECK(m.vocabulary() == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(m.rows() == 2);
  const std::vector<std::vector<std::uint32_t>> dense = {{1, 1, 0}, {0, 1, 1}};
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 3; ++c) CHECK(m.at(r, c) == dense[r][c]);
  }
}

TEST_CASE("vectorize rejects an empty corpus") {
  CHECK_THROWS_AS(vectorize(std::vector<Course>{}), ValidationError);
  CHECK_THROWS_AS(vectorize(std::vector<Course>{with_keywords("x", {})}), ValidationError);
}

TEST_CASE("vectorize column sums equal brute-force term counts") {
  std::mt19937_64 rng(5);
  const TextCleaner cleaner(CleaningConfig::defaults());
  const std::vector<std::string> words = {"ocean",  "marine", "policy", "data",    "model", "the",
                                          "and",    "soil",   "music",  "theory",  ".",     ","};
  std::vector<Course> courses;
  std::map<std::string, std::uint64_t> expected;
  for (int c = 0; c < 50; ++c) {
    std::string text;
    for (int i = 0; i < 12; ++i) text += words[rng() % words.size()] + " ";
    Course course;
    course.id = CourseId("c" + std::to_string(c));
    for (const auto& w : cleaner.extract(text)) {
      ++course.keywords[w];
      ++expected[w];
    }
    courses.push_back(std::move(course));
  }
  const auto m = vectorize(courses);
  const auto sums = m.column_sums();
  REQUIRE(m.cols() == expected.size());
  std::size_t i = 0;
  for (const auto& [w, n] : expected) {
    CHECK(m.vocabulary()[i] == w);
    CHECK(sums[i] == n);
    ++i;
  }
}

TEST_CASE("clusterer separates disjoint word groups") {
  const auto m = two_group_matrix();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto a = cluster(m, TopicModelConfig{.h = 2, .gamma = 5, .seed = seed});
    CAPTURE(seed);
    CHECK(a.cluster_count == 2);
    for (std::size_t r = 0; r < m.rows(); r += 2) {
      CHECK(a.labels[r] == a.labels[0]);
      CHECK(a.labels[r + 1] == a.labels[1]);
    }
    CHECK(a.labels[0] != a.labels[1]);
  }
}

TEST_CASE("h equal to the course count gives singletons") {
  const auto m = two_group_matrix();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto a = cluster(m, TopicModelConfig{.h = static_cast<std::uint32_t>(m.rows()), .seed = seed});
    std::set<std::uint32_t> labels(a.labels.begin(), a.labels.end());
    CHECK(labels.size() == m.rows());
    CHECK(labels.count(kOutlier) == 0);
  }
  // duplicate rows still end up alone
  const std::vector<Course> same = {with_keywords("1", {{"x", 1}}), with_keywords("2", {{"x", 1}}),
                                    with_keywords("3", {{"x", 1}})};
  const auto a = cluster(vectorize(same), TopicModelConfig{.h = 3});
  CHECK(std::set<std::uint32_t>(a.labels.begin(), a.labels.end()).size() == 3);
}

TEST_CASE("clustering is seed-deterministic and rejects infeasible h") {
  const auto m = two_group_matrix();
  const TopicModelConfig config{.h = 4, .seed = 9};
  CHECK(cluster(m, config) == cluster(m, config));
  CHECK_THROWS_AS(cluster(m, TopicModelConfig{.h = 13}), InfeasibleError);
  CHECK_THROWS_AS(cluster(m, TopicModelConfig{.h = 0}), InfeasibleError);
  CHECK_THROWS_AS(cluster(m, TopicModelConfig{.h = 2, .clusterer = "hdbscan"}), std::invalid_argument);
}

TEST_CASE("courses without keywords are outliers") {
  const std::vector<Course> courses = {with_keywords("1", {{"x", 1}}), with_keywords("2", {}),
                                       with_keywords("3", {{"y", 1}})};
  const auto a = cluster(vectorize(courses), TopicModelConfig{.h = 2});
  CHECK(a.labels[1] == kOutlier);
  CHECK(a.labels[0] != kOutlier);
  CHECK(a.labels[2] != kOutlier);
  CHECK_THROWS_AS(cluster(vectorize(courses), TopicModelConfig{.h = 3}), InfeasibleError);
}

TEST_CASE("c-TF-IDF single cluster hand evaluation") {
  const std::vector<Course> courses = {with_keywords("1", {{"p", 3}, {"q", 1}}), with_keywords("2", {{"p", 1}})};
  const auto m = vectorize(courses);
  const ClusterAssignment a{1, {1, 1}};
  const auto scores = ctfidf_scores(a, m);
  CHECK(scores[0][0] == doctest::Approx(4.0 * std::log(2.25)).epsilon(1e-12));
  CHECK(scores[0][1] == doctest::Approx(std::log(6.0)).epsilon(1e-12));
  const auto topics = ctfidf_keywords(a, m, 5);
  REQUIRE(topics.size() == 1);
  CHECK(topics[0].keywords[0].word == "p");
}

TEST_CASE("c-TF-IDF: a term exclusive to one cluster scores zero elsewhere") {
  const std::vector<Course> courses = {with_keywords("1", {{"only", 2}, {"both", 1}}),
                                       with_keywords("2", {{"both", 1}, {"other", 1}})};
  const auto m = vectorize(courses);
  const auto scores = ctfidf_scores(ClusterAssignment{2, {1, 2}}, m);
  const auto only = std::find(m.vocabulary().begin(), m.vocabulary().end(), "only") - m.vocabulary().begin();
  CHECK(scores[0][only] > 0.0);
  CHECK(scores[1][only] == 0.0);
  for (const auto& t : ctfidf_keywords(ClusterAssignment{2, {1, 2}}, m, 10)) {
    if (t.id == 2) {
      for (const auto& k : t.keywords) CHECK(k.word != "only");
    }
  }
}

TEST_CASE("c-TF-IDF ties break lexicographically and truncate to gamma") {
  const std::vector<Course> courses = {with_keywords("1", {{"zeta", 1}, {"beta", 1}, {"alpha", 1}, {"mu", 1}})};
  const auto topics = ctfidf_keywords(ClusterAssignment{1, {1}}, vectorize(courses), 3);
  REQUIRE(topics.size() == 1);
  REQUIRE(topics[0].keywords.size() == 3);
  CHECK(topics[0].keywords[0].word == "alpha");
  CHECK(topics[0].keywords[1].word == "beta");
  CHECK(topics[0].keywords[2].word == "mu");
}

TEST_CASE("c-TF-IDF matches the direct formula on a 3-cluster corpus") {
  std::mt19937_64 rng(17);
  std::vector<std::vector<std::string>> docs;
  std::vector<Course> courses;
  std::vector<std::uint32_t> labels;
  for (int d = 0; d < 15; ++d) {
    std::vector<std::string> tokens;
    Course c;
    c.id = CourseId("d" + std::to_string(d));
    for (int i = 0; i < 6; ++i) {
      auto w = "t" + std::to_string(rng() % 9);
      tokens.push_back(w);
      ++c.keywords[w];
    }
    docs.push_back(tokens);
    courses.push_back(std::move(c));
    labels.push_back(static_cast<std::uint32_t>(d % 3 + 1));
  }
  const auto m = vectorize(courses);
  const auto expected = oracle::ctfidf(docs, labels, 3);
  const auto got = ctfidf_keywords(ClusterAssignment{3, labels}, m, 4);
  REQUIRE(got.size() == 3);
  for (const auto& t : got) {
    std::vector<WeightedKeyword> all;
    for (const auto& [w, s] : expected.at(t.id)) all.push_back({w, s});
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
      if (std::abs(a.weight - b.weight) > 1e-12 * std::max(a.weight, b.weight)) return a.weight > b.weight;
      return a.word < b.word;
    });
    REQUIRE(t.keywords.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(t.keywords[i].word == all[i].word);
      CHECK(t.keywords[i].weight == doctest::Approx(all[i].weight).epsilon(1e-9));
    }
  }
}

TEST_CASE("topic validation") {
  InterestTopic t = topic(1, {{"b", 1.0}, {"a", 2.0}, {"c", 1.0}});
  normalize_topic(t, 2);
  CHECK(t.keywords == std::vector<WeightedKeyword>{{"a", 2.0}, {"b", 1.0}});
  InterestTopic empty = topic(1, {});
  CHECK_THROWS_AS(normalize_topic(empty, 5), ValidationError);
  InterestTopic dup = topic(1, {{"a", 1.0}, {"a", 2.0}});
  CHECK_THROWS_AS(normalize_topic(dup, 5), ValidationError);
  InterestTopic neg = topic(1, {{"a", -1.0}});
  CHECK_THROWS_AS(normalize_topic(neg, 5), ValidationError);
  InterestTopic nan = topic(1, {{"a", std::nan("")}});
  CHECK_THROWS_AS(normalize_topic(nan, 5), ValidationError);

  TopicSet set{2, 5, {topic(1, {{"x", 1}}), topic(3, {{"y", 1}})}, {}};
  CHECK_THROWS_AS(validate_topic_set(set), ValidationError);
  TopicSet twice{2, 5, {topic(1, {{"x", 1}}), topic(1, {{"y", 1}})}, {}};
  CHECK_THROWS_AS(validate_topic_set(twice), ValidationError);
  TopicSet crowded{1, 5, {topic(1, {{"x", 1}}), topic(1, {{"y", 1}})}, {}};
  CHECK_THROWS_AS(validate_topic_set(crowded), ValidationError);
}

TEST_CASE("topics import: empty keyword list, truncation, malformed") {
  CHECK_THROWS_AS(parse_topics(R"({"h": 1, "gamma": 20, "topics": [{"id": 1, "keywords": []}]})"), ValidationError);
  CHECK_THROWS_AS(parse_topics("{"), ParseError);
  CHECK_THROWS_AS(parse_topics(R"({"h": 1, "topics": []})"), ParseError);
  CHECK_THROWS_AS(parse_topics(R"({"h": 1, "gamma": 2, "topics": [{"id": 1, "keywords": [{"w": 3}]}]})"),
                  ParseError);

  nlohmann::json j = {{"h", 1}, {"gamma", 20}};
  nlohmann::json kws = nlohmann::json::array();
  for (int i = 0; i < 25; ++i) kws.push_back({{"w", "k" + std::to_string(i)}, {"score", i}});
  j["topics"] = {{{"id", 1}, {"keywords", kws}}};
  const auto set = parse_topics(j.dump());
  REQUIRE(set.topics[0].keywords.size() == 20);
  CHECK(set.topics[0].keywords.front().word == "k24");
  CHECK(set.topics[0].keywords.back().word == "k5");
  CHECK(parse_topics(j.dump(), 3).topics[0].keywords.size() == 3);
}

TEST_CASE("topics export round-trips and is byte-stable") {
  TopicSet one{1, 20, {topic(1, {{"marine biology", 0.1 + 0.2}, {"ocean", 1.0 / 3.0}})}, {{"seed", "1"}}};
  validate_topic_set(one);
  CHECK(parse_topics(export_topics(one)) == one);

  std::mt19937_64 rng(2);
  TopicSet thirty{30, 20, {}, {}};
  for (TopicId id = 1; id <= 30; ++id) {
    InterestTopic t{id, {}};
    for (int k = 0; k < 20; ++k) {
      t.keywords.push_back({"w" + std::to_string(id) + "_" + std::to_string(k),
                            std::uniform_real_distribution<double>(0.0, 50.0)(rng)});
    }
    thirty.topics.push_back(std::move(t));
  }
  validate_topic_set(thirty);
  const auto bytes = export_topics(thirty);
  const auto back = parse_topics(bytes);
  CHECK(back == thirty);
  CHECK(back.topics.size() == 30);
  CHECK(export_topics(back) == bytes);

  const auto dir = std::filesystem::temp_directory_path() / "toprorec_topics_io";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "t.json") << bytes;
  CHECK(import_topics(dir / "t.json") == thirty);
  CHECK_THROWS_AS(import_topics(dir / "nope.json"), ParseError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("mining a small catalog") {
  const auto cat = parse_catalog_json(testing::campus_catalog_json({.courses = 400,
                                                                         .linked_courses = 300,
                                                                         .edges = 600,
                                                                         .hub_degree = 6,
                                                                         .seed = 4}),
                                      CleaningConfig::defaults());
  const TopicModelConfig config{.h = 8, .gamma = 6, .seed = 3};
  const auto topics = mine_topics(cat, config);
  CHECK(topics.topics.size() <= 8);
  CHECK(topics.topics.size() >= 1);
  for (const auto& t : topics.topics) {
    CHECK(t.keywords.size() >= 1);
    CHECK(t.keywords.size() <= 6);
    CHECK(std::is_sorted(t.keywords.begin(), t.keywords.end(), keyword_before));
  }
  CHECK(export_topics(mine_topics(cat, config)) == export_topics(topics));
  CHECK(topics.provenance.at("clusterer") == "spherical-kmeans");
  const auto single = mine_topics(cat, TopicModelConfig{.h = 1, .gamma = 20});
  CHECK(single.topics.size() == 1);
  CHECK(single.topics[0].keywords.size() == 20);
}
