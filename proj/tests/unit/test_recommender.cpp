#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "synthetic.hpp"
#include "toprorec/recommender.hpp"
#include "toprorec/reports.hpp"

using namespace toprorec;

namespace {

const TopicSelection kGolden{{2, 19, 21, 23, 30}};

TopicProgramMatrix rescaled(const TopicProgramMatrix& m, std::uint32_t k) {
  auto programs = m.programs();
  for (auto& p : programs) p.course_count *= k;
  std::vector<std::uint32_t> counts;
  for (std::size_t t = 0; t < m.topic_count(); ++t) {
    const auto row = m.topic_row(t);
    counts.insert(counts.end(), row.begin(), row.end());
  }
  return TopicProgramMatrix(m.topic_ids(), programs, counts);
}

std::vector<TopicId> random_selection(std::mt19937_64& rng, const TopicProgramMatrix& m, std::size_t size) {
  auto ids = m.topic_ids();
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(size);
  return ids;
}

}  // namespace

TEST_CASE("golden matrix fixture") {
  const auto m = testing::golden_matrix();
  CHECK(m.topic_count() == 30);
  CHECK(m.program_count() == 84);
  const auto ds = *m.program_index(ProgramId("data-science"));
  std::vector<std::uint32_t> cells;
  for (TopicId t : {2, 19, 21, 23, 30}) cells.push_back(m.count(*m.topic_index(t), ds));
  CHECK(cells == std::vector<std::uint32_t>{11, 19, 30, 42, 11});
  CHECK(m.programs()[ds].course_count == 21);
}

TEST_CASE("golden ranking") {
  const auto rec = recommend(kGolden, testing::golden_matrix(), 7);
  const std::vector<std::string> order = {"data-science",          "bioinformatics",           "industrial-engineering",
                                          "management-and-human-resources", "manufacturing-engineering",
                                          "industrial-technology", "computer-science"};
  const std::vector<std::uint64_t> pis = {113, 86, 546, 73, 585, 135, 822};
  const std::vector<double> rpis = {5.381, 5.375, 5.353, 5.214, 5.087, 5.000, 4.670};
  const std::vector<double> score = {100.0, 99.9, 99.5, 96.9, 94.5, 92.9, 86.8};
  REQUIRE(rec.entries.size() == 7);
  for (std::size_t i = 0; i < 7; ++i) {
    CAPTURE(i);
    CHECK(rec.entries[i].program.str() == order[i]);
    CHECK(rec.entries[i].pis == pis[i]);
    CHECK(std::abs(rec.entries[i].rpis - rpis[i]) <= 0.001);
    CHECK(std::abs(rec.entries[i].score - score[i]) <= 0.05);
    CHECK(round_score(rec.entries[i].score) == doctest::Approx(score[i]));
  }
  CHECK(rec.entries[0].score == 100.0);
}

TEST_CASE("golden explainability") {
  const auto m = testing::golden_matrix();
  const std::vector<ProgramId> programs = {ProgramId("statistics"), ProgramId("civil-engineering"),
                                           ProgramId("history"), ProgramId("management-and-human-resources")};
  const auto table = topic_scores(kGolden, m, programs);
  CHECK(table.normalizer == doctest::Approx(113.0 / 21.0));
  CHECK(std::abs(table.rows[0].aggregate - 0.859) <= 0.001);
  CHECK(std::abs(table.rows[1].aggregate - 0.481) <= 0.001);
  CHECK(std::abs(table.rows[2].aggregate - 0.136) <= 0.001);
  CHECK(table.rows[3].cells[1] == 0.0);
  CHECK(table.rows[3].raw[1] == 0.0);
  for (const auto& row : table.rows) {
    double sum = 0.0;
    for (double c : row.cells) sum += c;
    CHECK(sum == doctest::Approx(row.aggregate).epsilon(1e-12));
  }
  const std::vector<ProgramId> unknown = {ProgramId("astrology")};
  CHECK_THROWS_AS(topic_scores(kGolden, m, unknown), std::out_of_range);
}

TEST_CASE("selection validation") {
  const auto m = testing::golden_matrix();
  CHECK_THROWS_AS(recommend(TopicSelection{{}}, m, 7), SelectionError);
  CHECK_THROWS_AS(recommend(TopicSelection{{31}}, m, 7), SelectionError);
  CHECK_THROWS_AS(recommend(TopicSelection{{2, 2}}, m, 7), SelectionError);
  CHECK_THROWS_AS(validate_selection(TopicSelection{{1, 2, 3, 4, 5, 6, 7, 8, 9}}, m, 8), SelectionError);
  CHECK_NOTHROW(validate_selection(TopicSelection{{1, 2, 3, 4, 5, 6, 7, 8}}, m, 8));
  CHECK_THROWS_AS(recommend(kGolden, m, 0), std::invalid_argument);
}

TEST_CASE("no hits gives an empty recommendation") {
  const TopicProgramMatrix m({1, 2}, {{ProgramId("a"), "A", 3}, {ProgramId("b"), "B", 4}}, {0, 0, 5, 0});
  CHECK(recommend(TopicSelection{{1}}, m, 5).entries.empty());
  const auto rec = recommend(TopicSelection{{2}}, m, 5);
  REQUIRE(rec.entries.size() == 1);
  CHECK(rec.entries[0].program.str() == "a");
}

TEST_CASE("single program normalizes by itself") {
  const TopicProgramMatrix m({1}, {{ProgramId("p"), "P", 4}}, {3});
  const auto rec = recommend(TopicSelection{{1}}, m, 3);
  REQUIRE(rec.entries.size() == 1);
  CHECK(rec.entries[0].pis == 3);
  CHECK(rec.entries[0].rpis == 0.75);
  CHECK(rec.entries[0].score == 100.0);
}

TEST_CASE("ties break by ascending program id") {
  const TopicProgramMatrix m({1}, {{ProgramId("zeta"), "Z", 2}, {ProgramId("alpha"), "A", 4}, {ProgramId("mid"), "M", 1}},
                             {1, 2, 1});
  const auto rec = recommend(TopicSelection{{1}}, m, 3);
  REQUIRE(rec.entries.size() == 3);
  CHECK(rec.entries[0].program.str() == "mid");
  CHECK(rec.entries[1].program.str() == "alpha");
  CHECK(rec.entries[2].program.str() == "zeta");
}

TEST_CASE("matrix construction checks") {
  CHECK_THROWS_AS(TopicProgramMatrix({1}, {{ProgramId("p"), "P", 1}}, {1, 2}), ValidationError);
  CHECK_THROWS_AS(TopicProgramMatrix({1, 1}, {{ProgramId("p"), "P", 1}}, {1, 2}), ValidationError);
  CHECK_THROWS_AS(TopicProgramMatrix({1}, {{ProgramId("p"), "P", 0}}, {0}), ValidationError);
  CHECK_THROWS_AS(TopicProgramMatrix({1}, {{ProgramId("p"), "P", 1}, {ProgramId("p"), "Q", 1}}, {0, 0}),
                  ValidationError);
  CHECK_THROWS_AS(TopicProgramMatrix({1}, {{ProgramId("p"), "P", 2}}, {7}, 3), ValidationError);
  CHECK_NOTHROW(TopicProgramMatrix({1}, {{ProgramId("p"), "P", 2}}, {6}, 3));
}

TEST_CASE("matrix CSV round-trip and errors") {
  const auto m = testing::golden_matrix();
  const auto csv = matrix_to_csv(m);
  CHECK(parse_matrix_csv(csv) == m);
  CHECK(matrix_to_csv(parse_matrix_csv(csv)) == csv);
  const auto bare = parse_matrix_csv("program,1,2,|p|\na,1,0,2\nb,0,3,3\n");
  CHECK(bare.program_count() == 2);
  CHECK(bare.count(1, 1) == 3);
  CHECK_THROWS_AS(parse_matrix_csv(""), ParseError);
  CHECK_THROWS_AS(parse_matrix_csv("program,1,size\na,1,2\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix_csv("program,1,|p|\na,x,2\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix_csv("program,1,|p|\na,1\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix_csv("program,1,|p|\na,-1,2\n"), ParseError);
}

TEST_CASE("matrix build equals a brute-force recount") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = testing::random_instance(rng);
    const auto m = build_topic_program_matrix(inst.catalog, inst.topics);
    REQUIRE(m.topic_count() == inst.topics.topics.size());
    for (const auto& topic : inst.topics.topics) {
      const auto expected = oracle::topic_counts(inst.catalog, topic);
      const auto t = *m.topic_index(topic.id);
      for (std::size_t p = 0; p < m.program_count(); ++p) CHECK(m.count(t, p) == expected[p]);
    }
  }
}

TEST_CASE("unmatched keywords give a zero column") {
  std::mt19937_64 rng(8);
  auto inst = testing::random_instance(rng);
  inst.topics.topics[0].keywords = {{"no-such-word", 1.0}};
  const auto m = build_topic_program_matrix(inst.catalog, inst.topics);
  for (auto c : m.topic_row(*m.topic_index(inst.topics.topics[0].id))) CHECK(c == 0);
}

TEST_CASE("recommendation properties on the golden matrix") {
  const auto m = testing::golden_matrix();
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const auto size = 1 + rng() % 7;
    auto ids = random_selection(rng, m, size);
    const TopicSelection sel{ids};
    const auto tau = 1 + rng() % 10;
    const auto rec = recommend(sel, m, tau);
    CAPTURE(trial);

    // SCORE bounds and order
    for (std::size_t i = 0; i < rec.entries.size(); ++i) {
      CHECK(rec.entries[i].score > 0.0);
      CHECK(rec.entries[i].score <= 100.0);
      CHECK(rec.entries[i].rpis > 0.0);
      if (i > 0) CHECK(rec.entries[i - 1].rpis >= rec.entries[i].rpis);
    }
    if (!rec.entries.empty()) CHECK(rec.entries[0].score == doctest::Approx(100.0).epsilon(1e-12));

    // permutation invariance
    auto shuffled = ids;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto other = recommend(TopicSelection{shuffled}, m, tau);
    other.selection = rec.selection;
    CHECK(other == rec);

    // monotonicity of PIS under adding a topic
    auto extended = ids;
    for (auto t : m.topic_ids()) {
      if (std::find(ids.begin(), ids.end(), t) == ids.end()) {
        extended.push_back(t);
        break;
      }
    }
    const auto before = program_interest_scores(sel, m);
    const auto after = program_interest_scores(TopicSelection{extended}, m);
    for (std::size_t p = 0; p < before.size(); ++p) CHECK(after[p] >= before[p]);

    // scale invariance
    const auto k = static_cast<std::uint32_t>(2 + rng() % 5);
    const auto scaled = recommend(sel, rescaled(m, k), tau);
    REQUIRE(scaled.entries.size() == rec.entries.size());
    for (std::size_t i = 0; i < rec.entries.size(); ++i) {
      CHECK(scaled.entries[i].program == rec.entries[i].program);
      CHECK(scaled.entries[i].score == doctest::Approx(rec.entries[i].score).epsilon(1e-12));
      CHECK(scaled.entries[i].rpis == doctest::Approx(rec.entries[i].rpis / k).epsilon(1e-12));
    }
  }
}

TEST_CASE("recommend agrees with the literal algorithm on random catalogs") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = testing::random_instance(rng);
    const auto m = build_topic_program_matrix(inst.catalog, inst.topics);
    std::vector<TopicId> sel;
    for (const auto& t : inst.topics.topics) {
      if (rng() % 2 == 0) sel.push_back(t.id);
    }
    if (sel.empty()) sel.push_back(inst.topics.topics[0].id);
    const auto tau = 1 + rng() % 5;
    const auto got = recommend(TopicSelection{sel}, m, tau);
    const auto want = oracle::recommend(inst.catalog, inst.topics, sel, tau);
    REQUIRE(got.entries.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(got.entries[i].program.str() == want[i].program);
      CHECK(got.entries[i].pis == want[i].pis);
      CHECK(got.entries[i].rpis == want[i].rpis);
      CHECK(std::abs(got.entries[i].score - want[i].score) <= 1e-12);
    }
  }
}

TEST_CASE("recommendation JSON and text") {
  const auto m = testing::golden_matrix();
  const auto rec = recommend(kGolden, m, 7);
  const auto j = to_json(rec);
  CHECK(j["selection"] == nlohmann::json({2, 19, 21, 23, 30}));
  CHECK(j["entries"][0]["program"] == "data-science");
  CHECK(j["entries"][0]["pis"] == 113);
  CHECK(recommendation_from_json(j) == rec);
  const auto text = format_recommendation(rec);
  CHECK(text.find("Data Science") != std::string::npos);
  CHECK(text.find("100.0") != std::string::npos);
  CHECK(text.find("86.8") != std::string::npos);
  const std::vector<ProgramId> ids = {ProgramId("statistics")};
  const auto table = format_topic_scores(topic_scores(kGolden, m, ids));
  CHECK(table.find("0.859") != std::string::npos);
}
