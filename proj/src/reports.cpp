#include "toprorec/reports.hpp"

#include <cstdio>

namespace toprorec {

using nlohmann::json;

json to_json(const Recommendation& rec) {
  json entries = json::array();
  for (const auto& e : rec.entries) {
    entries.push_back(
        {{"program", e.program.str()}, {"name", e.name}, {"pis", e.pis}, {"rpis", e.rpis}, {"score", e.score}});
  }
  return {{"selection", rec.selection}, {"entries", std::move(entries)}};
}

json to_json(const TopicScoreTable& table) {
  json programs = json::array();
  for (const auto& row : table.rows) {
    programs.push_back(
        {{"program", row.program.str()}, {"name", row.name}, {"aggregate", row.aggregate}, {"cells", row.cells}});
  }
  return {{"topics", table.topics}, {"normalizer", table.normalizer}, {"programs", std::move(programs)}};
}

json to_json(const PersonalizationResult& result) {
  return {{"mean_similarity", result.mean_similarity},
          {"personalization", result.personalization},
          {"pairs", result.pairs}};
}

namespace {

json coverage_entries(const std::vector<CoverageEntry>& entries) {
  json out = json::array();
  for (const auto& e : entries) {
    out.push_back({{"id", e.id}, {"name", e.name}, {"recommended", e.recommended}, {"rank_counts", e.rank_counts}});
  }
  return out;
}

}  // namespace

json to_json(const CoverageReport& report) {
  return {{"sessions", report.sessions},
          {"max_rank", report.max_rank},
          {"programs_reached", report.programs_reached},
          {"unique_program_sets", report.unique_program_sets},
          {"unique_college_sets", report.unique_college_sets},
          {"single_college_sessions", report.single_college_sessions},
          {"max_colleges_per_session", report.max_colleges_per_session},
          {"programs", coverage_entries(report.programs)},
          {"colleges", coverage_entries(report.colleges)}};
}

Recommendation recommendation_from_json(const json& j) {
  Recommendation rec;
  try {
    rec.selection = j.at("selection").get<std::vector<TopicId>>();
    for (const auto& e : j.at("entries")) {
      rec.entries.push_back({ProgramId(e.at("program").get<std::string>()), e.value("name", ""),
                             e.at("pis").get<std::uint64_t>(), e.at("rpis").get<double>(),
                             e.at("score").get<double>()});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("recommendation: ") + e.what());
  }
  return rec;
}

std::vector<Recommendation> sessions_from_json(const json& j) {
  const json* list = &j;
  if (j.is_object() && j.contains("sessions")) list = &j.at("sessions");
  if (!list->is_array()) throw ParseError("sessions: expected an array of recommendations");
  std::vector<Recommendation> out;
  for (const auto& item : *list) out.push_back(recommendation_from_json(item));
  return out;
}

std::string format_recommendation(const Recommendation& rec) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-4s  %-40s  %6s  %7s  %6s\n", "Rank", "Program", "PIS", "R-PIS", "SCORE");
  out += buf;
  for (std::size_t i = 0; i < rec.entries.size(); ++i) {
    const auto& e = rec.entries[i];
    std::snprintf(buf, sizeof buf, "%-4zu  %-40s  %6llu  %7.3f  %6.1f\n", i + 1, e.name.c_str(),
                  static_cast<unsigned long long>(e.pis), e.rpis, round_score(e.score));
    out += buf;
  }
  if (rec.entries.empty()) out += "(no program shares any keyword with the selected topics)\n";
  return out;
}

std::string format_topic_scores(const TopicScoreTable& table) {
  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-40s", "Program");
  out += buf;
  for (auto t : table.topics) {
    std::snprintf(buf, sizeof buf, "  %6s", ("#" + std::to_string(t)).c_str());
    out += buf;
  }
  out += "   SCORE\n";
  for (const auto& row : table.rows) {
    std::snprintf(buf, sizeof buf, "%-40s", row.name.c_str());
    out += buf;
    for (double c : row.cells) {
      std::snprintf(buf, sizeof buf, "  %6.3f", c);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, "  %6.3f\n", row.aggregate);
    out += buf;
  }
  return out;
}

}  // namespace toprorec
