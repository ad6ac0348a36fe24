#include "toprorec/snapshot.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace toprorec {

using nlohmann::json;

std::string serialize_snapshot(const Catalog& catalog, const CleaningConfig& cleaning) {
  std::vector<std::string> stop_words(cleaning.stop_words.begin(), cleaning.stop_words.end());
  std::sort(stop_words.begin(), stop_words.end());

  json programs = json::array();
  for (const auto& p : catalog.programs()) {
    json courses = json::array();
    for (const auto& c : p.course_ids) courses.push_back(c.str());
    programs.push_back({{"id", p.id.str()}, {"name", p.name}, {"college", p.college}, {"courses", courses}});
  }
  json courses = json::array();
  for (const auto& c : catalog.courses()) {
    json keywords = json::object();
    for (const auto& [w, n] : c.keywords) keywords[w] = n;
    courses.push_back({{"id", c.id.str()}, {"name", c.name}, {"description", c.description}, {"keywords", keywords}});
  }
  json edges = json::array();
  const auto& km = catalog.knowledge_map();
  for (const auto& [c, p] : km.edges()) {
    edges.push_back({catalog.courses()[c].id.str(), catalog.programs()[p].id.str()});
  }
  json doc = {
      {"format", kSnapshotFormat},
      {"version", kSnapshotVersion},
      {"cleaning",
       {{"stop_words", stop_words},
        {"blacklist", cleaning.blacklist},
        {"stemming", cleaning.stemming},
        {"ngram_max", cleaning.ngram_max}}},
      {"programs", programs},
      {"courses", courses},
      {"knowledge_map", {{"n", km.n()}, {"m", km.m()}, {"edges", edges}}},
  };
  return doc.dump(1) + "\n";
}

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("snapshot: ") + e.what());
  }
}

bool is_snapshot(const json& j) { return j.is_object() && j.value("format", "") == kSnapshotFormat; }

IngestSnapshot snapshot_from_json(const json& j) {
  if (!is_snapshot(j)) {
    throw ParseError("snapshot: not a toprorec snapshot");
  }
  if (j.value("version", 0) != kSnapshotVersion) throw ParseError("snapshot: unsupported version");

  IngestSnapshot out;
  std::vector<Program> programs;
  std::vector<Course> courses;
  try {
    const auto& jc = j.at("cleaning");
    const auto sw = jc.at("stop_words").get<std::vector<std::string>>();
    out.cleaning.stop_words = {sw.begin(), sw.end()};
    out.cleaning.blacklist = jc.at("blacklist").get<std::vector<std::string>>();
    out.cleaning.stemming = jc.at("stemming").get<bool>();
    out.cleaning.ngram_max = jc.at("ngram_max").get<int>();

    for (const auto& c : j.at("courses")) {
      Course course;
      course.id = CourseId(c.at("id").get<std::string>());
      course.name = c.at("name").get<std::string>();
      course.description = c.at("description").get<std::string>();
      for (const auto& [w, n] : c.at("keywords").items()) course.keywords.emplace(w, n.get<std::uint32_t>());
      courses.push_back(std::move(course));
    }
    for (const auto& p : j.at("programs")) {
      Program program;
      program.id = ProgramId(p.at("id").get<std::string>());
      program.name = p.at("name").get<std::string>();
      program.college = p.at("college").get<std::string>();
      for (const auto& c : p.at("courses")) program.course_ids.emplace_back(c.get<std::string>());
      programs.push_back(std::move(program));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("snapshot: ") + e.what());
  }
  out.catalog = Catalog(std::move(programs), std::move(courses));

  // The stored edge list must agree with the program course lists.
  try {
    const auto& jm = j.at("knowledge_map");
    const auto& km = out.catalog.knowledge_map();
    if (jm.at("n").get<std::size_t>() != km.n() || jm.at("m").get<std::size_t>() != km.m() ||
        jm.at("edges").size() != km.edge_count()) {
      throw ValidationError("snapshot: knowledge map does not match program course lists");
    }
    std::size_t i = 0;
    for (const auto& e : jm.at("edges")) {
      const auto [c, p] = km.edges()[i++];
      if (e.at(0).get<std::string>() != out.catalog.courses()[c].id.str() ||
          e.at(1).get<std::string>() != out.catalog.programs()[p].id.str()) {
        throw ValidationError("snapshot: knowledge map does not match program course lists");
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("snapshot: ") + e.what());
  }
  return out;
}

}  // namespace

IngestSnapshot parse_snapshot(std::string_view text) { return snapshot_from_json(parse_json(text)); }

IngestSnapshot load_snapshot(const std::filesystem::path& path, const CleaningConfig& cleaning) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const json j = parse_json(text);
  if (is_snapshot(j)) return snapshot_from_json(j);
  return IngestSnapshot{parse_catalog_json(text, cleaning), cleaning};
}

}  // namespace toprorec
