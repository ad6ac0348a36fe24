#include "toprorec/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "toprorec/csv.hpp"

namespace toprorec {

using nlohmann::json;

namespace {

std::vector<std::uint32_t> offsets_from_counts(const std::vector<std::uint32_t>& counts) {
  std::vector<std::uint32_t> offsets(counts.size() + 1, 0);
  for (std::size_t i = 0; i < counts.size(); ++i) offsets[i + 1] = offsets[i] + counts[i];
  return offsets;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::uint32_t> count_keywords(const TextCleaner& cleaner, const std::string& text) {
  std::map<std::string, std::uint32_t> out;
  for (auto& w : cleaner.extract(text)) ++out[std::move(w)];
  return out;
}

std::size_t column(const csv::Row& header, std::string_view name, const std::string& file) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ParseError(file + ": missing column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

KnowledgeMap::KnowledgeMap(std::size_t course_count, std::size_t program_count, std::vector<Edge> edges)
    : course_count_(course_count), program_count_(program_count), edges_(std::move(edges)) {
  std::sort(edges_.begin(), edges_.end());
  std::vector<std::uint32_t> fwd_counts(course_count_, 0), rev_counts(program_count_, 0);
  for (const auto& [c, p] : edges_) {
    ++fwd_counts.at(c);
    ++rev_counts.at(p);
  }
  forward_offsets_ = offsets_from_counts(fwd_counts);
  reverse_offsets_ = offsets_from_counts(rev_counts);
  forward_.resize(edges_.size());
  reverse_.resize(edges_.size());
  auto fwd_fill = forward_offsets_;
  auto rev_fill = reverse_offsets_;
  // edges_ is course-major, so both indices come out sorted.
  for (const auto& [c, p] : edges_) {
    forward_[fwd_fill[c]++] = p;
  }
  std::vector<Edge> by_program = edges_;
  std::sort(by_program.begin(), by_program.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.second, a.first) < std::tie(b.second, b.first); });
  for (const auto& [c, p] : by_program) {
    reverse_[rev_fill[p]++] = c;
  }
}

std::span<const std::uint32_t> KnowledgeMap::programs_of(std::uint32_t course) const {
  const auto b = forward_offsets_.at(course);
  const auto e = forward_offsets_.at(course + 1);
  return std::span<const std::uint32_t>(forward_).subspan(b, e - b);
}

std::span<const std::uint32_t> KnowledgeMap::courses_of(std::uint32_t program) const {
  const auto b = reverse_offsets_.at(program);
  const auto e = reverse_offsets_.at(program + 1);
  return std::span<const std::uint32_t>(reverse_).subspan(b, e - b);
}

Catalog::Catalog(std::vector<Program> programs, std::vector<Course> courses)
    : programs_(std::move(programs)), courses_(std::move(courses)) {
  if (programs_.empty()) throw ValidationError("catalog has no programs");
  for (std::uint32_t i = 0; i < courses_.size(); ++i) {
    const auto& c = courses_[i];
    if (c.id.empty()) throw ValidationError("course #" + std::to_string(i) + " has an empty id");
    if (!course_lookup_.emplace(c.id, i).second) {
      throw ValidationError("duplicate course id '" + c.id.str() + "'");
    }
  }
  std::vector<KnowledgeMap::Edge> edges;
  for (std::uint32_t i = 0; i < programs_.size(); ++i) {
    const auto& p = programs_[i];
    if (p.id.empty()) throw ValidationError("program #" + std::to_string(i) + " has an empty id");
    if (!program_lookup_.emplace(p.id, i).second) {
      throw ValidationError("duplicate program id '" + p.id.str() + "'");
    }
    if (p.course_ids.empty()) throw ValidationError("program '" + p.id.str() + "' has no courses");
    std::unordered_set<std::uint32_t> seen;
    for (const auto& cid : p.course_ids) {
      const auto it = course_lookup_.find(cid);
      if (it == course_lookup_.end()) {
        throw ValidationError("program '" + p.id.str() + "' lists unknown course '" + cid.str() + "'");
      }
      if (!seen.insert(it->second).second) {
        throw ValidationError("program '" + p.id.str() + "' lists course '" + cid.str() + "' twice");
      }
      edges.emplace_back(it->second, i);
    }
  }
  map_ = KnowledgeMap(courses_.size(), programs_.size(), std::move(edges));
}

std::optional<std::uint32_t> Catalog::program_index(const ProgramId& id) const {
  const auto it = program_lookup_.find(id);
  if (it == program_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> Catalog::course_index(const CourseId& id) const {
  const auto it = course_lookup_.find(id);
  if (it == course_lookup_.end()) return std::nullopt;
  return it->second;
}

bool operator==(const Course& a, const Course& b) {
  return a.id == b.id && a.name == b.name && a.description == b.description && a.keywords == b.keywords;
}

bool operator==(const Program& a, const Program& b) {
  return a.id == b.id && a.name == b.name && a.college == b.college && a.course_ids == b.course_ids;
}

bool operator==(const Catalog& a, const Catalog& b) {
  return a.programs_ == b.programs_ && a.courses_ == b.courses_;
}

Catalog parse_catalog_json(std::string_view text, const CleaningConfig& cleaning) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("catalog: ") + e.what());
  }
  if (!j.is_object() || !j.contains("programs") || !j.contains("courses")) {
    throw ParseError("catalog: expected an object with 'programs' and 'courses'");
  }
  const TextCleaner cleaner(cleaning);
  std::vector<Program> programs;
  std::vector<Course> courses;
  try {
    for (const auto& jc : j.at("courses")) {
      Course c;
      c.id = CourseId(jc.at("id").get<std::string>());
      c.name = jc.value("name", "");
      c.description = jc.value("description", "");
      c.keywords = count_keywords(cleaner, c.description);
      courses.push_back(std::move(c));
    }
    for (const auto& jp : j.at("programs")) {
      Program p;
      p.id = ProgramId(jp.at("id").get<std::string>());
      p.name = jp.value("name", "");
      p.college = jp.value("college", "");
      for (const auto& cid : jp.at("courses")) p.course_ids.emplace_back(cid.get<std::string>());
      programs.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("catalog: ") + e.what());
  }
  return Catalog(std::move(programs), std::move(courses));
}

namespace {

Catalog load_catalog_csv(const std::filesystem::path& dir, const CleaningConfig& cleaning) {
  const auto programs_rows = csv::read_file(dir / "programs.csv");
  const auto courses_rows = csv::read_file(dir / "courses.csv");
  const auto edges_rows = csv::read_file(dir / "edges.csv");
  if (programs_rows.empty() || courses_rows.empty() || edges_rows.empty()) {
    throw ParseError("catalog csv: every file needs a header row");
  }

  const TextCleaner cleaner(cleaning);
  std::vector<Course> courses;
  {
    const auto& h = courses_rows.front();
    const auto id = column(h, "id", "courses.csv");
    const auto name = column(h, "name", "courses.csv");
    const auto desc = column(h, "description", "courses.csv");
    for (std::size_t r = 1; r < courses_rows.size(); ++r) {
      const auto& row = courses_rows[r];
      if (row.size() != h.size()) throw ParseError("courses.csv: row " + std::to_string(r + 1) + " has wrong arity");
      Course c;
      c.id = CourseId(row[id]);
      c.name = row[name];
      c.description = row[desc];
      c.keywords = count_keywords(cleaner, c.description);
      courses.push_back(std::move(c));
    }
  }
  std::vector<Program> programs;
  std::unordered_map<std::string, std::size_t> by_id;
  {
    const auto& h = programs_rows.front();
    const auto id = column(h, "id", "programs.csv");
    const auto name = column(h, "name", "programs.csv");
    const auto college = column(h, "college", "programs.csv");
    for (std::size_t r = 1; r < programs_rows.size(); ++r) {
      const auto& row = programs_rows[r];
      if (row.size() != h.size()) throw ParseError("programs.csv: row " + std::to_string(r + 1) + " has wrong arity");
      by_id.emplace(row[id], programs.size());
      programs.push_back(Program{ProgramId(row[id]), row[name], row[college], {}});
    }
  }
  {
    const auto& h = edges_rows.front();
    const auto cid = column(h, "course_id", "edges.csv");
    const auto pid = column(h, "program_id", "edges.csv");
    for (std::size_t r = 1; r < edges_rows.size(); ++r) {
      const auto& row = edges_rows[r];
      if (row.size() != h.size()) throw ParseError("edges.csv: row " + std::to_string(r + 1) + " has wrong arity");
      const auto it = by_id.find(row[pid]);
      if (it == by_id.end()) throw ValidationError("edges.csv: unknown program '" + row[pid] + "'");
      programs[it->second].course_ids.emplace_back(row[cid]);
    }
  }
  return Catalog(std::move(programs), std::move(courses));
}

}  // namespace

Catalog load_catalog(const std::filesystem::path& source, CatalogFormat format, const CleaningConfig& cleaning) {
  switch (format) {
    case CatalogFormat::json:
      return parse_catalog_json(read_text(source), cleaning);
    case CatalogFormat::csv:
      return load_catalog_csv(source, cleaning);
  }
  throw std::logic_error("unknown catalog format");
}

std::string serialize_catalog_json(const Catalog& catalog) {
  json programs = json::array();
  for (const auto& p : catalog.programs()) {
    json courses = json::array();
    for (const auto& c : p.course_ids) courses.push_back(c.str());
    programs.push_back({{"id", p.id.str()}, {"name", p.name}, {"college", p.college}, {"courses", courses}});
  }
  json courses = json::array();
  for (const auto& c : catalog.courses()) {
    courses.push_back({{"id", c.id.str()}, {"name", c.name}, {"description", c.description}});
  }
  return json{{"programs", programs}, {"courses", courses}}.dump(1) + "\n";
}

KnowledgeMap build_knowledge_map(const Catalog& catalog) {
  std::vector<KnowledgeMap::Edge> edges;
  for (std::uint32_t p = 0; p < catalog.programs().size(); ++p) {
    for (const auto& cid : catalog.programs()[p].course_ids) {
      edges.emplace_back(*catalog.course_index(cid), p);
    }
  }
  return KnowledgeMap(catalog.m(), catalog.n(), std::move(edges));
}

}  // namespace toprorec
