#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "toprorec/common.hpp"
#include "toprorec/text_cleaner.hpp"

namespace toprorec {

struct Course {
  CourseId id;
  std::string name;
  std::string description;
  // Cleaned keyword set. The mapped value is the number of times the keyword
  // was extracted from the description; membership is what scoring uses.
  std::map<std::string, std::uint32_t> keywords;

  [[nodiscard]] bool has_keyword(const std::string& w) const { return keywords.contains(w); }
};

struct Program {
  ProgramId id;
  std::string name;
  std::string college;
  std::vector<CourseId> course_ids;

  [[nodiscard]] std::size_t size() const noexcept { return course_ids.size(); }
};

// Bipartite course/program network over dense indices into the owning
// Catalog's course and program vectors.
class KnowledgeMap {
 public:
  using Edge = std::pair<std::uint32_t, std::uint32_t>;  // (course index, program index)

  KnowledgeMap() = default;
  KnowledgeMap(std::size_t course_count, std::size_t program_count, std::vector<Edge> edges);

  [[nodiscard]] std::size_t n() const noexcept { return program_count_; }
  [[nodiscard]] std::size_t m() const noexcept { return course_count_; }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
  // Sorted by (course, program).
  [[nodiscard]] std::span<const Edge> edges() const noexcept { return edges_; }

  [[nodiscard]] std::span<const std::uint32_t> programs_of(std::uint32_t course) const;
  [[nodiscard]] std::span<const std::uint32_t> courses_of(std::uint32_t program) const;

 private:
  std::size_t course_count_ = 0;
  std::size_t program_count_ = 0;
  std::vector<Edge> edges_;
  // CSR layouts of the forward (course -> programs) and reverse indices.
  std::vector<std::uint32_t> forward_offsets_, forward_;
  std::vector<std::uint32_t> reverse_offsets_, reverse_;
};

// Validated, immutable catalog of programs and courses.
class Catalog {
 public:
  Catalog() = default;
  // Throws ValidationError on empty or duplicate ids, empty programs,
  // duplicate course listings within a program, or dangling course ids.
  Catalog(std::vector<Program> programs, std::vector<Course> courses);

  [[nodiscard]] const std::vector<Program>& programs() const noexcept { return programs_; }
  [[nodiscard]] const std::vector<Course>& courses() const noexcept { return courses_; }
  [[nodiscard]] const KnowledgeMap& knowledge_map() const noexcept { return map_; }

  [[nodiscard]] std::optional<std::uint32_t> program_index(const ProgramId& id) const;
  [[nodiscard]] std::optional<std::uint32_t> course_index(const CourseId& id) const;

  [[nodiscard]] std::size_t n() const noexcept { return programs_.size(); }
  [[nodiscard]] std::size_t m() const noexcept { return courses_.size(); }

  friend bool operator==(const Catalog& a, const Catalog& b);

 private:
  std::vector<Program> programs_;
  std::vector<Course> courses_;
  std::unordered_map<ProgramId, std::uint32_t> program_lookup_;
  std::unordered_map<CourseId, std::uint32_t> course_lookup_;
  KnowledgeMap map_;
};

bool operator==(const Course& a, const Course& b);
bool operator==(const Program& a, const Program& b);

enum class CatalogFormat { json, csv };

// JSON: a single file. CSV: a directory holding programs.csv, courses.csv and
// edges.csv. Descriptions are cleaned with `cleaning`.
Catalog load_catalog(const std::filesystem::path& source, CatalogFormat format,
                     const CleaningConfig& cleaning = CleaningConfig::defaults());
Catalog parse_catalog_json(std::string_view text, const CleaningConfig& cleaning);

// Writes the raw catalog JSON (descriptions, not keywords).
std::string serialize_catalog_json(const Catalog& catalog);

KnowledgeMap build_knowledge_map(const Catalog& catalog);

}  // namespace toprorec
