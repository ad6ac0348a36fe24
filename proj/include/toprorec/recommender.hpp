#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "toprorec/catalog.hpp"
#include "toprorec/common.hpp"
#include "toprorec/topics.hpp"

namespace toprorec {

// Bad topic selection: empty, duplicate, unknown or more than phi ids.
class SelectionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ProgramInfo {
  ProgramId id;
  std::string name;
  std::uint32_t course_count = 0;  // |p|

  friend bool operator==(const ProgramInfo&, const ProgramInfo&) = default;
};

// Per-topic keyword hit counts for every program:
// count(t, p) = sum over keywords w of t, over courses c of p, of [w in d*_c].
// Stored topic-major so a topic selection is a sum of contiguous rows.
class TopicProgramMatrix {
 public:
  TopicProgramMatrix() = default;
  // `counts` has topic_ids.size() * programs.size() entries, topic-major.
  // gamma = 0 means the keyword budget is unknown (e.g. an imported table).
  TopicProgramMatrix(std::vector<TopicId> topic_ids, std::vector<ProgramInfo> programs,
                     std::vector<std::uint32_t> counts, std::uint32_t gamma = 0);

  [[nodiscard]] std::size_t topic_count() const noexcept { return topic_ids_.size(); }
  [[nodiscard]] std::size_t program_count() const noexcept { return programs_.size(); }
  [[nodiscard]] std::uint32_t gamma() const noexcept { return gamma_; }
  [[nodiscard]] const std::vector<TopicId>& topic_ids() const noexcept { return topic_ids_; }
  [[nodiscard]] const std::vector<ProgramInfo>& programs() const noexcept { return programs_; }

  [[nodiscard]] std::optional<std::size_t> topic_index(TopicId id) const;
  [[nodiscard]] std::optional<std::size_t> program_index(const ProgramId& id) const;

  [[nodiscard]] std::uint32_t count(std::size_t topic, std::size_t program) const {
    return counts_[topic * programs_.size() + program];
  }
  [[nodiscard]] std::span<const std::uint32_t> topic_row(std::size_t topic) const {
    return std::span<const std::uint32_t>(counts_).subspan(topic * programs_.size(), programs_.size());
  }
  // Position of each program when sorted by id; used for deterministic tie-breaks.
  [[nodiscard]] const std::vector<std::uint32_t>& id_rank() const noexcept { return id_rank_; }

  friend bool operator==(const TopicProgramMatrix& a, const TopicProgramMatrix& b) {
    return a.topic_ids_ == b.topic_ids_ && a.programs_ == b.programs_ && a.counts_ == b.counts_;
  }

 private:
  std::vector<TopicId> topic_ids_;
  std::vector<ProgramInfo> programs_;
  std::vector<std::uint32_t> counts_;
  std::uint32_t gamma_ = 0;
  std::unordered_map<TopicId, std::size_t> topic_lookup_;
  std::unordered_map<ProgramId, std::size_t> program_lookup_;
  std::vector<std::uint32_t> id_rank_;
};

// Topics must be normalized with the same cleaning settings as the catalog.
TopicProgramMatrix build_topic_program_matrix(const Catalog& catalog, const TopicSet& topics);

// CSV layout: program,name,<topic ids...>,|p|. The name column is optional.
TopicProgramMatrix parse_matrix_csv(std::string_view text, std::uint32_t gamma = 0);
TopicProgramMatrix load_matrix_csv(const std::filesystem::path& path, std::uint32_t gamma = 0);
std::string matrix_to_csv(const TopicProgramMatrix& matrix);

struct TopicSelection {
  std::vector<TopicId> topic_ids;
};

// Throws SelectionError unless 1 <= |ids| <= phi, ids are distinct and all
// resolve in the matrix. phi = 0 disables the upper bound.
void validate_selection(const TopicSelection& selection, const TopicProgramMatrix& matrix, std::size_t phi = 0);

struct RecommendationEntry {
  ProgramId program;
  std::string name;
  std::uint64_t pis = 0;
  double rpis = 0.0;
  double score = 0.0;

  friend bool operator==(const RecommendationEntry&, const RecommendationEntry&) = default;
};

struct Recommendation {
  std::vector<TopicId> selection;
  // Descending R-PIS, ties by ascending program id. Every R-PIS > 0.
  std::vector<RecommendationEntry> entries;

  friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

// PIS of every program (matrix order) for a validated selection.
std::vector<std::uint64_t> program_interest_scores(const TopicSelection& selection, const TopicProgramMatrix& matrix);

// Backtracking recommendation: sums the selected topic rows into PIS, divides
// by |p| and extracts programs by descending R-PIS until tau are taken or no
// program with positive R-PIS remains. SCORE is R-PIS relative to the best, x100.
Recommendation recommend(const TopicSelection& selection, const TopicProgramMatrix& matrix, std::size_t tau);

// Display rounding for SCORE (one decimal).
double round_score(double score);

struct TopicScoreRow {
  ProgramId program;
  std::string name;
  double aggregate = 0.0;       // R-PIS / normalizer
  std::vector<double> raw;      // count(t, p) / |p|, selection order
  std::vector<double> cells;    // raw / normalizer
};

struct TopicScoreTable {
  std::vector<TopicId> topics;
  // Largest R-PIS over all programs for this selection (the rank-1 R-PIS).
  double normalizer = 0.0;
  std::vector<TopicScoreRow> rows;
};

// Per-topic explanation scores. Throws std::out_of_range for an unknown program.
TopicScoreTable topic_scores(const TopicSelection& selection, const TopicProgramMatrix& matrix,
                             std::span<const ProgramId> programs);

}  // namespace toprorec
