#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "toprorec/catalog.hpp"
#include "toprorec/recommender.hpp"

namespace toprorec {

struct ReachabilityParams {
  std::uint32_t h = 0;
  std::uint32_t phi = 0;
  std::uint32_t gamma = 0;
  std::uint32_t tau = 0;

  friend bool operator==(const ReachabilityParams&, const ReachabilityParams&) = default;
};

struct ReachabilityResult {
  ReachabilityParams params;
  double rho = 0.0;  // percent of programs reached
  std::vector<ProgramId> reachable_programs;  // sorted
  std::uint64_t subsets_evaluated = 0;
};

// Number of k-subsets of an n-set.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

struct ReachabilityOptions {
  // Union over selection sizes 1..phi instead of exactly phi.
  bool up_to = false;
  // 0 = std::thread::hardware_concurrency().
  unsigned threads = 0;
};

// Coverage of top-tau recommendations over every topic subset of size phi.
// Throws InfeasibleError when phi > h, h differs from the matrix topic count,
// or gamma disagrees with the matrix's recorded gamma.
ReachabilityResult reachability(const TopicProgramMatrix& matrix, const ReachabilityParams& params,
                                const ReachabilityOptions& options = {});

// All (phi, tau) combinations for one matrix from a single subset enumeration.
// Results are ordered phi-major, then tau, as given.
std::vector<ReachabilityResult> reachability_sweep(const TopicProgramMatrix& matrix, std::uint32_t gamma,
                                                   std::span<const std::uint32_t> phis,
                                                   std::span<const std::uint32_t> taus,
                                                   const ReachabilityOptions& options = {});

struct GridSpec {
  std::vector<std::uint32_t> h, phi, gamma, tau;

  [[nodiscard]] std::size_t size() const { return h.size() * phi.size() * gamma.size() * tau.size(); }
};

// Supplies the matrix for a (h, gamma) pair; topics are mined per pair by the caller.
using MatrixProvider = std::function<TopicProgramMatrix(std::uint32_t h, std::uint32_t gamma)>;

// Full Cartesian product, ordered h, gamma, phi, tau.
std::vector<ReachabilityResult> reachability_grid(const MatrixProvider& provider, const GridSpec& grid,
                                                  const ReachabilityOptions& options = {});

// Header: h,phi,gamma,tau,rho,reachable_count,subsets
std::string reachability_csv(std::span<const ReachabilityResult> results);

// Binary recommendation matrix: rows are sessions, columns programs or colleges.
struct RecommendationMatrix {
  std::vector<std::string> columns;
  std::vector<std::vector<std::uint8_t>> rows;
};

RecommendationMatrix parse_recommendation_matrix_csv(std::string_view text);
RecommendationMatrix load_recommendation_matrix_csv(const std::filesystem::path& path);
std::string recommendation_matrix_csv(const RecommendationMatrix& matrix);

// One row per session over the given program columns.
RecommendationMatrix program_matrix(std::span<const Recommendation> sessions, std::span<const ProgramId> programs);
// A college is marked when any of its programs is. Columns are the sorted
// distinct college labels of the catalog. Throws ValidationError for unknown program columns.
RecommendationMatrix college_matrix(const RecommendationMatrix& programs, const Catalog& catalog);

struct PersonalizationResult {
  double mean_similarity = 0.0;
  double personalization = 0.0;  // 1 - mean_similarity
  std::size_t pairs = 0;
};

// Mean cosine similarity over all unordered row pairs. Throws ValidationError
// for fewer than two rows or an all-zero row.
PersonalizationResult personalization(const RecommendationMatrix& matrix);

struct CoverageEntry {
  std::string id;
  std::string name;
  std::size_t recommended = 0;          // sessions containing it
  std::vector<std::size_t> rank_counts; // rank_counts[r] = times at rank r+1
};

struct CoverageReport {
  std::size_t sessions = 0;
  std::size_t max_rank = 0;
  std::vector<CoverageEntry> programs;  // every catalog program, catalog order
  std::vector<CoverageEntry> colleges;  // sorted by label
  std::size_t programs_reached = 0;
  std::size_t unique_program_sets = 0;
  std::size_t unique_college_sets = 0;
  std::size_t single_college_sessions = 0;
  std::size_t max_colleges_per_session = 0;
};

// Recommendation frequencies and rank histograms for programs and colleges.
// Throws ValidationError when a session names a program missing from the catalog.
CoverageReport coverage_report(std::span<const Recommendation> sessions, const Catalog& catalog);

}  // namespace toprorec
