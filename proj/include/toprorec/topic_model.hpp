#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "toprorec/catalog.hpp"
#include "toprorec/topics.hpp"

namespace toprorec {

// Sparse document-term count matrix (CSR), one row per course.
class TermMatrix {
 public:
  TermMatrix() = default;
  TermMatrix(std::vector<std::string> vocabulary, std::vector<std::size_t> row_offsets,
             std::vector<std::uint32_t> columns, std::vector<std::uint32_t> counts);

  [[nodiscard]] std::size_t rows() const noexcept { return row_offsets_.empty() ? 0 : row_offsets_.size() - 1; }
  [[nodiscard]] std::size_t cols() const noexcept { return vocabulary_.size(); }
  [[nodiscard]] const std::vector<std::string>& vocabulary() const noexcept { return vocabulary_; }

  [[nodiscard]] std::span<const std::uint32_t> row_columns(std::size_t r) const;
  [[nodiscard]] std::span<const std::uint32_t> row_counts(std::size_t r) const;
  [[nodiscard]] bool row_empty(std::size_t r) const { return row_columns(r).empty(); }

  [[nodiscard]] std::uint32_t at(std::size_t r, std::size_t c) const;
  [[nodiscard]] std::vector<std::uint64_t> column_sums() const;

 private:
  std::vector<std::string> vocabulary_;
  std::vector<std::size_t> row_offsets_;
  std::vector<std::uint32_t> columns_;
  std::vector<std::uint32_t> counts_;
};

// Entries are extraction counts (duplicates within a description retained);
// the vocabulary is sorted. Throws ValidationError when no course has keywords.
TermMatrix vectorize(std::span<const Course> courses);

inline constexpr std::uint32_t kOutlier = 0;

// labels[r] is a cluster id in 1..cluster_count, or kOutlier.
struct ClusterAssignment {
  std::uint32_t cluster_count = 0;
  std::vector<std::uint32_t> labels;

  friend bool operator==(const ClusterAssignment&, const ClusterAssignment&) = default;
};

class Clusterer {
 public:
  virtual ~Clusterer() = default;
  [[nodiscard]] virtual std::string name() const = 0;
  // Deterministic for a fixed seed. Empty rows must be labelled kOutlier.
  [[nodiscard]] virtual ClusterAssignment cluster(const TermMatrix& matrix, std::uint32_t h,
                                                  std::uint64_t seed) const = 0;
};

// Spherical k-means over L2-normalized TF-IDF rows, k-means++ seeding.
// Clusters are numbered by size (largest first), ties by first member row.
class SphericalKMeans final : public Clusterer {
 public:
  explicit SphericalKMeans(int max_iterations = 100) : max_iterations_(max_iterations) {}
  [[nodiscard]] std::string name() const override { return "spherical-kmeans"; }
  [[nodiscard]] ClusterAssignment cluster(const TermMatrix& matrix, std::uint32_t h,
                                          std::uint64_t seed) const override;

 private:
  int max_iterations_;
};

// Throws std::invalid_argument for an unregistered name.
std::unique_ptr<Clusterer> make_clusterer(std::string_view name);

struct TopicModelConfig {
  std::uint32_t h = 30;
  std::uint32_t gamma = 20;
  std::string clusterer = "spherical-kmeans";
  std::uint64_t seed = 1;
};

// Throws InfeasibleError when h is 0 or exceeds the number of non-empty rows.
ClusterAssignment cluster(const TermMatrix& matrix, const TopicModelConfig& config);

// c-TF-IDF score of every vocabulary term in every cluster:
// tf(t, k) * ln(1 + A / f(t)), where tf is the term's count in cluster k, f its
// count over all clusters and A the mean term count per cluster. Outlier rows
// are excluded. Indexed [cluster - 1][term].
std::vector<std::vector<double>> ctfidf_scores(const ClusterAssignment& assignment, const TermMatrix& matrix);

// Top-gamma keywords per cluster by c-TF-IDF (ties: keyword ascending).
// Terms absent from a cluster are never listed.
std::vector<InterestTopic> ctfidf_keywords(const ClusterAssignment& assignment, const TermMatrix& matrix,
                                           std::uint32_t gamma);

// vectorize -> cluster -> ctfidf_keywords over the catalog's courses.
TopicSet mine_topics(const Catalog& catalog, const TopicModelConfig& config);

}  // namespace toprorec
