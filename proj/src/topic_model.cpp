#include "toprorec/topic_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace toprorec {

TermMatrix::TermMatrix(std::vector<std::string> vocabulary, std::vector<std::size_t> row_offsets,
                       std::vector<std::uint32_t> columns, std::vector<std::uint32_t> counts)
    : vocabulary_(std::move(vocabulary)),
      row_offsets_(std::move(row_offsets)),
      columns_(std::move(columns)),
      counts_(std::move(counts)) {}

std::span<const std::uint32_t> TermMatrix::row_columns(std::size_t r) const {
  return std::span<const std::uint32_t>(columns_).subspan(row_offsets_.at(r), row_offsets_.at(r + 1) - row_offsets_[r]);
}

std::span<const std::uint32_t> TermMatrix::row_counts(std::size_t r) const {
  return std::span<const std::uint32_t>(counts_).subspan(row_offsets_.at(r), row_offsets_.at(r + 1) - row_offsets_[r]);
}

std::uint32_t TermMatrix::at(std::size_t r, std::size_t c) const {
  const auto cols = row_columns(r);
  const auto it = std::lower_bound(cols.begin(), cols.end(), c);
  if (it == cols.end() || *it != c) return 0;
  return row_counts(r)[static_cast<std::size_t>(it - cols.begin())];
}

std::vector<std::uint64_t> TermMatrix::column_sums() const {
  std::vector<std::uint64_t> sums(cols(), 0);
  for (std::size_t i = 0; i < columns_.size(); ++i) sums[columns_[i]] += counts_[i];
  return sums;
}

TermMatrix vectorize(std::span<const Course> courses) {
  std::vector<std::string> vocabulary;
  for (const auto& c : courses) {
    for (const auto& [w, n] : c.keywords) vocabulary.push_back(w);
  }
  if (vocabulary.empty()) throw ValidationError("vectorize: corpus has no keywords");
  std::sort(vocabulary.begin(), vocabulary.end());
  vocabulary.erase(std::unique(vocabulary.begin(), vocabulary.end()), vocabulary.end());

  std::unordered_map<std::string_view, std::uint32_t> index;
  index.reserve(vocabulary.size());
  for (std::uint32_t i = 0; i < vocabulary.size(); ++i) index.emplace(vocabulary[i], i);

  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> columns, counts;
  for (const auto& c : courses) {
    // keywords is an ordered map, so columns come out ascending.
    for (const auto& [w, n] : c.keywords) {
      columns.push_back(index.at(w));
      counts.push_back(n);
    }
    offsets.push_back(columns.size());
  }
  return TermMatrix(std::move(vocabulary), std::move(offsets), std::move(columns), std::move(counts));
}

namespace {

struct SparseVec {
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;
};

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double dot(const SparseVec& v, const std::vector<double>& dense) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.cols.size(); ++i) s += v.vals[i] * dense[v.cols[i]];
  return s;
}

}  // namespace

ClusterAssignment SphericalKMeans::cluster(const TermMatrix& matrix, std::uint32_t h, std::uint64_t seed) const {
  std::vector<std::size_t> docs;
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    if (!matrix.row_empty(r)) docs.push_back(r);
  }
  const std::size_t n = docs.size();
  if (h == 0) throw InfeasibleError("cluster: h must be >= 1");
  if (h > n) {
    throw InfeasibleError("cluster: h=" + std::to_string(h) + " exceeds the " + std::to_string(n) +
                          " courses with keywords");
  }
  const std::size_t vocab = matrix.cols();

  // Smoothed IDF over the clustered rows.
  std::vector<std::uint32_t> df(vocab, 0);
  for (auto r : docs) {
    for (auto c : matrix.row_columns(r)) ++df[c];
  }
  std::vector<SparseVec> vecs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto cols = matrix.row_columns(docs[i]);
    const auto cnts = matrix.row_counts(docs[i]);
    auto& v = vecs[i];
    v.cols.assign(cols.begin(), cols.end());
    v.vals.resize(cols.size());
    double norm = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const double idf = std::log((1.0 + static_cast<double>(n)) / (1.0 + df[cols[k]])) + 1.0;
      v.vals[k] = cnts[k] * idf;
      norm += v.vals[k] * v.vals[k];
    }
    norm = std::sqrt(norm);
    for (auto& x : v.vals) x /= norm;
  }

  std::vector<std::vector<double>> centroids(h, std::vector<double>(vocab, 0.0));
  auto set_centroid_to = [&](std::size_t k, const SparseVec& v) {
    std::fill(centroids[k].begin(), centroids[k].end(), 0.0);
    for (std::size_t i = 0; i < v.cols.size(); ++i) centroids[k][v.cols[i]] = v.vals[i];
  };

  // k-means++ seeding on cosine distance; seeds are distinct rows.
  std::mt19937_64 rng(seed);
  std::vector<bool> chosen(n, false);
  std::vector<double> best(n, -std::numeric_limits<double>::infinity());
  for (std::uint32_t k = 0; k < h; ++k) {
    std::size_t pick = 0;
    if (k == 0) {
      pick = std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)));
    } else {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!chosen[i]) total += std::pow(std::max(0.0, 1.0 - best[i]), 2);
      }
      const double u = uniform01(rng);
      if (total > 0.0) {
        double target = u * total;
        pick = n;
        for (std::size_t i = 0; i < n; ++i) {
          if (chosen[i]) continue;
          const double w = std::pow(std::max(0.0, 1.0 - best[i]), 2);
          if (w <= 0.0) continue;
          pick = i;
          if (target < w) break;
          target -= w;
        }
      } else {
        // every remaining row duplicates a seed; take one uniformly
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < n; ++i) {
          if (!chosen[i]) rest.push_back(i);
        }
        pick = rest[std::min(rest.size() - 1, static_cast<std::size_t>(u * static_cast<double>(rest.size())))];
      }
    }
    chosen[pick] = true;
    set_centroid_to(k, vecs[pick]);
    for (std::size_t i = 0; i < n; ++i) best[i] = std::max(best[i], dot(vecs[i], centroids[k]));
  }

  std::vector<std::uint32_t> label(n, std::numeric_limits<std::uint32_t>::max());
  std::vector<double> own_sim(n, 0.0);
  for (int iter = 0; iter < max_iterations_; ++iter) {
    std::vector<std::uint32_t> next(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      double best_sim = -std::numeric_limits<double>::infinity();
      for (std::uint32_t k = 0; k < h; ++k) {
        const double s = dot(vecs[i], centroids[k]);
        if (s > best_sim) {
          best_sim = s;
          next[i] = k;
        }
      }
      own_sim[i] = best_sim;
    }

    // Refill empty clusters with the worst-fitting row of a cluster that can spare one.
    std::vector<std::size_t> sizes(h, 0);
    for (auto l : next) ++sizes[l];
    for (std::uint32_t k = 0; k < h; ++k) {
      if (sizes[k] != 0) continue;
      std::size_t victim = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[next[i]] > 1 && (victim == n || own_sim[i] < own_sim[victim])) victim = i;
      }
      --sizes[next[victim]];
      next[victim] = k;
      ++sizes[k];
      own_sim[victim] = std::numeric_limits<double>::infinity();
    }

    const bool converged = next == label;
    label = std::move(next);
    if (converged) break;

    for (auto& c : centroids) std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& c = centroids[label[i]];
      for (std::size_t k = 0; k < vecs[i].cols.size(); ++k) c[vecs[i].cols[k]] += vecs[i].vals[k];
    }
    for (auto& c : centroids) {
      double norm = 0.0;
      for (double x : c) norm += x * x;
      if (norm > 0.0) {
        norm = std::sqrt(norm);
        for (double& x : c) x /= norm;
      }
    }
  }

  // Renumber: largest cluster first, ties by first member.
  std::vector<std::size_t> sizes(h, 0), first(h, n);
  for (std::size_t i = 0; i < n; ++i) {
    ++sizes[label[i]];
    first[label[i]] = std::min(first[label[i]], i);
  }
  std::vector<std::uint32_t> order(h);
  std::iota(order.begin(), order.end(), 0U);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (sizes[a] != sizes[b]) return sizes[a] > sizes[b];
    return first[a] < first[b];
  });
  std::vector<std::uint32_t> rename(h);
  for (std::uint32_t pos = 0; pos < h; ++pos) rename[order[pos]] = pos + 1;

  ClusterAssignment out;
  out.cluster_count = h;
  out.labels.assign(matrix.rows(), kOutlier);
  for (std::size_t i = 0; i < n; ++i) out.labels[docs[i]] = rename[label[i]];
  return out;
}

std::unique_ptr<Clusterer> make_clusterer(std::string_view name) {
  if (name == "spherical-kmeans") return std::make_unique<SphericalKMeans>();
  throw std::invalid_argument("unknown clusterer '" + std::string(name) + "'");
}

ClusterAssignment cluster(const TermMatrix& matrix, const TopicModelConfig& config) {
  if (config.h < 1) throw InfeasibleError("cluster: h must be >= 1");
  return make_clusterer(config.clusterer)->cluster(matrix, config.h, config.seed);
}

std::vector<std::vector<double>> ctfidf_scores(const ClusterAssignment& assignment, const TermMatrix& matrix) {
  if (assignment.labels.size() != matrix.rows()) {
    throw std::invalid_argument("ctfidf: assignment does not match matrix rows");
  }
  const std::size_t k_count = assignment.cluster_count;
  const std::size_t vocab = matrix.cols();
  std::vector<std::vector<std::uint64_t>> tf(k_count, std::vector<std::uint64_t>(vocab, 0));
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    const auto label = assignment.labels[r];
    if (label == kOutlier) continue;
    if (label > k_count) throw std::invalid_argument("ctfidf: label out of range");
    const auto cols = matrix.row_columns(r);
    const auto cnts = matrix.row_counts(r);
    for (std::size_t i = 0; i < cols.size(); ++i) tf[label - 1][cols[i]] += cnts[i];
  }
  std::vector<std::uint64_t> freq(vocab, 0);
  std::uint64_t total = 0;
  for (const auto& row : tf) {
    for (std::size_t t = 0; t < vocab; ++t) {
      freq[t] += row[t];
      total += row[t];
    }
  }
  const double avg = k_count == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(k_count);

  std::vector<std::vector<double>> scores(k_count, std::vector<double>(vocab, 0.0));
  for (std::size_t k = 0; k < k_count; ++k) {
    for (std::size_t t = 0; t < vocab; ++t) {
      if (tf[k][t] == 0) continue;
      scores[k][t] = static_cast<double>(tf[k][t]) * std::log(1.0 + avg / static_cast<double>(freq[t]));
    }
  }
  return scores;
}

std::vector<InterestTopic> ctfidf_keywords(const ClusterAssignment& assignment, const TermMatrix& matrix,
                                           std::uint32_t gamma) {
  if (gamma < 1) throw std::invalid_argument("ctfidf: gamma must be >= 1");
  const auto scores = ctfidf_scores(assignment, matrix);
  std::vector<InterestTopic> topics;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    InterestTopic topic;
    topic.id = static_cast<TopicId>(k + 1);
    for (std::size_t t = 0; t < scores[k].size(); ++t) {
      if (scores[k][t] > 0.0) topic.keywords.push_back({matrix.vocabulary()[t], scores[k][t]});
    }
    if (topic.keywords.empty()) continue;
    const auto keep = std::min<std::size_t>(gamma, topic.keywords.size());
    std::partial_sort(topic.keywords.begin(), topic.keywords.begin() + static_cast<std::ptrdiff_t>(keep),
                      topic.keywords.end(), keyword_before);
    topic.keywords.resize(keep);
    topics.push_back(std::move(topic));
  }
  return topics;
}

TopicSet mine_topics(const Catalog& catalog, const TopicModelConfig& config) {
  if (config.gamma < 1) throw InfeasibleError("mine: gamma must be >= 1");
  const auto matrix = vectorize(catalog.courses());
  const auto assignment = cluster(matrix, config);
  TopicSet set;
  set.h = config.h;
  set.gamma = config.gamma;
  set.topics = ctfidf_keywords(assignment, matrix, config.gamma);
  set.provenance = {
      {"clusterer", config.clusterer},
      {"seed", std::to_string(config.seed)},
      {"weighting", "c-tf-idf: tf(t,k) * ln(1 + A / f(t))"},
  };
  return set;
}

}  // namespace toprorec
