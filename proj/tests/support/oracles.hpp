#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "toprorec/catalog.hpp"
#include "toprorec/evaluator.hpp"
#include "toprorec/recommender.hpp"
#include "toprorec/topics.hpp"

// Deliberately naive reference implementations used as test oracles. None of
// them call into the code they check.
namespace toprorec::oracle {

struct NaiveEntry {
  std::string program;
  std::uint64_t pis = 0;
  double rpis = 0.0;
  double score = 0.0;
};

// Literal backtracking: per program, loop topics, keywords, courses; then
// repeated argmax extraction (ties to the smaller id) until tau or zero.
std::vector<NaiveEntry> recommend(const Catalog& catalog, const TopicSet& topics,
                                  const std::vector<TopicId>& selection, std::size_t tau);

// PIS of every catalog program (catalog order) for one topic, by direct scan.
std::vector<std::uint64_t> topic_counts(const Catalog& catalog, const InterestTopic& topic);

// Union of top-tau recommendations over every phi-subset of the topic ids,
// each computed with `recommend` above.
std::set<std::string> reachable(const Catalog& catalog, const TopicSet& topics, std::size_t phi, std::size_t tau,
                                bool up_to = false);

// Same union over a bare matrix, ranking with exact rational comparisons.
std::set<std::string> reachable(const TopicProgramMatrix& matrix, std::size_t phi, std::size_t tau);

// Edge count by scanning program lists, and the distinct (course, program) pairs.
std::size_t edge_count(const Catalog& catalog);

// c-TF-IDF by direct formula over per-document token lists.
// Result: cluster label (1-based) -> term -> score, only for present terms.
std::map<std::uint32_t, std::map<std::string, double>> ctfidf(const std::vector<std::vector<std::string>>& docs,
                                                              const std::vector<std::uint32_t>& labels,
                                                              std::uint32_t cluster_count);

// Mean pairwise cosine similarity by the Gram identity
// sum_{u<v} <x_u, x_v> = (|sum x_u|^2 - R) / 2 over unit rows.
double mean_similarity_gram(const std::vector<std::vector<std::uint8_t>>& rows);

}  // namespace toprorec::oracle
