#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "toprorec/catalog.hpp"
#include "toprorec/recommender.hpp"
#include "toprorec/topics.hpp"

namespace toprorec::testing {

std::string fixture_path(const std::string& name);

// The 84x30 golden matrix with |p|.
TopicProgramMatrix golden_matrix();

// A catalog with keyword sets assigned directly (no text cleaning) plus topics
// over the same vocabulary.
struct SmallInstance {
  Catalog catalog;
  TopicSet topics;
};

struct SmallInstanceShape {
  std::size_t max_programs = 10;
  std::size_t max_courses = 30;
  std::size_t max_topics = 8;
  std::size_t max_keywords = 5;
  std::size_t vocabulary = 14;
  // Exact topic count when non-zero.
  std::size_t topics = 0;
};

SmallInstance random_instance(std::mt19937_64& rng, const SmallInstanceShape& shape = {});

// Raw-text catalog at campus scale: 84 programs in 7 colleges,
// 4251 courses of which 2565 are linked by 6143 edges, one course
// ("Calculus IV") shared by 22 programs. Descriptions carry the technical
// clauses the default blacklist removes.
struct CampusShape {
  std::size_t courses = 4251;
  std::size_t linked_courses = 2565;
  std::size_t edges = 6143;
  std::size_t hub_degree = 22;
  std::uint64_t seed = 7;
};

// Catalog JSON text in the ingestion format.
std::string campus_catalog_json(const CampusShape& shape = {});

}  // namespace toprorec::testing
