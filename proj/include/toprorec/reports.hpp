#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "toprorec/evaluator.hpp"
#include "toprorec/recommender.hpp"

namespace toprorec {

// {"selection": [...], "entries": [{"program", "name", "pis", "rpis", "score"}]}
nlohmann::json to_json(const Recommendation& rec);
// {"topics": [...], "normalizer", "programs": [{"program", "name", "aggregate", "cells": [...]}]}
nlohmann::json to_json(const TopicScoreTable& table);
nlohmann::json to_json(const PersonalizationResult& result);
nlohmann::json to_json(const CoverageReport& report);

// Accepts a Recommendation object; extra keys (topic_scores, session_id) are ignored.
Recommendation recommendation_from_json(const nlohmann::json& j);

// A JSON array of recommendation bodies, or {"sessions": [...]}.
std::vector<Recommendation> sessions_from_json(const nlohmann::json& j);

// Fixed-width text table of a recommendation (SCORE rounded to one decimal).
std::string format_recommendation(const Recommendation& rec);
std::string format_topic_scores(const TopicScoreTable& table);

}  // namespace toprorec
