#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "toprorec/evaluator.hpp"

namespace toprorec::cli {

// Runs the toprorec command line. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Parses grid tokens such as "h=10,20" "phi=1..6". Throws std::invalid_argument.
GridSpec parse_grid(const std::vector<std::string>& tokens);

// "2,19,21" -> {2, 19, 21}. Throws std::invalid_argument.
std::vector<std::uint32_t> parse_id_list(const std::string& text);

}  // namespace toprorec::cli
