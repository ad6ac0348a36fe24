#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace toprorec {

// Malformed input bytes (JSON, CSV).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Well-formed input that violates a domain invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameters that cannot be satisfied by the data (h > courses, phi > h, ...).
class InfeasibleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Opaque string identifier, distinct per tag so program and course ids never mix.
template <class Tag>
struct StrongId {
  std::string value;

  StrongId() = default;
  explicit StrongId(std::string v) : value(std::move(v)) {}

  [[nodiscard]] bool empty() const noexcept { return value.empty(); }
  [[nodiscard]] const std::string& str() const noexcept { return value; }

  friend auto operator<=>(const StrongId&, const StrongId&) = default;
  friend bool operator==(const StrongId&, const StrongId&) = default;
};

using ProgramId = StrongId<struct ProgramIdTag>;
using CourseId = StrongId<struct CourseIdTag>;

// 1-based topic identifier as presented to users.
using TopicId = std::uint32_t;

}  // namespace toprorec

template <class Tag>
struct std::hash<toprorec::StrongId<Tag>> {
  std::size_t operator()(const toprorec::StrongId<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.value);
  }
};
