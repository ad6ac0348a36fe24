#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "toprorec/catalog.hpp"
#include "toprorec/text_cleaner.hpp"

namespace toprorec {

// Output of ingestion: the validated catalog with its cleaned keywords, the
// knowledge-map edge list and the cleaning settings that produced them.
struct IngestSnapshot {
  Catalog catalog;
  CleaningConfig cleaning;
};

inline constexpr std::string_view kSnapshotFormat = "toprorec-snapshot";
inline constexpr int kSnapshotVersion = 1;

// Deterministic JSON: identical catalogs serialize to identical bytes.
std::string serialize_snapshot(const Catalog& catalog, const CleaningConfig& cleaning);
IngestSnapshot parse_snapshot(std::string_view text);

// Accepts a snapshot file, or a raw catalog JSON which is then cleaned with
// `cleaning`.
IngestSnapshot load_snapshot(const std::filesystem::path& path,
                             const CleaningConfig& cleaning = CleaningConfig::defaults());

}  // namespace toprorec
