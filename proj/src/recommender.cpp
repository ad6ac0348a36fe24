#include "toprorec/recommender.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "toprorec/csv.hpp"

namespace toprorec {

TopicProgramMatrix::TopicProgramMatrix(std::vector<TopicId> topic_ids, std::vector<ProgramInfo> programs,
                                       std::vector<std::uint32_t> counts, std::uint32_t gamma)
    : topic_ids_(std::move(topic_ids)), programs_(std::move(programs)), counts_(std::move(counts)), gamma_(gamma) {
  if (counts_.size() != topic_ids_.size() * programs_.size()) {
    throw ValidationError("matrix: count table has the wrong shape");
  }
  for (std::size_t t = 0; t < topic_ids_.size(); ++t) {
    if (!topic_lookup_.emplace(topic_ids_[t], t).second) {
      throw ValidationError("matrix: duplicate topic id " + std::to_string(topic_ids_[t]));
    }
  }
  for (std::size_t p = 0; p < programs_.size(); ++p) {
    const auto& info = programs_[p];
    if (info.id.empty()) throw ValidationError("matrix: empty program id");
    if (info.course_count == 0) throw ValidationError("matrix: program '" + info.id.str() + "' has |p| = 0");
    if (!program_lookup_.emplace(info.id, p).second) {
      throw ValidationError("matrix: duplicate program id '" + info.id.str() + "'");
    }
    if (gamma_ > 0) {
      const std::uint64_t cap = std::uint64_t{gamma_} * info.course_count;
      for (std::size_t t = 0; t < topic_ids_.size(); ++t) {
        if (count(t, p) > cap) {
          throw ValidationError("matrix: count for program '" + info.id.str() + "' exceeds gamma * |p|");
        }
      }
    }
  }
  std::vector<std::uint32_t> order(programs_.size());
  std::iota(order.begin(), order.end(), 0U);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return programs_[a].id < programs_[b].id; });
  id_rank_.resize(programs_.size());
  for (std::uint32_t r = 0; r < order.size(); ++r) id_rank_[order[r]] = r;
}

std::optional<std::size_t> TopicProgramMatrix::topic_index(TopicId id) const {
  const auto it = topic_lookup_.find(id);
  if (it == topic_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> TopicProgramMatrix::program_index(const ProgramId& id) const {
  const auto it = program_lookup_.find(id);
  if (it == program_lookup_.end()) return std::nullopt;
  return it->second;
}

TopicProgramMatrix build_topic_program_matrix(const Catalog& catalog, const TopicSet& topics) {
  std::unordered_map<std::string_view, std::vector<std::uint32_t>> courses_with;
  for (std::uint32_t c = 0; c < catalog.courses().size(); ++c) {
    for (const auto& [w, n] : catalog.courses()[c].keywords) courses_with[w].push_back(c);
  }

  std::vector<const InterestTopic*> ordered;
  for (const auto& t : topics.topics) ordered.push_back(&t);
  std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->id < b->id; });

  const auto& km = catalog.knowledge_map();
  const std::size_t n = catalog.n();
  std::vector<TopicId> ids;
  std::vector<std::uint32_t> counts(ordered.size() * n, 0);
  for (std::size_t t = 0; t < ordered.size(); ++t) {
    ids.push_back(ordered[t]->id);
    auto* row = counts.data() + t * n;
    for (const auto& kw : ordered[t]->keywords) {
      const auto it = courses_with.find(kw.word);
      if (it == courses_with.end()) continue;
      for (auto c : it->second) {
        for (auto p : km.programs_of(c)) ++row[p];
      }
    }
  }
  std::vector<ProgramInfo> programs;
  for (const auto& p : catalog.programs()) {
    programs.push_back({p.id, p.name, static_cast<std::uint32_t>(p.size())});
  }
  return TopicProgramMatrix(std::move(ids), std::move(programs), std::move(counts), topics.gamma);
}

namespace {

template <class T>
T parse_number(const std::string& s, std::string_view what) {
  T value{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw ParseError("matrix csv: bad " + std::string(what) + " '" + s + "'");
  return value;
}

}  // namespace

TopicProgramMatrix parse_matrix_csv(std::string_view text, std::uint32_t gamma) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw ParseError("matrix csv: empty file");
  const auto& header = rows.front();
  if (header.size() < 3 || header.front() != "program" || header.back() != "|p|") {
    throw ParseError("matrix csv: header must be program[,name],<topics...>,|p|");
  }
  const bool has_name = header[1] == "name";
  const std::size_t first_topic = has_name ? 2 : 1;
  std::vector<TopicId> ids;
  for (std::size_t i = first_topic; i + 1 < header.size(); ++i) ids.push_back(parse_number<TopicId>(header[i], "topic id"));

  const std::size_t n = rows.size() - 1;
  std::vector<ProgramInfo> programs;
  std::vector<std::uint32_t> counts(ids.size() * n, 0);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw ParseError("matrix csv: row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                       " fields, expected " + std::to_string(header.size()));
    }
    const std::size_t p = r - 1;
    programs.push_back({ProgramId(row[0]), has_name ? row[1] : row[0],
                        parse_number<std::uint32_t>(row.back(), "|p|")});
    for (std::size_t t = 0; t < ids.size(); ++t) {
      counts[t * n + p] = parse_number<std::uint32_t>(row[first_topic + t], "count");
    }
  }
  return TopicProgramMatrix(std::move(ids), std::move(programs), std::move(counts), gamma);
}

TopicProgramMatrix load_matrix_csv(const std::filesystem::path& path, std::uint32_t gamma) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_matrix_csv(ss.str(), gamma);
}

std::string matrix_to_csv(const TopicProgramMatrix& matrix) {
  csv::Row header{"program", "name"};
  for (auto id : matrix.topic_ids()) header.push_back(std::to_string(id));
  header.emplace_back("|p|");
  std::string out = csv::format_row(header);
  for (std::size_t p = 0; p < matrix.program_count(); ++p) {
    const auto& info = matrix.programs()[p];
    csv::Row row{info.id.str(), info.name};
    for (std::size_t t = 0; t < matrix.topic_count(); ++t) row.push_back(std::to_string(matrix.count(t, p)));
    row.push_back(std::to_string(info.course_count));
    out += csv::format_row(row);
  }
  return out;
}

void validate_selection(const TopicSelection& selection, const TopicProgramMatrix& matrix, std::size_t phi) {
  const auto& ids = selection.topic_ids;
  if (ids.empty()) throw SelectionError("select at least one interest topic");
  if (phi > 0 && ids.size() > phi) {
    throw SelectionError("at most " + std::to_string(phi) + " interest topics may be selected");
  }
  std::set<TopicId> seen;
  for (auto id : ids) {
    if (!matrix.topic_index(id)) throw SelectionError("unknown topic id " + std::to_string(id));
    if (!seen.insert(id).second) throw SelectionError("topic id " + std::to_string(id) + " selected twice");
  }
}

std::vector<std::uint64_t> program_interest_scores(const TopicSelection& selection, const TopicProgramMatrix& matrix) {
  validate_selection(selection, matrix);
  std::vector<std::uint64_t> pis(matrix.program_count(), 0);
  for (auto id : selection.topic_ids) {
    const auto row = matrix.topic_row(*matrix.topic_index(id));
    for (std::size_t p = 0; p < pis.size(); ++p) pis[p] += row[p];
  }
  return pis;
}

Recommendation recommend(const TopicSelection& selection, const TopicProgramMatrix& matrix, std::size_t tau) {
  if (tau < 1) throw std::invalid_argument("recommend: tau must be >= 1");
  const auto pis = program_interest_scores(selection, matrix);
  const auto& programs = matrix.programs();
  const auto& rank = matrix.id_rank();

  std::vector<double> rpis(pis.size());
  std::vector<std::uint32_t> candidates;
  for (std::uint32_t p = 0; p < pis.size(); ++p) {
    rpis[p] = static_cast<double>(pis[p]) / static_cast<double>(programs[p].course_count);
    if (pis[p] > 0) candidates.push_back(p);
  }
  const auto keep = std::min(tau, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep), candidates.end(),
                    [&](std::uint32_t a, std::uint32_t b) {
                      if (rpis[a] != rpis[b]) return rpis[a] > rpis[b];
                      return rank[a] < rank[b];
                    });
  candidates.resize(keep);

  Recommendation out;
  out.selection = selection.topic_ids;
  if (candidates.empty()) return out;
  const double best = rpis[candidates.front()];
  for (auto p : candidates) {
    out.entries.push_back({programs[p].id, programs[p].name, pis[p], rpis[p], 100.0 * (rpis[p] / best)});
  }
  return out;
}

double round_score(double score) { return std::round(score * 10.0) / 10.0; }

TopicScoreTable topic_scores(const TopicSelection& selection, const TopicProgramMatrix& matrix,
                             std::span<const ProgramId> programs) {
  const auto pis = program_interest_scores(selection, matrix);
  TopicScoreTable table;
  table.topics = selection.topic_ids;
  for (std::size_t p = 0; p < pis.size(); ++p) {
    table.normalizer = std::max(table.normalizer, static_cast<double>(pis[p]) / matrix.programs()[p].course_count);
  }
  for (const auto& id : programs) {
    const auto idx = matrix.program_index(id);
    if (!idx) throw std::out_of_range("unknown program id '" + id.str() + "'");
    const auto& info = matrix.programs()[*idx];
    const double size = info.course_count;
    TopicScoreRow row{info.id, info.name, 0.0, {}, {}};
    for (auto t : selection.topic_ids) {
      const double raw = matrix.count(*matrix.topic_index(t), *idx) / size;
      row.raw.push_back(raw);
      row.cells.push_back(table.normalizer > 0.0 ? raw / table.normalizer : 0.0);
    }
    const double rpis = static_cast<double>(pis[*idx]) / size;
    row.aggregate = table.normalizer > 0.0 ? rpis / table.normalizer : 0.0;
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace toprorec
