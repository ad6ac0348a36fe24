#include "toprorec/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "toprorec/csv.hpp"

namespace toprorec {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace {

using Bitmap = std::vector<std::uint8_t>;

// Enumerates topic subsets depth-first, carrying running PIS sums, and marks
// which programs land in the top-tau list for every requested (size, tau).
class SubsetSweep {
 public:
  SubsetSweep(const TopicProgramMatrix& matrix, std::vector<bool> evaluate_size, std::vector<std::uint32_t> taus)
      : matrix_(matrix),
        n_(matrix.program_count()),
        h_(matrix.topic_count()),
        max_depth_(evaluate_size.size() - 1),
        evaluate_size_(std::move(evaluate_size)),
        taus_(std::move(taus)),
        tau_max_(*std::max_element(taus_.begin(), taus_.end())) {
    for (const auto& p : matrix.programs()) sizes_.push_back(p.course_count);
  }

  // reached[size][tau index] -> program bitmap
  using Reached = std::vector<std::vector<Bitmap>>;

  Reached run(unsigned threads) const {
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(h_, 1)));
    std::atomic<std::size_t> next{0};
    std::vector<Reached> partial(threads, empty_reached());
    auto worker = [&](unsigned w) {
      Worker state(*this);
      for (std::size_t first = next++; first < h_; first = next++) state.descend(first, partial[w]);
    };
    if (threads == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
      for (auto& t : pool) t.join();
    }
    // Set union; order of partial results does not matter.
    Reached out = empty_reached();
    for (const auto& part : partial) {
      for (std::size_t d = 0; d < out.size(); ++d) {
        for (std::size_t k = 0; k < taus_.size(); ++k) {
          for (std::size_t p = 0; p < n_; ++p) out[d][k][p] |= part[d][k][p];
        }
      }
    }
    return out;
  }

 private:
  const TopicProgramMatrix& matrix_;
  std::size_t n_, h_, max_depth_;
  std::vector<bool> evaluate_size_;
  std::vector<std::uint32_t> taus_;
  std::uint32_t tau_max_;
  std::vector<std::uint64_t> sizes_;

  Reached empty_reached() const {
    return Reached(max_depth_ + 1, std::vector<Bitmap>(taus_.size(), Bitmap(n_, 0)));
  }

  struct Worker {
    const SubsetSweep& s;
    std::vector<std::vector<std::uint64_t>> stack;
    std::vector<std::uint32_t> top;

    explicit Worker(const SubsetSweep& sweep)
        : s(sweep), stack(sweep.max_depth_ + 1, std::vector<std::uint64_t>(sweep.n_, 0)) {
      top.reserve(sweep.tau_max_ + 1);
    }

    // a ranks above b: larger pis/size (exact via cross-multiplication), then smaller id.
    [[nodiscard]] bool better(const std::vector<std::uint64_t>& pis, std::uint32_t a, std::uint32_t b) const {
      const auto lhs = pis[a] * s.sizes_[b];
      const auto rhs = pis[b] * s.sizes_[a];
      if (lhs != rhs) return lhs > rhs;
      return s.matrix_.id_rank()[a] < s.matrix_.id_rank()[b];
    }

    void evaluate(std::size_t depth, Reached& reached) {
      const auto& pis = stack[depth];
      top.clear();
      for (std::uint32_t p = 0; p < s.n_; ++p) {
        if (pis[p] == 0) continue;
        if (top.size() == s.tau_max_ && !better(pis, p, top.back())) continue;
        auto pos = top.end();
        while (pos != top.begin() && better(pis, p, *(pos - 1))) --pos;
        top.insert(pos, p);
        if (top.size() > s.tau_max_) top.pop_back();
      }
      for (std::size_t k = 0; k < s.taus_.size(); ++k) {
        const auto limit = std::min<std::size_t>(s.taus_[k], top.size());
        for (std::size_t i = 0; i < limit; ++i) reached[depth][k][top[i]] = 1;
      }
    }

    void descend(std::size_t topic, Reached& reached, std::size_t depth = 1) {
      const auto row = s.matrix_.topic_row(topic);
      auto& acc = stack[depth];
      const auto& prev = stack[depth - 1];
      for (std::size_t p = 0; p < s.n_; ++p) acc[p] = prev[p] + row[p];
      if (s.evaluate_size_[depth]) evaluate(depth, reached);
      if (depth == s.max_depth_) return;
      for (std::size_t next = topic + 1; next < s.h_; ++next) descend(next, reached, depth + 1);
    }
  };
};

void check_params(const TopicProgramMatrix& matrix, std::uint32_t h, std::uint32_t phi, std::uint32_t gamma,
                  std::uint32_t tau) {
  if (h != matrix.topic_count()) {
    throw InfeasibleError("reachability: h=" + std::to_string(h) + " but the matrix has " +
                          std::to_string(matrix.topic_count()) + " topics");
  }
  if (phi < 1 || phi > h) throw InfeasibleError("reachability: phi must lie in 1..h");
  if (tau < 1) throw InfeasibleError("reachability: tau must be >= 1");
  if (matrix.gamma() != 0 && gamma != matrix.gamma()) {
    throw InfeasibleError("reachability: matrix was built with gamma=" + std::to_string(matrix.gamma()));
  }
}

}  // namespace

std::vector<ReachabilityResult> reachability_sweep(const TopicProgramMatrix& matrix, std::uint32_t gamma,
                                                   std::span<const std::uint32_t> phis,
                                                   std::span<const std::uint32_t> taus,
                                                   const ReachabilityOptions& options) {
  if (phis.empty() || taus.empty()) throw InfeasibleError("reachability: empty phi or tau set");
  const auto h = static_cast<std::uint32_t>(matrix.topic_count());
  for (auto phi : phis) {
    for (auto tau : taus) check_params(matrix, h, phi, gamma, tau);
  }
  const std::uint32_t max_phi = *std::max_element(phis.begin(), phis.end());
  std::vector<bool> evaluate(max_phi + 1, false);
  for (std::uint32_t d = 1; d <= max_phi; ++d) {
    evaluate[d] = options.up_to || std::find(phis.begin(), phis.end(), d) != phis.end();
  }
  const SubsetSweep sweep(matrix, evaluate, {taus.begin(), taus.end()});
  const auto reached = sweep.run(options.threads);

  const std::size_t n = matrix.program_count();
  std::vector<ReachabilityResult> results;
  for (auto phi : phis) {
    for (std::size_t k = 0; k < taus.size(); ++k) {
      Bitmap hit(n, 0);
      std::uint64_t subsets = 0;
      for (std::uint32_t d = options.up_to ? 1 : phi; d <= phi; ++d) {
        for (std::size_t p = 0; p < n; ++p) hit[p] |= reached[d][k][p];
        subsets += binomial(h, d);
      }
      ReachabilityResult r;
      r.params = {h, phi, gamma, taus[k]};
      for (std::size_t p = 0; p < n; ++p) {
        if (hit[p]) r.reachable_programs.push_back(matrix.programs()[p].id);
      }
      std::sort(r.reachable_programs.begin(), r.reachable_programs.end());
      r.rho = n == 0 ? 0.0 : 100.0 * static_cast<double>(r.reachable_programs.size()) / static_cast<double>(n);
      r.subsets_evaluated = subsets;
      results.push_back(std::move(r));
    }
  }
  return results;
}

ReachabilityResult reachability(const TopicProgramMatrix& matrix, const ReachabilityParams& params,
                                const ReachabilityOptions& options) {
  check_params(matrix, params.h, params.phi, params.gamma, params.tau);
  const std::uint32_t phis[] = {params.phi};
  const std::uint32_t taus[] = {params.tau};
  return std::move(reachability_sweep(matrix, params.gamma, phis, taus, options).front());
}

std::vector<ReachabilityResult> reachability_grid(const MatrixProvider& provider, const GridSpec& grid,
                                                  const ReachabilityOptions& options) {
  if (grid.size() == 0) throw InfeasibleError("reachability grid: every axis needs at least one value");
  std::vector<ReachabilityResult> out;
  out.reserve(grid.size());
  for (auto h : grid.h) {
    for (auto gamma : grid.gamma) {
      const auto matrix = provider(h, gamma);
      auto part = reachability_sweep(matrix, gamma, grid.phi, grid.tau, options);
      std::move(part.begin(), part.end(), std::back_inserter(out));
    }
  }
  return out;
}

std::string reachability_csv(std::span<const ReachabilityResult> results) {
  std::string out = "h,phi,gamma,tau,rho,reachable_count,subsets\n";
  char buf[160];
  for (const auto& r : results) {
    std::snprintf(buf, sizeof buf, "%u,%u,%u,%u,%.4f,%zu,%llu\n", r.params.h, r.params.phi, r.params.gamma,
                  r.params.tau, r.rho, r.reachable_programs.size(),
                  static_cast<unsigned long long>(r.subsets_evaluated));
    out += buf;
  }
  return out;
}

RecommendationMatrix parse_recommendation_matrix_csv(std::string_view text) {
  auto rows = csv::parse(text);
  if (rows.empty()) throw ParseError("recommendation matrix: empty file");
  RecommendationMatrix m;
  m.columns = std::move(rows.front());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != m.columns.size()) {
      throw ParseError("recommendation matrix: row " + std::to_string(r + 1) + " has the wrong arity");
    }
    std::vector<std::uint8_t> row;
    for (const auto& cell : rows[r]) {
      if (cell == "0") {
        row.push_back(0);
      } else if (cell == "1") {
        row.push_back(1);
      } else {
        throw ParseError("recommendation matrix: entries must be 0 or 1, got '" + cell + "'");
      }
    }
    m.rows.push_back(std::move(row));
  }
  return m;
}

RecommendationMatrix load_recommendation_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_recommendation_matrix_csv(ss.str());
}

std::string recommendation_matrix_csv(const RecommendationMatrix& matrix) {
  std::string out = csv::format_row(matrix.columns);
  for (const auto& row : matrix.rows) {
    csv::Row cells;
    for (auto v : row) cells.push_back(v ? "1" : "0");
    out += csv::format_row(cells);
  }
  return out;
}

RecommendationMatrix program_matrix(std::span<const Recommendation> sessions, std::span<const ProgramId> programs) {
  RecommendationMatrix m;
  std::unordered_map<ProgramId, std::size_t> col;
  for (const auto& p : programs) {
    col.emplace(p, m.columns.size());
    m.columns.push_back(p.str());
  }
  for (const auto& s : sessions) {
    std::vector<std::uint8_t> row(m.columns.size(), 0);
    for (const auto& e : s.entries) {
      const auto it = col.find(e.program);
      if (it == col.end()) throw ValidationError("session recommends unknown program '" + e.program.str() + "'");
      row[it->second] = 1;
    }
    m.rows.push_back(std::move(row));
  }
  return m;
}

RecommendationMatrix college_matrix(const RecommendationMatrix& programs, const Catalog& catalog) {
  std::set<std::string> labels;
  for (const auto& p : catalog.programs()) labels.insert(p.college);
  RecommendationMatrix m;
  m.columns.assign(labels.begin(), labels.end());
  std::vector<std::size_t> college_of;
  for (const auto& id : programs.columns) {
    const auto idx = catalog.program_index(ProgramId(id));
    if (!idx) throw ValidationError("recommendation matrix names unknown program '" + id + "'");
    const auto& label = catalog.programs()[*idx].college;
    college_of.push_back(static_cast<std::size_t>(std::distance(labels.begin(), labels.find(label))));
  }
  for (const auto& row : programs.rows) {
    std::vector<std::uint8_t> out(m.columns.size(), 0);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j]) out[college_of[j]] = 1;
    }
    m.rows.push_back(std::move(out));
  }
  return m;
}

PersonalizationResult personalization(const RecommendationMatrix& matrix) {
  const auto& rows = matrix.rows;
  if (rows.size() < 2) throw ValidationError("personalization needs at least two rows");
  std::vector<double> norms;
  for (std::size_t u = 0; u < rows.size(); ++u) {
    std::size_t ones = 0;
    for (auto v : rows[u]) ones += v;
    if (ones == 0) throw ValidationError("personalization: row " + std::to_string(u + 1) + " is all zero");
    norms.push_back(std::sqrt(static_cast<double>(ones)));
  }
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t u = 0; u < rows.size(); ++u) {
    for (std::size_t v = u + 1; v < rows.size(); ++v) {
      std::size_t common = 0;
      for (std::size_t j = 0; j < rows[u].size(); ++j) common += rows[u][j] & rows[v][j];
      sum += static_cast<double>(common) / (norms[u] * norms[v]);
      ++pairs;
    }
  }
  PersonalizationResult r;
  r.pairs = pairs;
  r.mean_similarity = sum / static_cast<double>(pairs);
  r.personalization = 1.0 - r.mean_similarity;
  return r;
}

CoverageReport coverage_report(std::span<const Recommendation> sessions, const Catalog& catalog) {
  CoverageReport report;
  report.sessions = sessions.size();
  for (const auto& s : sessions) report.max_rank = std::max(report.max_rank, s.entries.size());

  std::set<std::string> labels;
  for (const auto& p : catalog.programs()) labels.insert(p.college);
  std::map<std::string, std::size_t> college_pos;
  for (const auto& l : labels) {
    college_pos.emplace(l, report.colleges.size());
    report.colleges.push_back({l, l, 0, std::vector<std::size_t>(report.max_rank, 0)});
  }
  for (const auto& p : catalog.programs()) {
    report.programs.push_back({p.id.str(), p.name, 0, std::vector<std::size_t>(report.max_rank, 0)});
  }

  std::set<std::vector<std::string>> program_sets;
  std::set<std::vector<std::string>> college_sets;
  for (const auto& s : sessions) {
    std::set<std::string> session_colleges;
    std::vector<std::string> ids;
    for (std::size_t r = 0; r < s.entries.size(); ++r) {
      const auto idx = catalog.program_index(s.entries[r].program);
      if (!idx) throw ValidationError("session recommends unknown program '" + s.entries[r].program.str() + "'");
      auto& entry = report.programs[*idx];
      ++entry.recommended;
      ++entry.rank_counts[r];
      const auto& college = catalog.programs()[*idx].college;
      ++report.colleges[college_pos.at(college)].rank_counts[r];
      session_colleges.insert(college);
      ids.push_back(entry.id);
    }
    for (const auto& c : session_colleges) ++report.colleges[college_pos.at(c)].recommended;
    std::sort(ids.begin(), ids.end());
    program_sets.insert(std::move(ids));
    college_sets.emplace(session_colleges.begin(), session_colleges.end());
    if (session_colleges.size() == 1) ++report.single_college_sessions;
    report.max_colleges_per_session = std::max(report.max_colleges_per_session, session_colleges.size());
  }
  for (const auto& p : report.programs) report.programs_reached += p.recommended > 0 ? 1 : 0;
  report.unique_program_sets = program_sets.size();
  report.unique_college_sets = college_sets.size();
  return report;
}

}  // namespace toprorec
