#include "cli.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "toprorec/catalog.hpp"
#include "toprorec/recommender.hpp"
#include "toprorec/reports.hpp"
#include "toprorec/service.hpp"
#include "toprorec/snapshot.hpp"
#include "toprorec/topic_model.hpp"

namespace toprorec::cli {

using nlohmann::json;

namespace {

std::uint32_t parse_uint(const std::string& s) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a non-negative integer: '" + s + "'");
  }
  if (pos != s.size() || s.empty() || s.front() == '-') throw std::invalid_argument("not a non-negative integer: '" + s + "'");
  return static_cast<std::uint32_t>(v);
}

std::vector<std::uint32_t> parse_values(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dots = item.find("..");
    if (dots != std::string::npos) {
      const auto lo = parse_uint(item.substr(0, dots));
      const auto hi = parse_uint(item.substr(dots + 2));
      if (lo > hi) throw std::invalid_argument("empty range '" + item + "'");
      for (auto v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(parse_uint(item));
    }
  }
  if (out.empty()) throw std::invalid_argument("empty value list");
  return out;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << bytes;
  if (!f) throw std::runtime_error("failed writing " + path);
}

httplib::Server* g_server = nullptr;

void stop_server(int) {
  if (g_server) g_server->stop();
}

}  // namespace

std::vector<std::uint32_t> parse_id_list(const std::string& text) { return parse_values(text); }

GridSpec parse_grid(const std::vector<std::string>& tokens) {
  GridSpec grid;
  std::map<std::string, std::vector<std::uint32_t>*> axes = {
      {"h", &grid.h}, {"phi", &grid.phi}, {"gamma", &grid.gamma}, {"tau", &grid.tau}};
  for (const auto& tok : tokens) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("grid token '" + tok + "' is not key=values");
    const auto it = axes.find(tok.substr(0, eq));
    if (it == axes.end()) throw std::invalid_argument("unknown grid axis '" + tok.substr(0, eq) + "'");
    *it->second = parse_values(tok.substr(eq + 1));
  }
  for (const auto& [name, axis] : axes) {
    if (axis->empty()) throw std::invalid_argument("grid axis '" + name + "' is missing");
  }
  return grid;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"toprorec: interest-topic study program recommender"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");

  // ingest
  std::string catalog_path, clean_config_path, out_path, format = "json";
  auto* ingest = app.add_subcommand("ingest", "Validate and clean a catalog into a snapshot");
  ingest->add_option("--catalog", catalog_path, "Catalog JSON file or CSV directory")->required();
  ingest->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  ingest->add_option("--clean-config", clean_config_path, "Cleaning config JSON");
  ingest->add_option("--out", out_path, "Snapshot output path")->required();

  // mine
  std::string snapshot_path;
  TopicModelConfig model;
  auto* mine = app.add_subcommand("mine", "Mine interest topics from a snapshot");
  mine->add_option("--snapshot", snapshot_path)->required();
  mine->add_option("--h", model.h, "Number of interest topics")->capture_default_str();
  mine->add_option("--gamma", model.gamma, "Keywords per topic")->capture_default_str();
  mine->add_option("--seed", model.seed)->capture_default_str();
  mine->add_option("--clusterer", model.clusterer)->capture_default_str();
  mine->add_option("--out", out_path)->required();

  // matrix
  std::string topics_path, matrix_path;
  auto* matrix_cmd = app.add_subcommand("matrix", "Export the topic/program count matrix as CSV");
  matrix_cmd->add_option("--snapshot", snapshot_path)->required();
  matrix_cmd->add_option("--topics", topics_path)->required();
  matrix_cmd->add_option("--out", out_path)->required();

  // recommend
  std::string select;
  std::size_t tau = 7, phi = 8;
  bool explain = false, as_json = false;
  std::string explain_programs;
  auto* rec_cmd = app.add_subcommand("recommend", "Rank programs for a topic selection");
  rec_cmd->add_option("--snapshot", snapshot_path);
  rec_cmd->add_option("--topics", topics_path);
  rec_cmd->add_option("--matrix", matrix_path, "Precomputed matrix CSV (replaces --snapshot/--topics)");
  rec_cmd->add_option("--select", select, "Comma-separated topic ids")->required();
  rec_cmd->add_option("--tau", tau)->capture_default_str();
  rec_cmd->add_option("--phi", phi)->capture_default_str();
  rec_cmd->add_flag("--explain", explain, "Print per-topic scores");
  rec_cmd->add_option("--explain-programs", explain_programs, "Extra program ids for the explanation table");
  rec_cmd->add_flag("--json", as_json, "Emit the Recommendation JSON");

  // evaluate
  std::vector<std::string> grid_tokens;
  bool up_to = false;
  unsigned threads = 0;
  auto* eval_cmd = app.add_subcommand("evaluate", "Program reachability over a parameter grid");
  eval_cmd->add_option("--snapshot", snapshot_path, "Snapshot to re-mine topics from per (h, gamma)");
  eval_cmd->add_option("--matrix", matrix_path, "Single precomputed matrix (grid h and gamma must be singletons)");
  eval_cmd->add_option("--seed", model.seed)->capture_default_str();
  eval_cmd->add_option("--grid", grid_tokens, "h=.. phi=.. gamma=.. tau=..")->required()->expected(1, 4);
  eval_cmd->add_flag("--up-to", up_to, "Union selection sizes 1..phi");
  eval_cmd->add_option("--threads", threads);
  eval_cmd->add_option("--out", out_path)->required();

  // metrics
  std::string sessions_path;
  auto* metrics_cmd = app.add_subcommand("metrics", "Personalization and coverage of recorded sessions");
  metrics_cmd->add_option("--sessions", sessions_path, "Binary matrix CSV or recommendations JSON")->required();
  metrics_cmd->add_option("--snapshot", snapshot_path, "Catalog snapshot for college-level metrics");
  metrics_cmd->add_option("--out", out_path)->required();

  // serve
  std::string bind = "127.0.0.1:8080", admin_token, ui_dir;
  std::string serve_catalog;
  unsigned ttl_minutes = 30;
  auto* serve = app.add_subcommand("serve", "Run the HTTP JSON API");
  serve->add_option("--bind", bind)->envname("TOPROREC_BIND")->capture_default_str();
  serve->add_option("--catalog", serve_catalog)->envname("TOPROREC_CATALOG");
  serve->add_option("--topics", topics_path)->envname("TOPROREC_TOPICS");
  serve->add_option("--matrix", matrix_path)->envname("TOPROREC_MATRIX");
  serve->add_option("--phi", phi)->envname("TOPROREC_PHI")->capture_default_str();
  serve->add_option("--tau", tau)->envname("TOPROREC_TAU")->capture_default_str();
  serve->add_option("--admin-token", admin_token)->envname("TOPROREC_ADMIN_TOKEN");
  serve->add_option("--session-ttl-minutes", ttl_minutes)->envname("TOPROREC_SESSION_TTL")->capture_default_str();
  serve->add_option("--ui-dir", ui_dir)->envname("TOPROREC_UI_DIR");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*ingest) {
      const auto cleaning = clean_config_path.empty() ? CleaningConfig::defaults() : load_cleaning_config(clean_config_path);
      const auto catalog = load_catalog(catalog_path, format == "csv" ? CatalogFormat::csv : CatalogFormat::json, cleaning);
      write_file(out_path, serialize_snapshot(catalog, cleaning));
      out << "ingested " << catalog.n() << " programs, " << catalog.m() << " courses, "
          << catalog.knowledge_map().edge_count() << " edges -> " << out_path << "\n";
      return 0;
    }
    if (*mine) {
      const auto snap = load_snapshot(snapshot_path);
      const auto topics = mine_topics(snap.catalog, model);
      write_file(out_path, export_topics(topics));
      out << "mined " << topics.topics.size() << " topics (h=" << model.h << ", gamma=" << model.gamma << ") -> "
          << out_path << "\n";
      return 0;
    }
    if (*matrix_cmd) {
      const auto snap = load_snapshot(snapshot_path);
      const auto topics = import_topics(topics_path);
      write_file(out_path, matrix_to_csv(build_topic_program_matrix(snap.catalog, topics)));
      return 0;
    }
    if (*rec_cmd) {
      TopicProgramMatrix matrix;
      if (!matrix_path.empty()) {
        matrix = load_matrix_csv(matrix_path);
      } else if (!snapshot_path.empty() && !topics_path.empty()) {
        matrix = build_topic_program_matrix(load_snapshot(snapshot_path).catalog, import_topics(topics_path));
      } else {
        err << "recommend: pass --matrix, or --snapshot with --topics\n";
        return 1;
      }
      TopicSelection selection{parse_id_list(select)};
      validate_selection(selection, matrix, phi);
      const auto rec = recommend(selection, matrix, tau);
      std::vector<ProgramId> shown;
      for (const auto& e : rec.entries) shown.push_back(e.program);
      if (!explain_programs.empty()) {
        std::stringstream ss(explain_programs);
        std::string id;
        while (std::getline(ss, id, ',')) shown.emplace_back(id);
      }
      if (as_json) {
        json body = to_json(rec);
        if (explain || !explain_programs.empty()) body["topic_scores"] = to_json(topic_scores(selection, matrix, shown));
        out << body.dump(1) << "\n";
      } else {
        out << format_recommendation(rec);
        if (explain || !explain_programs.empty()) out << "\n" << format_topic_scores(topic_scores(selection, matrix, shown));
      }
      return 0;
    }
    if (*eval_cmd) {
      const auto grid = parse_grid(grid_tokens);
      MatrixProvider provider;
      std::optional<IngestSnapshot> snap;
      std::map<std::uint32_t, TopicSet> mined;  // per h, at the largest gamma
      std::optional<TopicProgramMatrix> fixed;
      if (!matrix_path.empty()) {
        if (grid.gamma.size() != 1) {
          err << "evaluate: a single --matrix needs a singleton gamma axis\n";
          return 1;
        }
        fixed = load_matrix_csv(matrix_path);
        provider = [&](std::uint32_t, std::uint32_t) { return *fixed; };
      } else if (!snapshot_path.empty()) {
        snap = load_snapshot(snapshot_path);
        const auto max_gamma = *std::max_element(grid.gamma.begin(), grid.gamma.end());
        provider = [&, max_gamma](std::uint32_t h, std::uint32_t gamma) {
          auto it = mined.find(h);
          if (it == mined.end()) {
            TopicModelConfig cfg = model;
            cfg.h = h;
            cfg.gamma = max_gamma;
            it = mined.emplace(h, mine_topics(snap->catalog, cfg)).first;
          }
          // Top-gamma keywords of the same clustering are a prefix of the top-max_gamma list.
          TopicSet topics = it->second;
          topics.gamma = gamma;
          for (auto& t : topics.topics) {
            if (t.keywords.size() > gamma) t.keywords.resize(gamma);
          }
          return build_topic_program_matrix(snap->catalog, topics);
        };
      } else {
        err << "evaluate: pass --snapshot or --matrix\n";
        return 1;
      }
      ReachabilityOptions options;
      options.up_to = up_to;
      options.threads = threads;
      const auto results = reachability_grid(provider, grid, options);
      write_file(out_path, reachability_csv(results));
      out << "evaluated " << results.size() << " parameter points -> " << out_path << "\n";
      return 0;
    }
    if (*metrics_cmd) {
      std::optional<Catalog> catalog;
      if (!snapshot_path.empty()) catalog = load_snapshot(snapshot_path).catalog;
      RecommendationMatrix programs;
      json report;
      const bool is_json = sessions_path.size() >= 5 && sessions_path.substr(sessions_path.size() - 5) == ".json";
      if (is_json) {
        std::ifstream in(sessions_path);
        if (!in) throw ParseError("cannot open " + sessions_path);
        json j;
        try {
          j = json::parse(in);
        } catch (const json::parse_error& e) {
          throw ParseError(std::string("sessions: ") + e.what());
        }
        const auto sessions = sessions_from_json(j);
        std::vector<ProgramId> columns;
        if (catalog) {
          for (const auto& p : catalog->programs()) columns.push_back(p.id);
        } else {
          std::set<ProgramId> seen;
          for (const auto& s : sessions) {
            for (const auto& e : s.entries) seen.insert(e.program);
          }
          columns.assign(seen.begin(), seen.end());
        }
        programs = program_matrix(sessions, columns);
        if (catalog) report["coverage"] = to_json(coverage_report(sessions, *catalog));
      } else {
        programs = load_recommendation_matrix_csv(sessions_path);
      }
      std::set<std::vector<std::uint8_t>> unique(programs.rows.begin(), programs.rows.end());
      report["sessions"] = programs.rows.size();
      report["unique_program_sets"] = unique.size();
      report["program"] = to_json(personalization(programs));
      if (catalog) {
        const auto colleges = college_matrix(programs, *catalog);
        std::set<std::vector<std::uint8_t>> unique_colleges(colleges.rows.begin(), colleges.rows.end());
        report["unique_college_sets"] = unique_colleges.size();
        report["college"] = to_json(personalization(colleges));
      }
      write_file(out_path, report.dump(1) + "\n");
      out << "personalization " << report["program"]["personalization"].get<double>() << " -> " << out_path << "\n";
      return 0;
    }
    if (*serve) {
      service::Options options;
      options.phi = phi;
      options.tau = tau;
      options.admin_token = admin_token;
      options.session_ttl = std::chrono::minutes(ttl_minutes);
      service::Api api(options);
      service::EngineSources sources;
      if (!serve_catalog.empty()) sources.catalog = serve_catalog;
      if (!topics_path.empty()) sources.topics = topics_path;
      if (!matrix_path.empty()) sources.matrix = matrix_path;
      if (sources.catalog || sources.topics || sources.matrix) api.install(service::Engine::load(sources));

      const auto colon = bind.rfind(':');
      if (colon == std::string::npos) {
        err << "serve: --bind must be host:port\n";
        return 1;
      }
      httplib::Server server;
      service::register_routes(server, api, ui_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(ui_dir));
      g_server = &server;
      std::signal(SIGINT, stop_server);
      std::signal(SIGTERM, stop_server);
      out << "listening on " << bind << std::endl;
      const bool ok = server.listen(bind.substr(0, colon), static_cast<int>(parse_uint(bind.substr(colon + 1))));
      g_server = nullptr;
      if (!ok) {
        err << "serve: cannot bind " << bind << "\n";
        return 1;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace toprorec::cli
