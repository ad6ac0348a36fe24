#include "toprorec/service.hpp"

#include <cstdio>

#include <httplib.h>
#include <json.hpp>

#include "toprorec/reports.hpp"
#include "toprorec/snapshot.hpp"

namespace toprorec::service {

using nlohmann::json;

std::shared_ptr<const Engine> Engine::load(const EngineSources& sources) {
  auto engine = std::make_shared<Engine>();
  if (sources.topics) engine->topics = import_topics(*sources.topics);
  if (sources.catalog) engine->catalog = load_snapshot(*sources.catalog).catalog;

  if (sources.matrix) {
    engine->matrix = load_matrix_csv(*sources.matrix, engine->topics ? engine->topics->gamma : 0);
  } else if (engine->catalog && engine->topics) {
    engine->matrix = build_topic_program_matrix(*engine->catalog, *engine->topics);
  } else {
    throw ValidationError("engine needs a matrix, or a catalog together with topics");
  }
  if (engine->topics) {
    for (const auto& t : engine->topics->topics) {
      if (!engine->matrix.topic_index(t.id)) {
        throw ValidationError("topic " + std::to_string(t.id) + " has no column in the matrix");
      }
    }
  }
  return engine;
}

namespace {

Response json_response(int status, const json& body) { return {status, body.dump(), "application/json"}; }

Response error(int status, std::string_view message) {
  return json_response(status, json{{"error", message}});
}

std::optional<json> parse_body(std::string_view body) {
  try {
    auto j = json::parse(body);
    if (j.is_object()) return j;
  } catch (const json::parse_error&) {
  }
  return std::nullopt;
}

TopicSelection selection_from(const json& body) {
  if (!body.contains("topic_ids") || !body["topic_ids"].is_array()) {
    throw SelectionError("body must contain a topic_ids array");
  }
  TopicSelection s;
  for (const auto& v : body["topic_ids"]) {
    if (!v.is_number_unsigned()) throw SelectionError("topic ids must be positive integers");
    s.topic_ids.push_back(v.get<TopicId>());
  }
  return s;
}

}  // namespace

Api::Api(Options options, std::function<Clock::time_point()> now)
    : options_(std::move(options)), now_(std::move(now)), session_rng_(std::random_device{}()) {}

void Api::install(std::shared_ptr<const Engine> engine) {
  std::lock_guard lock(engine_mutex_);
  engine_ = std::move(engine);
}

std::shared_ptr<const Engine> Api::engine() const {
  std::lock_guard lock(engine_mutex_);
  return engine_;
}

Response Api::get_health() const {
  const auto e = engine();
  return json_response(e ? 200 : 503, json{{"loaded", e != nullptr}});
}

Response Api::get_topics() const {
  const auto e = engine();
  if (!e) return error(503, "engine not loaded");
  if (!e->topics) return error(503, "no topic set loaded");
  return {200, export_topics(*e->topics), "application/json"};
}

Response Api::post_recommend(std::string_view body) {
  const auto e = engine();
  if (!e) return error(503, "engine not loaded");
  const auto req = parse_body(body);
  if (!req) return error(400, "body must be a JSON object");
  try {
    const auto selection = selection_from(*req);
    validate_selection(selection, e->matrix, options_.phi);
    const auto rec = recommend(selection, e->matrix, options_.tau);
    std::vector<ProgramId> shown;
    for (const auto& entry : rec.entries) shown.push_back(entry.program);
    json out = to_json(rec);
    out["topic_scores"] = to_json(topic_scores(selection, e->matrix, shown));

    std::string requested;
    if (req->contains("session_id") && (*req)["session_id"].is_string()) requested = (*req)["session_id"];
    const auto rec_body = out.dump();
    out["session_id"] = touch_session(requested, selection.topic_ids, rec_body);
    return json_response(200, out);
  } catch (const SelectionError& ex) {
    return error(400, ex.what());
  }
}

Response Api::post_explain(std::string_view body) const {
  const auto e = engine();
  if (!e) return error(503, "engine not loaded");
  const auto req = parse_body(body);
  if (!req) return error(400, "body must be a JSON object");
  try {
    const auto selection = selection_from(*req);
    validate_selection(selection, e->matrix, options_.phi);
    std::vector<ProgramId> programs;
    if (req->contains("programs")) {
      const auto& list = (*req)["programs"];
      if (!list.is_array()) return error(400, "programs must be an array of program ids");
      for (const auto& p : list) {
        if (!p.is_string()) return error(400, "programs must be an array of program ids");
        programs.emplace_back(p.get<std::string>());
      }
    } else {
      for (const auto& entry : recommend(selection, e->matrix, options_.tau).entries) programs.push_back(entry.program);
    }
    return json_response(200, to_json(topic_scores(selection, e->matrix, programs)));
  } catch (const SelectionError& ex) {
    return error(400, ex.what());
  } catch (const std::out_of_range& ex) {
    return error(400, ex.what());
  }
}

Response Api::post_reload(std::string_view body, std::string_view admin_token) {
  if (options_.admin_token.empty() || admin_token != options_.admin_token) {
    return error(401, "admin token required");
  }
  const auto req = parse_body(body);
  if (!req) return error(400, "body must be a JSON object");
  EngineSources sources;
  try {
    if (req->contains("catalog_path")) sources.catalog = (*req)["catalog_path"].get<std::string>();
    if (req->contains("topics_path")) sources.topics = (*req)["topics_path"].get<std::string>();
    if (req->contains("matrix_path")) sources.matrix = (*req)["matrix_path"].get<std::string>();
  } catch (const json::exception&) {
    return error(400, "paths must be strings");
  }
  std::shared_ptr<const Engine> next;
  try {
    next = Engine::load(sources);
  } catch (const std::exception& ex) {
    return error(422, ex.what());
  }
  install(next);
  return json_response(200, json{{"status", "reloaded"},
                                 {"programs", next->matrix.program_count()},
                                 {"topics", next->matrix.topic_count()}});
}

std::size_t Api::session_count() {
  std::lock_guard lock(session_mutex_);
  expire_sessions_locked(now_());
  return sessions_.size();
}

void Api::expire_sessions_locked(Clock::time_point now) {
  std::erase_if(sessions_, [&](const auto& kv) { return now - kv.second.touched >= options_.session_ttl; });
}

std::string Api::touch_session(const std::string& requested, const std::vector<TopicId>& selection,
                               const std::string& recommendation) {
  std::lock_guard lock(session_mutex_);
  const auto now = now_();
  expire_sessions_locked(now);
  std::string id = requested;
  if (id.empty() || !sessions_.contains(id)) {
    do {
      char buf[33];
      std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(session_rng_()),
                    static_cast<unsigned long long>(session_rng_()));
      id = buf;
    } while (sessions_.contains(id));
  }
  sessions_[id] = Session{now, selection, recommendation};
  return id;
}

void register_routes(httplib::Server& server, Api& api, const std::optional<std::filesystem::path>& ui_dir) {
  auto send = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server.Get("/api/health", [&api, send](const httplib::Request&, httplib::Response& res) {
    send(res, api.get_health());
  });
  server.Get("/api/topics", [&api, send](const httplib::Request&, httplib::Response& res) {
    send(res, api.get_topics());
  });
  server.Post("/api/recommend", [&api, send](const httplib::Request& req, httplib::Response& res) {
    send(res, api.post_recommend(req.body));
  });
  server.Post("/api/explain", [&api, send](const httplib::Request& req, httplib::Response& res) {
    send(res, api.post_explain(req.body));
  });
  server.Post("/api/admin/reload", [&api, send](const httplib::Request& req, httplib::Response& res) {
    std::string token = req.get_header_value("X-Admin-Token");
    const auto auth = req.get_header_value("Authorization");
    if (token.empty() && auth.rfind("Bearer ", 0) == 0) token = auth.substr(7);
    send(res, api.post_reload(req.body, token));
  });
  if (ui_dir && std::filesystem::is_directory(*ui_dir)) {
    server.set_mount_point("/", ui_dir->string());
  }
}

}  // namespace toprorec::service
