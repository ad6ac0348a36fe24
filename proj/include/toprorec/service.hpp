#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "toprorec/catalog.hpp"
#include "toprorec/recommender.hpp"
#include "toprorec/topics.hpp"

namespace httplib {
class Server;
}

namespace toprorec::service {

// Where an engine snapshot is loaded from. Either catalog + topics (the
// matrix is derived), or a precomputed matrix CSV with optional topics.
struct EngineSources {
  std::optional<std::filesystem::path> catalog;  // snapshot or raw catalog JSON
  std::optional<std::filesystem::path> topics;
  std::optional<std::filesystem::path> matrix;
};

// Immutable scoring state shared by concurrent requests.
struct Engine {
  std::optional<Catalog> catalog;
  std::optional<TopicSet> topics;
  TopicProgramMatrix matrix;

  // Throws ParseError / ValidationError on bad inputs.
  static std::shared_ptr<const Engine> load(const EngineSources& sources);
};

struct Options {
  std::size_t phi = 8;
  std::size_t tau = 7;
  std::chrono::seconds session_ttl{30 * 60};
  std::string admin_token;  // empty disables /api/admin/reload
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// The HTTP API independent of transport. Handlers are safe to call
// concurrently; reload swaps the engine atomically.
class Api {
 public:
  using Clock = std::chrono::steady_clock;

  explicit Api(Options options, std::function<Clock::time_point()> now = Clock::now);

  void install(std::shared_ptr<const Engine> engine);
  [[nodiscard]] std::shared_ptr<const Engine> engine() const;

  Response get_topics() const;
  Response post_recommend(std::string_view body);
  Response post_explain(std::string_view body) const;
  Response post_reload(std::string_view body, std::string_view admin_token);
  Response get_health() const;

  [[nodiscard]] std::size_t session_count();
  [[nodiscard]] const Options& options() const noexcept { return options_; }

 private:
  struct Session {
    Clock::time_point touched;
    std::vector<TopicId> last_selection;
    std::string last_recommendation;
  };

  Options options_;
  std::function<Clock::time_point()> now_;
  mutable std::mutex engine_mutex_;
  std::shared_ptr<const Engine> engine_;

  std::mutex session_mutex_;
  std::unordered_map<std::string, Session> sessions_;
  std::mt19937_64 session_rng_;

  std::string touch_session(const std::string& requested, const std::vector<TopicId>& selection,
                            const std::string& recommendation);
  void expire_sessions_locked(Clock::time_point now);
};

// Binds the API routes (and an optional static UI directory at "/").
void register_routes(httplib::Server& server, Api& api,
                     const std::optional<std::filesystem::path>& ui_dir = std::nullopt);

}  // namespace toprorec::service
