#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "setquest/discovery.hpp"

namespace setquest::service {

struct Response {
  int status = 200;
  nlohmann::json body;
};

struct ServiceConfig {
  std::chrono::seconds ttl{3600};
  /// Reads SETQUEST_TTL_SECONDS.
  static ServiceConfig from_env();
};

/// Transport-independent request handling for the discovery endpoints. Safe to call
/// from many threads: the stores are guarded by reader/writer locks and every session
/// has its own mutex, so answers to one session are applied one at a time.
class SessionService {
 public:
  using Clock = std::chrono::steady_clock;

  explicit SessionService(ServiceConfig config = {});

  /// Routes "POST /collections", "POST /sessions", "GET /sessions/{id}",
  /// "POST /sessions/{id}/answer", "GET /collections/{id}/stats",
  /// "POST /collections/{id}/tree". Never throws.
  Response handle(std::string_view method, std::string_view path, std::string_view body);

  /// Test hook: pretend this much idle time has passed for every session.
  void advance_clock(std::chrono::seconds by);
  std::size_t session_count() const;

 private:
  struct StoredCollection {
    std::shared_ptr<const Collection> collection;
    std::shared_ptr<MemoCache> ad_cache;
    std::shared_ptr<MemoCache> h_cache;
  };
  struct StoredSession {
    std::mutex mutex;
    std::string collection_id;
    Clock::time_point created_at;
    std::atomic<Clock::rep> last_access{0};
    std::unique_ptr<Session> session;
  };

  Response upload_collection(std::string_view body);
  Response create_session(std::string_view body);
  Response get_session(const std::string& id);
  Response answer(const std::string& id, std::string_view body);
  Response collection_stats(const std::string& id);
  Response build_tree(const std::string& id, std::string_view body);

  std::shared_ptr<StoredCollection> find_collection(const std::string& id) const;
  std::shared_ptr<StoredSession> find_session(const std::string& id);
  nlohmann::json session_state(const std::string& id, const StoredSession& s, bool full) const;
  void sweep_expired();
  std::string new_id(char prefix);
  Clock::time_point now() const;

  ServiceConfig config_;
  mutable std::shared_mutex collections_mutex_;
  std::map<std::string, std::shared_ptr<StoredCollection>> collections_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<StoredSession>> sessions_;
  std::mutex id_mutex_;
  std::mt19937_64 id_rng_;
  std::uint64_t id_counter_ = 0;
  std::atomic<std::int64_t> clock_offset_s_{0};
};

/// HTTP front end forwarding every request to a SessionService. CORS is open so a
/// browser client on another origin can talk to it.
class HttpServer {
 public:
  explicit HttpServer(SessionService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds without serving yet; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// SETQUEST_PORT or 8080.
int port_from_env();

}  // namespace setquest::service
