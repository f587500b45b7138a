#include "session_service.hpp"

#include <cstdlib>
#include <sstream>
#include <vector>

#include "setquest/datagen.hpp"
#include "setquest/tree_builder.hpp"

namespace setquest::service {
namespace {

using nlohmann::json;

Response error(int status, std::string_view code, const std::string& message) {
  return Response{status, json{{"error", message}, {"code", code}}};
}

std::vector<std::string> split_path(std::string_view path) {
  if (auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    std::size_t j = path.find('/', i);
    if (j == std::string_view::npos) j = path.size();
    if (j > i) out.emplace_back(path.substr(i, j - i));
    i = j;
  }
  return out;
}

json parse_body(std::string_view body) {
  if (body.empty()) return json::object();
  json doc = json::parse(body);  // throws json::parse_error
  if (!doc.is_object()) throw std::invalid_argument("request body must be a JSON object");
  return doc;
}

CostMetric metric_field(const json& doc) {
  if (!doc.contains("metric")) return CostMetric::kAverageDepth;
  auto m = parse_metric(doc["metric"].get<std::string>());
  if (!m) throw std::invalid_argument("metric must be \"ad\" or \"h\"");
  return *m;
}

json labels(const Collection& c, std::span<const SetId> sets) {
  auto out = json::array();
  for (SetId s : sets) out.push_back(c.set_label(s));
  return out;
}

}  // namespace

ServiceConfig ServiceConfig::from_env() {
  ServiceConfig cfg;
  if (const char* ttl = std::getenv("SETQUEST_TTL_SECONDS")) {
    char* end = nullptr;
    long v = std::strtol(ttl, &end, 10);
    if (end != ttl && *end == '\0' && v > 0) cfg.ttl = std::chrono::seconds(v);
  }
  return cfg;
}

int port_from_env() {
  if (const char* port = std::getenv("SETQUEST_PORT")) {
    char* end = nullptr;
    long v = std::strtol(port, &end, 10);
    if (end != port && *end == '\0' && v > 0 && v < 65536) return static_cast<int>(v);
  }
  return 8080;
}

SessionService::SessionService(ServiceConfig config) : config_(config), id_rng_(std::random_device{}()) {}

SessionService::Clock::time_point SessionService::now() const {
  return Clock::now() + std::chrono::seconds(clock_offset_s_.load());
}

void SessionService::advance_clock(std::chrono::seconds by) { clock_offset_s_ += by.count(); }

std::size_t SessionService::session_count() const {
  std::shared_lock lock(sessions_mutex_);
  return sessions_.size();
}

std::string SessionService::new_id(char prefix) {
  std::lock_guard lock(id_mutex_);
  std::ostringstream os;
  os << prefix << std::hex << (id_rng_() & 0xffffffffffffULL) << '-' << ++id_counter_;
  return os.str();
}

void SessionService::sweep_expired() {
  const auto cutoff = (now() - config_.ttl).time_since_epoch().count();
  std::unique_lock lock(sessions_mutex_);
  std::erase_if(sessions_, [&](const auto& kv) { return kv.second->last_access.load() < cutoff; });
}

Response SessionService::handle(std::string_view method, std::string_view path, std::string_view body) {
  try {
    sweep_expired();
    auto parts = split_path(path);
    const bool get = method == "GET", post = method == "POST";
    if (parts.size() == 1 && parts[0] == "collections" && post) return upload_collection(body);
    if (parts.size() == 1 && parts[0] == "sessions" && post) return create_session(body);
    if (parts.size() == 2 && parts[0] == "sessions" && get) return get_session(parts[1]);
    if (parts.size() == 3 && parts[0] == "sessions" && parts[2] == "answer" && post) return answer(parts[1], body);
    if (parts.size() == 3 && parts[0] == "collections" && parts[2] == "stats" && get) return collection_stats(parts[1]);
    if (parts.size() == 3 && parts[0] == "collections" && parts[2] == "tree" && post) return build_tree(parts[1], body);
    return error(404, "not_found", "no route for " + std::string(method) + " " + std::string(path));
  } catch (const ParseError& e) {
    Response r = error(400, "parse_error", e.what());
    if (e.line() != 0) r.body["line"] = e.line();
    return r;
  } catch (const json::exception& e) {
    return error(400, "bad_request", e.what());
  } catch (const std::invalid_argument& e) {
    return error(400, "bad_request", e.what());
  } catch (const GuardExceededError& e) {
    return error(422, "guard_exceeded", e.what());
  } catch (const std::exception& e) {
    return error(500, "internal", e.what());
  }
}

std::shared_ptr<SessionService::StoredCollection> SessionService::find_collection(const std::string& id) const {
  std::shared_lock lock(collections_mutex_);
  auto it = collections_.find(id);
  return it == collections_.end() ? nullptr : it->second;
}

std::shared_ptr<SessionService::StoredSession> SessionService::find_session(const std::string& id) {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return nullptr;
  it->second->last_access = now().time_since_epoch().count();
  return it->second;
}

Response SessionService::upload_collection(std::string_view body) {
  std::istringstream in{std::string(body)};
  auto stored = std::make_shared<StoredCollection>();
  stored->collection = std::make_shared<const Collection>(load_collection(in));
  stored->ad_cache = std::make_shared<MemoCache>(CostMetric::kAverageDepth);
  stored->h_cache = std::make_shared<MemoCache>(CostMetric::kHeight);
  const std::string id = new_id('c');
  json out{{"collection_id", id}, {"n", stored->collection->set_count()}, {"m", stored->collection->entity_count()}};
  {
    std::unique_lock lock(collections_mutex_);
    collections_.emplace(id, std::move(stored));
  }
  return Response{201, out};
}

Response SessionService::create_session(std::string_view body) {
  json doc = parse_body(body);
  if (!doc.contains("collection_id")) return error(400, "bad_request", "collection_id is required");
  const auto collection_id = doc["collection_id"].get<std::string>();
  auto stored = find_collection(collection_id);
  if (!stored) return error(404, "not_found", "unknown collection " + collection_id);

  const CostMetric metric = metric_field(doc);
  const StrategySpec spec = StrategySpec::parse(doc.value("strategy", std::string("klp:k=3")), metric);
  HaltCondition halt;
  if (doc.contains("max_questions")) halt.max_questions = doc["max_questions"].get<std::size_t>();
  if (doc.contains("stop_at_candidates")) halt.stop_at_candidates = doc["stop_at_candidates"].get<std::size_t>();
  std::vector<std::string> initial;
  if (doc.contains("initial")) initial = doc["initial"].get<std::vector<std::string>>();

  auto entry = std::make_shared<StoredSession>();
  entry->collection_id = collection_id;
  entry->created_at = now();
  entry->last_access = entry->created_at.time_since_epoch().count();
  auto cache = metric == CostMetric::kAverageDepth ? stored->ad_cache : stored->h_cache;
  entry->session = std::make_unique<Session>(Session::from_labels(stored->collection, initial, spec, halt, cache));

  const std::string id = new_id('s');
  json state = session_state(id, *entry, false);
  {
    std::unique_lock lock(sessions_mutex_);
    sessions_.emplace(id, std::move(entry));
  }
  return Response{201, state};
}

Response SessionService::get_session(const std::string& id) {
  auto s = find_session(id);
  if (!s) return error(404, "not_found", "unknown session " + id);
  std::lock_guard lock(s->mutex);
  return Response{200, session_state(id, *s, true)};
}

Response SessionService::answer(const std::string& id, std::string_view body) {
  auto s = find_session(id);
  if (!s) return error(404, "not_found", "unknown session " + id);
  json doc = parse_body(body);
  if (!doc.contains("answer") || !doc["answer"].is_string()) return error(400, "bad_request", "answer is required");
  auto a = parse_answer(doc["answer"].get<std::string>());
  if (!a) return error(400, "bad_request", "answer must be yes, no, or unknown");

  std::lock_guard lock(s->mutex);
  if (!s->session->awaiting_answer()) {
    return error(409, "conflict", "session is " + std::string(to_string(s->session->status())));
  }
  s->session->submit_answer(*a);
  return Response{200, session_state(id, *s, false)};
}

Response SessionService::collection_stats(const std::string& id) {
  auto stored = find_collection(id);
  if (!stored) return error(404, "not_found", "unknown collection " + id);
  CollectionStats st = stats(*stored->collection);
  return Response{200, json{{"collection_id", id},
                            {"n", st.n},
                            {"m", st.m},
                            {"size_min", st.size_min},
                            {"size_mean", st.size_mean},
                            {"size_max", st.size_max},
                            {"mean_jaccard", st.mean_jaccard},
                            {"pairs_sampled", st.pairs_sampled}}};
}

Response SessionService::build_tree(const std::string& id, std::string_view body) {
  auto stored = find_collection(id);
  if (!stored) return error(404, "not_found", "unknown collection " + id);
  json doc = parse_body(body);
  const CostMetric metric = metric_field(doc);
  const StrategySpec spec = StrategySpec::parse(doc.value("strategy", std::string("klp:k=3")), metric);
  BuildOptions options;
  options.max_nodes = doc.value("max_nodes", std::size_t{2'000'001});
  auto& cache = metric == CostMetric::kAverageDepth ? *stored->ad_cache : *stored->h_cache;
  BuildResult built = setquest::build_tree(stored->collection->all(), spec, cache, options);
  const Bound ad = tree_cost(built.tree, CostMetric::kAverageDepth);
  const Bound h = tree_cost(built.tree, CostMetric::kHeight);
  json histogram = json::object();
  for (auto [depth, count] : built.tree.depth_histogram()) histogram[std::to_string(depth)] = count;
  return Response{200, json{{"tree", tree_to_json(built.tree, *stored->collection)},
                            {"strategy", spec.to_string()},
                            {"metric", std::string(to_string(metric))},
                            {"average_depth", ad.to_string()},
                            {"average_depth_decimal", ad.to_decimal(3)},
                            {"height", h.value().num()},
                            {"depth_histogram", histogram}}};
}

json SessionService::session_state(const std::string& id, const StoredSession& s, bool full) const {
  const Session& session = *s.session;
  const Collection& c = session.collection();
  json out{{"session_id", id},
           {"collection_id", s.collection_id},
           {"status", std::string(to_string(session.status()))},
           {"candidate_count", session.candidates().size()},
           {"questions_asked", session.questions_asked()},
           {"strategy", session.strategy().to_string()},
           {"metric", std::string(to_string(session.strategy().metric))}};
  out["question"] = session.awaiting_answer() ? json(c.entity_label(session.current_question())) : json(nullptr);
  if (full || !session.awaiting_answer()) out["candidates"] = labels(c, session.candidates().members());
  if (full) {
    out["transcript"] = transcript_to_json(session.transcript(), c);
    auto excluded = json::array();
    for (EntityId e : session.excluded_entities()) excluded.push_back(c.entity_label(e));
    out["excluded"] = excluded;
  }
  if (!session.unknown_initial_labels().empty()) out["unknown_initial_labels"] = session.unknown_initial_labels();
  return out;
}

}  // namespace setquest::service
