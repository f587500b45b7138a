#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "setquest/collection.hpp"
#include "setquest/decision_tree.hpp"
#include "setquest/selectors.hpp"

namespace setquest {

enum class Answer { kYes, kNo, kUnknown };

std::string_view to_string(Answer a);
/// "yes" | "no" | "unknown" (also y/n/u, "don't know"); case-insensitive.
std::optional<Answer> parse_answer(std::string_view text);

/// Answer source for membership questions.
using Oracle = std::function<Answer(EntityId)>;

/// Yes iff the entity belongs to `target`.
Oracle simulated_oracle(const Collection& c, SetId target);
/// Replays a fixed entity -> answer map; unlisted entities answer Unknown.
Oracle scripted_oracle(std::vector<std::pair<EntityId, Answer>> script);

struct HaltCondition {
  std::optional<std::size_t> max_questions;
  std::optional<std::size_t> stop_at_candidates;  // halt once |candidates| <= this
  std::shared_ptr<std::atomic<bool>> user_abort;
};

enum class SessionStatus {
  kAwaitingAnswer,
  kFinished,         // at most one candidate left
  kHalted,           // halt condition fired
  kExhausted,        // several candidates left but no askable entity splits them
  kNoConsistentSet,  // answers ruled out every set
};

std::string_view to_string(SessionStatus s);

struct TranscriptEntry {
  EntityId entity;
  Answer answer;
};

/// Live state of one discovery run. Single-writer; distinct sessions are independent.
class Session {
 public:
  /// Candidates start as the supersets of `initial`. `cache` may be shared between
  /// sessions on the same collection; a private one is created when null.
  Session(std::shared_ptr<const Collection> collection, std::vector<EntityId> initial, StrategySpec strategy,
          HaltCondition halt = {}, std::shared_ptr<MemoCache> cache = nullptr);

  /// Resolves initial labels; an unknown label yields a Finished session with no candidates.
  static Session from_labels(std::shared_ptr<const Collection> collection, std::span<const std::string> initial,
                             StrategySpec strategy, HaltCondition halt = {}, std::shared_ptr<MemoCache> cache = nullptr);

  SessionStatus status() const { return status_; }
  bool awaiting_answer() const { return status_ == SessionStatus::kAwaitingAnswer; }

  /// Throws StateError unless awaiting an answer.
  EntityId current_question() const;
  /// Applies an answer to the current question. Throws StateError unless awaiting.
  void submit_answer(Answer a);
  /// Applies an answer about an arbitrary entity (transcript replay).
  void apply(EntityId e, Answer a);

  const SubCollection& candidates() const { return candidates_; }
  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }
  const EntitySet& excluded_entities() const { return excluded_; }
  const std::vector<EntityId>& initial() const { return initial_; }
  const std::vector<std::string>& unknown_initial_labels() const { return unknown_initial_; }
  std::size_t questions_asked() const { return transcript_.size(); }
  const StrategySpec& strategy() const { return strategy_; }
  const Collection& collection() const { return *collection_; }
  const SearchCounters& counters() const { return counters_; }

 private:
  void advance();

  std::shared_ptr<const Collection> collection_;
  std::vector<EntityId> initial_;
  std::vector<std::string> unknown_initial_;
  StrategySpec strategy_;
  HaltCondition halt_;
  std::shared_ptr<MemoCache> cache_;
  SubCollection candidates_;
  EntitySet excluded_;
  std::vector<TranscriptEntry> transcript_;
  std::optional<EntityId> question_;
  SessionStatus status_ = SessionStatus::kAwaitingAnswer;
  SearchCounters counters_;
};

struct DiscoveryResult {
  std::vector<SetId> candidates;  // ascending set id
  std::vector<TranscriptEntry> transcript;
  SessionStatus status;
};

/// Asks and answers until one candidate remains, the halt condition fires, or nothing
/// askable is left.
DiscoveryResult run_to_completion(Session& s, const Oracle& oracle);

/// Offline variant: follows a prebuilt tree. Unknown answers are not supported by a
/// fixed tree and throw StateError.
DiscoveryResult run_with_tree(const DecisionTree& t, const Collection& c, const Oracle& oracle);

nlohmann::json transcript_to_json(const std::vector<TranscriptEntry>& t, const Collection& c);
/// Throws ParseError on malformed entries or unknown labels.
std::vector<TranscriptEntry> transcript_from_json(const nlohmann::json& doc, const Collection& c);
/// {"candidates": [labels], "questions_asked": n}
nlohmann::json result_to_json(const DiscoveryResult& r, const Collection& c);

}  // namespace setquest
