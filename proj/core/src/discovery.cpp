#include "setquest/discovery.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

namespace setquest {

std::string_view to_string(Answer a) {
  switch (a) {
    case Answer::kYes: return "yes";
    case Answer::kNo: return "no";
    case Answer::kUnknown: return "unknown";
  }
  return "?";
}

std::optional<Answer> parse_answer(std::string_view text) {
  std::string t;
  for (char ch : text) t += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (t == "yes" || t == "y") return Answer::kYes;
  if (t == "no" || t == "n") return Answer::kNo;
  if (t == "unknown" || t == "u" || t == "?" || t == "don't know" || t == "dont know") return Answer::kUnknown;
  return std::nullopt;
}

std::string_view to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::kAwaitingAnswer: return "awaiting_answer";
    case SessionStatus::kFinished: return "finished";
    case SessionStatus::kHalted: return "halted";
    case SessionStatus::kExhausted: return "exhausted";
    case SessionStatus::kNoConsistentSet: return "no_consistent_set";
  }
  return "?";
}

Oracle simulated_oracle(const Collection& c, SetId target) {
  return [&c, target](EntityId e) { return c.contains(target, e) ? Answer::kYes : Answer::kNo; };
}

Oracle scripted_oracle(std::vector<std::pair<EntityId, Answer>> script) {
  std::map<EntityId, Answer> answers(script.begin(), script.end());
  return [answers = std::move(answers)](EntityId e) {
    auto it = answers.find(e);
    return it == answers.end() ? Answer::kUnknown : it->second;
  };
}

// --- Session ---------------------------------------------------------------

Session::Session(std::shared_ptr<const Collection> collection, std::vector<EntityId> initial, StrategySpec strategy,
                 HaltCondition halt, std::shared_ptr<MemoCache> cache)
    : collection_(std::move(collection)),
      initial_(std::move(initial)),
      strategy_(strategy),
      halt_(std::move(halt)),
      cache_(cache ? std::move(cache) : std::make_shared<MemoCache>(strategy.metric)),
      candidates_(supersets_of(*collection_, initial_)) {
  strategy_.validate();
  if (cache_->metric() != strategy_.metric) throw std::invalid_argument("session: cache metric differs from strategy");
  advance();
}

Session Session::from_labels(std::shared_ptr<const Collection> collection, std::span<const std::string> initial,
                             StrategySpec strategy, HaltCondition halt, std::shared_ptr<MemoCache> cache) {
  std::vector<EntityId> ids;
  std::vector<std::string> unknown;
  for (const auto& label : initial) {
    if (auto id = collection->find_entity(label)) {
      ids.push_back(*id);
    } else {
      unknown.push_back(label);
    }
  }
  Session s(collection, ids, strategy, std::move(halt), std::move(cache));
  if (!unknown.empty()) {
    s.unknown_initial_ = std::move(unknown);
    s.candidates_ = SubCollection(*s.collection_, {});
    s.question_.reset();
    s.status_ = SessionStatus::kFinished;
  }
  return s;
}

EntityId Session::current_question() const {
  if (status_ != SessionStatus::kAwaitingAnswer || !question_) {
    throw StateError("session is " + std::string(to_string(status_)) + ", no question pending");
  }
  return *question_;
}

void Session::submit_answer(Answer a) { apply(current_question(), a); }

void Session::apply(EntityId e, Answer a) {
  if (status_ != SessionStatus::kAwaitingAnswer) {
    throw StateError("session is " + std::string(to_string(status_)) + ", cannot accept answers");
  }
  if (e.value >= collection_->entity_count()) throw UnknownEntityError("unknown entity id " + std::to_string(e.value));
  transcript_.push_back(TranscriptEntry{e, a});
  switch (a) {
    case Answer::kYes:
    case Answer::kNo: {
      Partition p = partition(candidates_, e);
      candidates_ = SubCollection(*collection_, a == Answer::kYes ? std::move(p.positive) : std::move(p.negative));
      break;
    }
    case Answer::kUnknown: {
      auto it = std::lower_bound(excluded_.begin(), excluded_.end(), e);
      if (it == excluded_.end() || *it != e) excluded_.insert(it, e);
      break;
    }
  }
  advance();
}

void Session::advance() {
  question_.reset();
  if (candidates_.empty()) {
    status_ = transcript_.empty() ? SessionStatus::kFinished : SessionStatus::kNoConsistentSet;
    return;
  }
  if (candidates_.size() == 1) {
    status_ = SessionStatus::kFinished;
    return;
  }
  if ((halt_.max_questions && transcript_.size() >= *halt_.max_questions) ||
      (halt_.stop_at_candidates && candidates_.size() <= *halt_.stop_at_candidates) ||
      (halt_.user_abort && halt_.user_abort->load())) {
    status_ = SessionStatus::kHalted;
    return;
  }
  SelectionOutcome sel = select(candidates_, strategy_, *cache_, excluded_);
  counters_ += sel.counters;
  if (!sel.entity) {
    status_ = SessionStatus::kExhausted;
    return;
  }
  question_ = sel.entity;
  status_ = SessionStatus::kAwaitingAnswer;
}

// --- loops -----------------------------------------------------------------

DiscoveryResult run_to_completion(Session& s, const Oracle& oracle) {
  while (s.awaiting_answer()) s.submit_answer(oracle(s.current_question()));
  auto members = s.candidates().members();
  return DiscoveryResult{{members.begin(), members.end()}, s.transcript(), s.status()};
}

DiscoveryResult run_with_tree(const DecisionTree& t, const Collection& c, const Oracle& oracle) {
  if (t.empty()) throw Error("decision tree: empty");
  DiscoveryResult r{{}, {}, SessionStatus::kFinished};
  DecisionTree::NodeIndex i = t.root();
  while (!t.node(i).is_leaf()) {
    const auto& n = t.node(i);
    Answer a = oracle(*n.entity);
    r.transcript.push_back(TranscriptEntry{*n.entity, a});
    if (a == Answer::kUnknown) throw StateError("a prebuilt tree cannot route an unknown answer");
    i = a == Answer::kYes ? n.yes : n.no;
  }
  r.candidates.push_back(t.node(i).set);
  (void)c;
  return r;
}

// --- documents -------------------------------------------------------------

nlohmann::json transcript_to_json(const std::vector<TranscriptEntry>& t, const Collection& c) {
  auto out = nlohmann::json::array();
  for (const auto& entry : t) {
    out.push_back({{"entity", c.entity_label(entry.entity)}, {"answer", std::string(to_string(entry.answer))}});
  }
  return out;
}

std::vector<TranscriptEntry> transcript_from_json(const nlohmann::json& doc, const Collection& c) {
  if (!doc.is_array()) throw ParseError("transcript must be an array");
  std::vector<TranscriptEntry> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    if (!item.is_object() || !item.contains("entity") || !item.contains("answer") || !item["entity"].is_string() ||
        !item["answer"].is_string()) {
      throw ParseError("transcript entry " + std::to_string(i) + " must be {\"entity\": ..., \"answer\": ...}");
    }
    auto e = c.find_entity(item["entity"].get<std::string>());
    if (!e) throw ParseError("transcript entry " + std::to_string(i) + ": unknown entity '" + item["entity"].get<std::string>() + "'");
    auto a = parse_answer(item["answer"].get<std::string>());
    if (!a) throw ParseError("transcript entry " + std::to_string(i) + ": bad answer '" + item["answer"].get<std::string>() + "'");
    out.push_back(TranscriptEntry{*e, *a});
  }
  return out;
}

nlohmann::json result_to_json(const DiscoveryResult& r, const Collection& c) {
  auto labels = nlohmann::json::array();
  for (SetId s : r.candidates) labels.push_back(c.set_label(s));
  return {{"candidates", labels}, {"questions_asked", r.transcript.size()}};
}

}  // namespace setquest
