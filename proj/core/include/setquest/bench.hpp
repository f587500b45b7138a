#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "setquest/bounds.hpp"
#include "setquest/collection.hpp"
#include "setquest/datagen.hpp"
#include "setquest/selectors.hpp"

namespace setquest {

struct BenchRecord {
  std::string strategy;
  CostMetric metric = CostMetric::kAverageDepth;
  std::size_t n = 0;
  std::size_t m = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::optional<Rational> avg_questions;  // empty when timed out
  std::optional<std::int64_t> max_questions;
  double construction_seconds = 0.0;
  SearchCounters counters;
  bool timed_out = false;
};

/// Builds one tree and measures it. Question counts come from the leaf depths, which
/// are the per-target question counts of every set in the collection.
BenchRecord run_cell(const Collection& c, const StrategySpec& spec,
                     std::optional<std::chrono::duration<double>> budget = std::nullopt);

/// Wall-clock seconds for one root selection with a fresh cache.
double time_selection(const SubCollection& c, const StrategySpec& spec, SearchCounters* counters = nullptr);

/// A suite is the cross product generators x seeds x strategies:
/// {"metric": "ad", "time_budget_seconds": 60, "seeds": [1],
///  "generators": [{"n", "size_lo", "size_hi", "alpha", "universe"?}],
///  "strategies": ["klp:k=2", "gaink:k=2"]}
struct BenchSuite {
  CostMetric metric = CostMetric::kAverageDepth;
  std::optional<double> time_budget_seconds;
  std::vector<std::uint64_t> seeds{1};
  std::vector<GenConfig> generators;  // seed field ignored
  std::vector<std::string> strategies;

  static BenchSuite from_json(const nlohmann::json& doc);  // throws ParseError
};

/// Runs every cell in order; `on_record` sees each row as it completes.
std::vector<BenchRecord> run_suite(const BenchSuite& suite,
                                   const std::function<void(const BenchRecord&)>& on_record = {});

void write_report_header(std::ostream& out);
void write_report_row(std::ostream& out, const BenchRecord& r);

}  // namespace setquest
