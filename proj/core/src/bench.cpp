#include "setquest/bench.hpp"

#include <ostream>

#include "setquest/tree_builder.hpp"

namespace setquest {

BenchRecord run_cell(const Collection& c, const StrategySpec& spec, std::optional<std::chrono::duration<double>> budget) {
  BenchRecord r;
  r.strategy = spec.to_string();
  r.metric = spec.metric;
  r.n = c.set_count();
  r.m = c.entity_count();

  BuildOptions options;
  const auto start = std::chrono::steady_clock::now();
  if (budget) options.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(*budget);
  try {
    BuildResult built = build_tree(c.all(), spec, options);
    r.construction_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.counters = built.counters;
    r.avg_questions = tree_cost(built.tree, CostMetric::kAverageDepth).value();
    r.max_questions = tree_cost(built.tree, CostMetric::kHeight).value().num();
  } catch (const GuardExceededError&) {
    r.construction_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.timed_out = true;
  }
  return r;
}

double time_selection(const SubCollection& c, const StrategySpec& spec, SearchCounters* counters) {
  MemoCache cache(spec.metric);
  const auto start = std::chrono::steady_clock::now();
  SelectionOutcome out = select(c, spec, cache);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (counters) *counters = out.counters;
  return secs;
}

BenchSuite BenchSuite::from_json(const nlohmann::json& doc) {
  BenchSuite s;
  try {
    if (doc.contains("metric")) {
      auto m = parse_metric(doc["metric"].get<std::string>());
      if (!m) throw ParseError("suite: metric must be \"ad\" or \"h\"");
      s.metric = *m;
    }
    if (doc.contains("time_budget_seconds")) s.time_budget_seconds = doc["time_budget_seconds"].get<double>();
    if (doc.contains("seeds")) s.seeds = doc["seeds"].get<std::vector<std::uint64_t>>();
    for (const auto& g : doc.at("generators")) {
      GenConfig cfg;
      cfg.n = g.at("n").get<std::size_t>();
      cfg.size_lo = g.at("size_lo").get<std::size_t>();
      cfg.size_hi = g.at("size_hi").get<std::size_t>();
      cfg.alpha = g.at("alpha").get<double>();
      if (g.contains("universe")) cfg.universe = g["universe"].get<std::uint64_t>();
      cfg.validate();
      s.generators.push_back(cfg);
    }
    s.strategies = doc.at("strategies").get<std::vector<std::string>>();
    for (const auto& text : s.strategies) StrategySpec::parse(text, s.metric);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("suite: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("suite: ") + e.what());
  }
  return s;
}

std::vector<BenchRecord> run_suite(const BenchSuite& suite, const std::function<void(const BenchRecord&)>& on_record) {
  std::vector<BenchRecord> out;
  std::optional<std::chrono::duration<double>> budget;
  if (suite.time_budget_seconds) budget = std::chrono::duration<double>(*suite.time_budget_seconds);
  for (GenConfig cfg : suite.generators) {
    for (auto seed : suite.seeds) {
      cfg.seed = seed;
      Collection c = generate(cfg);
      for (const auto& text : suite.strategies) {
        BenchRecord r = run_cell(c, StrategySpec::parse(text, suite.metric), budget);
        r.alpha = cfg.alpha;
        r.seed = seed;
        if (on_record) on_record(r);
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

void write_report_header(std::ostream& out) {
  out << "strategy,metric,n,m,alpha,seed,avg_questions,max_questions,construction_seconds,"
         "candidates_considered,candidates_pruned_by_sort_cutoff,recursive_calls_pruned_by_upper_limit,"
         "cache_hits,cache_misses,expansions,root_candidates,root_pruned_by_sort_cutoff,timed_out\n";
}

void write_report_row(std::ostream& out, const BenchRecord& r) {
  const auto& k = r.counters;
  out << '"' << r.strategy << "\"," << to_string(r.metric) << ',' << r.n << ',' << r.m << ',' << r.alpha << ','
      << r.seed << ',' << (r.avg_questions ? r.avg_questions->to_decimal(4) : "") << ','
      << (r.max_questions ? std::to_string(*r.max_questions) : "") << ',' << r.construction_seconds << ','
      << k.candidates_considered << ',' << k.candidates_pruned_by_sort_cutoff << ','
      << k.recursive_calls_pruned_by_upper_limit << ',' << k.cache_hits << ',' << k.cache_misses << ','
      << k.expansions << ',' << k.root_candidates << ',' << k.root_pruned_by_sort_cutoff << ','
      << (r.timed_out ? "true" : "false") << '\n';
}

}  // namespace setquest
