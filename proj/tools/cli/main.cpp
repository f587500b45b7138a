#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "session_service.hpp"
#include "setquest/bench.hpp"
#include "setquest/datagen.hpp"
#include "setquest/discovery.hpp"
#include "setquest/querygen.hpp"
#include "setquest/tree_builder.hpp"

using namespace setquest;
using nlohmann::json;

namespace {

struct Globals {
  std::string metric = "ad";
  std::string strategy = "klp:k=3";
  std::uint64_t seed = 1;
  std::string out;
};

CostMetric metric_of(const Globals& g) {
  auto m = parse_metric(g.metric);
  if (!m) throw std::invalid_argument("--metric must be ad or h");
  return *m;
}

// Writes to --out when given, else stdout.
template <typename Fn>
void emit(const Globals& g, Fn&& write) {
  if (g.out.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw Error("cannot open " + g.out + " for writing");
  write(f);
  if (!f) throw Error("write failed: " + g.out);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_generate(const Globals& g, GenConfig cfg) {
  cfg.seed = g.seed;
  auto sets = generate_sets(cfg);
  emit(g, [&](std::ostream& os) { write_sets(os, sets); });
  Collection c = Collection::from_sets(std::move(sets));
  CollectionStats st = stats(c);
  std::cerr << "n=" << st.n << " m=" << st.m << " size=[" << st.size_min << "," << st.size_max
            << "] mean_size=" << st.size_mean << " mean_jaccard=" << st.mean_jaccard << "\n";
  return 0;
}

int cmd_build_tree(const Globals& g, const std::string& file, std::optional<std::size_t> max_nodes,
                   std::optional<double> timeout) {
  Collection c = load_collection_file(file);
  StrategySpec spec = StrategySpec::parse(g.strategy, metric_of(g));
  BuildOptions options;
  options.max_nodes = max_nodes;
  if (timeout) {
    options.deadline = std::chrono::steady_clock::now() +
                       std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(*timeout));
  }
  const auto start = std::chrono::steady_clock::now();
  BuildResult built = build_tree(c.all(), spec, options);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  emit(g, [&](std::ostream& os) { os << tree_to_json(built.tree, c).dump(2) << "\n"; });

  // The summary goes to stdout only when the tree itself went to a file.
  std::ostream& report = g.out.empty() ? std::cerr : std::cout;
  const Bound ad = tree_cost(built.tree, CostMetric::kAverageDepth);
  report << "strategy: " << spec.to_string() << "\n";
  report << "AD: " << ad.to_decimal(3) << " (" << ad.to_string() << ")\n";
  report << "H: " << tree_cost(built.tree, CostMetric::kHeight).to_string() << "\n";
  report << "depth histogram:";
  for (auto [d, count] : built.tree.depth_histogram()) report << " " << d << ":" << count;
  report << "\nconstruction_seconds: " << secs << "\n";
  return 0;
}

struct DiscoverArgs {
  std::string file;
  std::string initial;
  std::string target;
  std::string script;
  std::string tree;
  std::optional<std::size_t> max_questions;
  std::optional<std::size_t> stop_at;
};

Oracle interactive_oracle(const Collection& c) {
  return [&c](EntityId e) {
    for (;;) {
      std::cerr << "Is " << c.entity_label(e) << " in your set? [yes/no/unknown] " << std::flush;
      std::string line;
      if (!std::getline(std::cin, line)) throw Error("input closed before the session finished");
      if (auto a = parse_answer(line)) return *a;
    }
  };
}

int cmd_discover(const Globals& g, const DiscoverArgs& a) {
  auto c = std::make_shared<const Collection>(load_collection_file(a.file));
  Oracle oracle;
  if (!a.target.empty()) {
    auto t = c->find_set(a.target);
    if (!t) throw UnknownEntityError("unknown target set '" + a.target + "'");
    oracle = simulated_oracle(*c, *t);
  } else if (!a.script.empty()) {
    auto entries = transcript_from_json(read_json_file(a.script), *c);
    std::vector<std::pair<EntityId, Answer>> script;
    for (const auto& e : entries) script.emplace_back(e.entity, e.answer);
    oracle = scripted_oracle(std::move(script));
  } else {
    oracle = interactive_oracle(*c);
  }

  DiscoveryResult result;
  if (!a.tree.empty()) {
    DecisionTree t = tree_from_json(read_json_file(a.tree), *c);
    result = run_with_tree(t, *c, oracle);
  } else {
    HaltCondition halt{a.max_questions, a.stop_at, nullptr};
    auto initial = split_list(a.initial);
    Session s = Session::from_labels(c, initial, StrategySpec::parse(g.strategy, metric_of(g)), halt);
    if (!s.unknown_initial_labels().empty()) {
      std::cerr << "warning: unknown initial entities; no set can match\n";
    }
    result = run_to_completion(s, oracle);
  }
  json doc = result_to_json(result, *c);
  doc["status"] = std::string(to_string(result.status));
  doc["transcript"] = transcript_to_json(result.transcript, *c);
  emit(g, [&](std::ostream& os) { os << doc.dump(2) << "\n"; });
  return 0;
}

int cmd_bench(const Globals& g, const std::string& suite_file) {
  BenchSuite suite = BenchSuite::from_json(read_json_file(suite_file));
  emit(g, [&](std::ostream& os) {
    write_report_header(os);
    run_suite(suite, [&](const BenchRecord& r) {
      write_report_row(os, r);
      os.flush();
    });
  });
  return 0;
}

int cmd_querygen(const Globals& g, const std::string& table_file, const std::string& schema_file,
                 const std::string& examples, const std::string& labels_out) {
  TableSchema schema = TableSchema::from_json(read_json_file(schema_file));
  std::ifstream in(table_file);
  if (!in) throw Error("cannot open " + table_file);
  Table t = load_table(in, std::move(schema));
  std::vector<std::size_t> rows;
  for (const auto& id : split_list(examples)) {
    auto r = t.find_row(id);
    if (!r) throw UnknownEntityError("unknown example row '" + id + "'");
    rows.push_back(*r);
  }
  auto candidates = enumerate_candidates(t, rows);
  QueryCollection qc = to_collection(t, candidates);
  emit(g, [&](std::ostream& os) { write_collection(os, qc.collection); });
  if (!labels_out.empty()) {
    json map = json::object();
    for (std::size_t i = 0; i < qc.query_labels.size(); ++i) {
      map[qc.collection.set_label(SetId{static_cast<std::uint32_t>(i)})] = qc.query_labels[i];
    }
    std::ofstream f(labels_out);
    f << map.dump(2) << "\n";
  }
  std::cerr << "candidates=" << candidates.size() << " distinct_results=" << qc.collection.set_count() << "\n";
  return 0;
}

void print_error(const std::exception& e) {
  json err{{"error", e.what()}};
  if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
    err["type"] = "parse_error";
    if (p->line() != 0) err["line"] = p->line();
  } else if (dynamic_cast<const GuardExceededError*>(&e)) {
    err["type"] = "guard_exceeded";
  } else if (dynamic_cast<const UnknownEntityError*>(&e)) {
    err["type"] = "unknown_label";
  } else if (dynamic_cast<const std::invalid_argument*>(&e)) {
    err["type"] = "invalid_argument";
  } else {
    err["type"] = "error";
  }
  std::cerr << err.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"setquest: find a target set with few membership questions"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--metric", g.metric, "Cost metric: ad | h")->capture_default_str();
  app.add_option("--strategy", g.strategy, "Selection strategy, e.g. klp:k=3, klpve:k=3,q=10, infogain")
      ->capture_default_str();
  app.add_option("--seed", g.seed, "RNG seed")->capture_default_str();
  app.add_option("--out", g.out, "Output file (default: stdout)");
  app.fallthrough();

  GenConfig gen;
  auto* generate = app.add_subcommand("generate", "Generate a synthetic collection");
  generate->add_option("--n", gen.n, "Number of sets")->required();
  generate->add_option("--size-lo", gen.size_lo, "Smallest set size")->required();
  generate->add_option("--size-hi", gen.size_hi, "Largest set size")->required();
  generate->add_option("--alpha", gen.alpha, "Overlap ratio in [0,1)")->required();
  generate->add_option("--universe", gen.universe, "Entity universe size (0 = always new entities)")
      ->capture_default_str();

  std::string file;
  std::optional<std::size_t> max_nodes;
  std::optional<double> timeout;
  auto* build = app.add_subcommand("build-tree", "Build a decision tree offline");
  build->add_option("collection", file, "Collection file")->required();
  build->add_option("--max-nodes", max_nodes, "Refuse trees with more nodes");
  build->add_option("--timeout", timeout, "Wall-clock budget in seconds");

  DiscoverArgs d;
  auto* discover = app.add_subcommand("discover", "Run a discovery session");
  discover->add_option("collection", d.file, "Collection file")->required();
  discover->add_option("--initial", d.initial, "Comma-separated initial entities");
  auto* target = discover->add_option("--target", d.target, "Simulate a user whose set is this label");
  auto* script = discover->add_option("--script", d.script, "Transcript file of scripted answers");
  target->excludes(script);
  discover->add_option("--tree", d.tree, "Route through a prebuilt tree instead of selecting online");
  discover->add_option("--max-questions", d.max_questions, "Halt after this many questions");
  discover->add_option("--stop-at", d.stop_at, "Halt once at most this many candidates remain");

  std::string suite;
  auto* bench = app.add_subcommand("bench", "Run a benchmark suite and write a CSV report");
  bench->add_option("suite", suite, "Suite config (JSON)")->required();

  std::string table, schema, examples, labels_out;
  auto* querygen = app.add_subcommand("querygen", "Turn example rows into a collection of candidate query results");
  querygen->add_option("--table", table, "Delimited table with a header")->required();
  querygen->add_option("--schema", schema, "Schema and reference values (JSON)")->required();
  querygen->add_option("--examples", examples, "Comma-separated example row ids")->required();
  querygen->add_option("--labels-out", labels_out, "Write set -> query texts map here");

  std::string host = "0.0.0.0";
  int port = service::port_from_env();
  auto* serve = app.add_subcommand("serve", "Serve the session HTTP API");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port, "Port (default SETQUEST_PORT or 8080)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    if (code != 0) std::cerr << json{{"error", e.what()}, {"type", "usage"}}.dump() << "\n";
    return code;
  }

  try {
    if (*generate) return cmd_generate(g, gen);
    if (*build) return cmd_build_tree(g, file, max_nodes, timeout);
    if (*discover) return cmd_discover(g, d);
    if (*bench) return cmd_bench(g, suite);
    if (*querygen) return cmd_querygen(g, table, schema, examples, labels_out);
    if (*serve) {
      service::SessionService svc(service::ServiceConfig::from_env());
      service::HttpServer server(svc);
      server.bind(host, port);
      std::cerr << "listening on " << host << ":" << port << "\n";
      server.listen();
      return 0;
    }
  } catch (const std::exception& e) {
    print_error(e);
    return 1;
  }
  return 2;
}
