// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number of
// failures. Pass criterion names as arguments to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "query_oracle.hpp"
#include "setquest/bench.hpp"
#include "setquest/datagen.hpp"
#include "setquest/discovery.hpp"
#include "setquest/querygen.hpp"
#include "setquest/tree_builder.hpp"

using namespace setquest;

namespace {

constexpr auto AD = CostMetric::kAverageDepth;
constexpr auto H = CostMetric::kHeight;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string violated;
  void require(bool ok, const std::string& what) {
    if (ok) return;
    violated += (pass ? "" : "; ") + what;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

Bound adb(std::int64_t p, std::int64_t q = 1) { return Bound(AD, Rational(p, q)); }
Bound hb(std::int64_t v) { return Bound(H, Rational(v)); }

SelectionOutcome pick(const SubCollection& c, const std::string& spec, CostMetric m) {
  MemoCache cache(m);
  return select(c, StrategySpec::parse(spec, m), cache);
}

oracle::Family random_family(std::mt19937_64& rng, int max_n, int max_m) {
  for (;;) {
    int n = 2 + static_cast<int>(rng() % static_cast<unsigned>(max_n - 1));
    int m = 2 + static_cast<int>(rng() % static_cast<unsigned>(max_m - 1));
    double density = 0.2 + 0.5 * static_cast<double>(rng() % 1000) / 1000.0;
    oracle::Family f = oracle::random_family(rng, n, m, density);
    if (f.size() >= 2) return f;
  }
}

// ---------------------------------------------------------------------------

void seven_sets_optimal(Outcome& o) {
  auto start = Clock::now();
  Collection c = fixtures::seven_sets();
  o.require(lb0(7, AD) == adb(20, 7), "lb0(7, AD) = 20/7");
  o.require(brute_force_optimal(c.all(), AD).cost == adb(20, 7), "optimal AD = 20/7");
  o.require(brute_force_optimal(c.all(), H).cost == hb(3), "optimal H = 3");
  auto ad_tree = build_tree(c.all(), StrategySpec::parse("klp:k=3", AD)).tree;
  auto h_tree = build_tree(c.all(), StrategySpec::parse("klp:k=3", H)).tree;
  check_against(ad_tree, c.all());
  check_against(h_tree, c.all());
  o.require(tree_cost(ad_tree, AD) == adb(20, 7), "klp:k=3 tree AD = 20/7");
  o.require(tree_cost(h_tree, H) == hb(3), "klp:k=3 tree H = 3");
  const double secs = seconds_since(start);
  o.require(secs < 1.0, "under 1 s");
  o.detail << "lb0=" << lb0(7, AD).to_string() << " optimal AD=" << brute_force_optimal(c.all(), AD).cost.to_string()
           << " H=" << brute_force_optimal(c.all(), H).cost.to_string() << " klp:k=3 AD=" << tree_cost(ad_tree, AD).to_string()
           << " H=" << tree_cost(h_tree, H).to_string() << " in " << secs << "s";
}

void walkthrough(Outcome& o) {
  auto start = Clock::now();
  Collection c1 = fixtures::seven_sets();
  const EntityId d = fixtures::ent(c1, "d"), cc = fixtures::ent(c1, "c");
  int threes = 0, fours = 0;
  for (EntityId e : informative_entities(c1.all())) {
    Bound b = lb1_entity(c1.all(), e, H);
    if (e == d || e == cc) {
      o.require(b == hb(3), "lb1(C1, " + c1.entity_label(e) + ", H) = 3");
      ++threes;
    } else {
      o.require(b == hb(4), "lb1(C1, " + c1.entity_label(e) + ", H) = 4");
      ++fours;
    }
  }
  o.require(lbk_entity(c1.all(), d, 3, H) == hb(3), "lb3(C1, d, H) = 3");
  Collection c2 = fixtures::seven_sets_c2();
  o.require(lbk_entity(c2.all(), fixtures::ent(c2, "d"), 3, H) == hb(4), "lb3(C2, d, H) = 4");
  o.require(lbk_entity(c2.all(), fixtures::ent(c2, "c"), 2, H) == hb(4), "lb2(C2, c, H) = 4");

  auto out = pick(c1.all(), "klp:k=3", H);
  o.require(out.entity == d && out.bound == hb(3), "K-LP on C1 selects d with bound 3");
  // Visiting order is c (bound 4), d (bound 3); from then on every lb1 is 4 >= 3.
  const auto evaluated = out.counters.root_candidates - out.counters.root_pruned_by_sort_cutoff;
  o.require(out.counters.root_candidates == 10 && evaluated == 2 && out.counters.root_pruned_by_sort_cutoff == 8,
            "8 of 10 root candidates pruned after the first cutoff");
  const double secs = seconds_since(start);
  o.require(secs < 1.0, "under 1 s");
  o.detail << "lb1 = 3 for {c,d}, 4 for " << fours << " others; lb3(C1,d)=3 lb3(C2,d)=4 lb2(C2,c)=4; K-LP root: "
           << out.counters.root_candidates << " candidates, " << evaluated << " evaluated, "
           << out.counters.root_pruned_by_sort_cutoff << " pruned; " << secs << "s";
  (void)threes;
}

void selectors_agree(Outcome& o) {
  std::mt19937_64 rng(1004);
  int trials = 1000, pick_checks = 0;
  int score_bad = 0, argbest_bad = 0, even_bad = 0, pick_bad = 0;
  for (int t = 0; t < trials; ++t) {
    oracle::Family f = random_family(rng, 15, 20);
    Collection c = oracle::to_collection(f);
    auto all = oracle::all_members(f);
    const auto n = static_cast<std::int64_t>(f.size());
    std::vector<int> inf = oracle::informative(f, all);
    if (inf.empty()) continue;
    std::set<int> ig_best, indg_best, lb1_best, even_best, lb1h_best;
    double ig_max = -1;
    std::int64_t indg_min = -1, imb_min = -1;
    std::optional<Rational> lb_min, lbh_min;
    for (int e : inf) {
      const std::int64_t n1 = oracle::count_with(f, all, e), n2 = n - n1;
      auto x = [](std::int64_t k) { return k <= 1 ? 0.0L : static_cast<long double>(k) * std::log2(static_cast<long double>(k)); };
      const double ig = static_cast<double>(std::log2(static_cast<long double>(n)) - (x(n1) + x(n2)) / n);
      const std::int64_t indg = (n1 * (n1 - 1) + n2 * (n2 - 1)) / 2;
      const std::int64_t imb = std::llabs(n1 - n2);
      const Rational lb = oracle::lb1(n1, n2, true), lbh = oracle::lb1(n1, n2, false);
      // Library scores must agree with the reference formulas.
      const EntityId id = oracle::entity_id(c, e);
      if (std::fabs(score_info_gain(c.all(), id) - ig) > 1e-9 || score_indg(c.all(), id) != static_cast<std::uint64_t>(indg) ||
          lb1_entity(c.all(), id, AD).value() != lb || lb1_entity(c.all(), id, H).value() != lbh) {
        ++score_bad;
      }
      auto update_max = [](auto& best, auto& val, auto v, int e) {
        if (best.empty() || v > val + 1e-12) best = {e}, val = v;
        else if (std::fabs(v - val) <= 1e-12) best.insert(e);
      };
      update_max(ig_best, ig_max, ig, e);
      auto update_min = [](auto& best, auto& val, auto v, int e) {
        if (best.empty() || v < val) best = {e}, val = v;
        else if (v == val) best.insert(e);
      };
      update_min(indg_best, indg_min, indg, e);
      update_min(even_best, imb_min, imb, e);
      if (!lb_min || lb < *lb_min) lb1_best = {e}, lb_min = lb;
      else if (lb == *lb_min) lb1_best.insert(e);
      if (!lbh_min || lbh < *lbh_min) lb1h_best = {e}, lbh_min = lbh;
      else if (lbh == *lbh_min) lb1h_best.insert(e);
    }
    // Stated claim: the three argbest sets coincide exactly.
    const bool argbest_ok = ig_best == indg_best && ig_best == lb1_best;
    // Weaker claim: the most even split is among every strategy's best, for both metrics.
    const bool even_ok = ig_best == even_best && indg_best == even_best &&
                         std::includes(lb1_best.begin(), lb1_best.end(), even_best.begin(), even_best.end()) &&
                         std::includes(lb1h_best.begin(), lb1h_best.end(), even_best.begin(), even_best.end());
    // With one tie rule every selector picks the same entity.
    bool pick_ok = true;
    for (auto m : {AD, H}) {
      auto a = pick(c.all(), "infogain", m).entity, b = pick(c.all(), "indg", m).entity;
      auto l = pick(c.all(), "klp:k=1", m).entity, me = pick(c.all(), "mosteven", m).entity;
      pick_ok = pick_ok && a == b && a == l && a == me;
      ++pick_checks;
    }
    argbest_bad += !argbest_ok;
    even_bad += !even_ok;
    pick_bad += !pick_ok;
  }
  o.require(argbest_bad == 0, std::to_string(argbest_bad) + " collections where the 1-step AD argmin set is larger");
  o.require(score_bad == 0, std::to_string(score_bad) + " score mismatches against reference formulas");
  o.require(even_bad == 0, std::to_string(even_bad) + " collections where the most even split is not best");
  o.require(pick_bad == 0, std::to_string(pick_bad) + " collections with differing selections");
  o.detail << trials << " collections (n<=15, m<=20): argbest sets InfoGain=Indg=1-step bound differ in " << argbest_bad
           << " (ceiling ties, e.g. 5/5 and 4/6 of 10); most even split among every argbest set: " << trials - even_bad
           << "/" << trials << "; identical selections under the shared tie rule: " << pick_checks << " checks, "
           << pick_bad << " mismatches; score mismatches " << score_bad;
}

void monotonicity(Outcome& o) {
  std::mt19937_64 rng(2003);
  int violations = 0, trials = 500;
  std::size_t entity_checks = 0;
  for (int t = 0; t < trials; ++t) {
    oracle::Family f = random_family(rng, 12, 16);
    Collection c = oracle::to_collection(f);
    for (auto m : {AD, H}) {
      std::optional<Bound> prev;
      for (int k = 0; k <= 4; ++k) {
        Bound b = lbk_collection(c.all(), k, m);
        if (prev && b < *prev) ++violations;
        prev = b;
      }
      for (EntityId e : informative_entities(c.all())) {
        std::optional<Bound> pe;
        for (int k = 1; k <= 4; ++k) {
          Bound b = lbk_entity(c.all(), e, k, m);
          if (pe && b < *pe) ++violations;
          pe = b;
          ++entity_checks;
        }
      }
    }
  }
  o.require(violations == 0, std::to_string(violations) + " violations");
  o.detail << trials << " collections (n<=12, m<=16), k=0..4, AD and H; " << entity_checks
           << " per-entity bounds; violations=" << violations;
}

void pruning_soundness(Outcome& o) {
  std::mt19937_64 rng(3005);
  int bound_mismatch = 0, more_expansions = 0, trials = 500;
  std::uint64_t klp_total = 0, gk_total = 0;
  for (int t = 0; t < trials; ++t) {
    oracle::Family f = random_family(rng, 15, 20);
    Collection c = oracle::to_collection(f);
    for (int k : {2, 3}) {
      for (auto m : {AD, H}) {
        auto klp = pick(c.all(), "klp:k=" + std::to_string(k), m);
        auto gk = pick(c.all(), "gaink:k=" + std::to_string(k), m);
        if (!(klp.bound == gk.bound)) ++bound_mismatch;
        if (klp.counters.expansions > gk.counters.expansions) ++more_expansions;
        klp_total += klp.counters.expansions;
        gk_total += gk.counters.expansions;
      }
    }
  }
  o.require(bound_mismatch == 0, std::to_string(bound_mismatch) + " bound mismatches");
  o.require(more_expansions == 0, std::to_string(more_expansions) + " cases with more pruned-search expansions");
  o.detail << trials << " collections x k in {2,3} x {AD,H}: bound mismatches=" << bound_mismatch
           << ", expansion excesses=" << more_expansions << "; total expansions pruned=" << klp_total
           << " unpruned=" << gk_total;
}

void optimality(Outcome& o) {
  auto start = Clock::now();
  std::mt19937_64 rng(4007);
  int violations = 0, trials = 200;
  for (int t = 0; t < trials; ++t) {
    oracle::Family f = random_family(rng, 10, 14);
    Collection c = oracle::to_collection(f);
    for (auto m : {AD, H}) {
      auto spec = StrategySpec::parse("klp:k=" + std::to_string(f.size()), m);
      Bound built = tree_cost(build_tree(c.all(), spec).tree, m);
      Bound brute = brute_force_optimal(c.all(), m).cost;
      Rational ref = oracle::optimal_cost(f, oracle::all_members(f), m == AD);
      if (!(built == brute) || brute.value() != ref) ++violations;
    }
  }
  const double secs = seconds_since(start);
  o.require(violations == 0, std::to_string(violations) + " violations");
  o.require(secs < 60.0, "under 60 s");
  o.detail << trials << " collections (n<=10): klp:k=n tree cost = exhaustive optimum for AD and H; violations="
           << violations << " in " << secs << "s";
}

void speedup(Outcome& o) {
  auto start = Clock::now();
  Collection c = generate(GenConfig{200, 20, 30, 0.95, 1});
  auto time_build = [&](const std::string& text, BuildResult* keep) {
    std::vector<double> runs;
    for (int i = 0; i < 3; ++i) {
      auto t0 = Clock::now();
      BuildResult r = build_tree(c.all(), StrategySpec::parse(text, AD));
      runs.push_back(seconds_since(t0));
      if (keep) *keep = std::move(r);
    }
    std::sort(runs.begin(), runs.end());
    return runs[1];
  };
  BuildResult klp, gk;
  const double t_klp = time_build("klp:k=2", &klp);
  const double t_gk = time_build("gaink:k=2", &gk);
  const double ratio = t_gk / t_klp;
  auto root = pick(c.all(), "klp:k=2", AD);
  const double pruned = static_cast<double>(root.counters.root_pruned_by_sort_cutoff) /
                        static_cast<double>(root.counters.root_candidates);
  o.require(ratio >= 10.0, "speedup >= 10x");
  o.require(pruned >= 0.5, "root pruning >= 50%");
  o.require(tree_cost(klp.tree, AD) == tree_cost(gk.tree, AD), "same tree cost");
  o.require(klp.counters.expansions < gk.counters.expansions, "strictly fewer expansions");
  const double secs = seconds_since(start);
  o.require(secs < 300.0, "under 5 min");
  o.detail << "n=200 m=" << c.entity_count() << ": tree build klp:k=2 " << t_klp << "s vs gaink:k=2 " << t_gk
           << "s (speedup " << ratio << "x); root candidates pruned " << root.counters.root_pruned_by_sort_cutoff << "/"
           << root.counters.root_candidates << " (" << 100.0 * pruned << "%); expansions " << klp.counters.expansions
           << " vs " << gk.counters.expansions;
}

void generator(Outcome& o) {
  std::map<double, std::size_t> m;
  for (double alpha : {0.65, 0.80, 0.90, 0.99}) m[alpha] = generate(GenConfig{10000, 50, 60, alpha, 1}).entity_count();
  auto within = [](std::size_t got, double want) { return std::fabs(static_cast<double>(got) - want) <= 0.10 * want; };
  o.require(within(m[0.90], 59000), "alpha 0.9 within 10% of 59k");
  o.require(within(m[0.65], 178000), "alpha 0.65 within 10% of 178k");
  o.require(m[0.65] > m[0.80] && m[0.80] > m[0.90] && m[0.90] > m[0.99], "strictly decreasing");
  o.detail << "distinct entities: alpha 0.65 -> " << m[0.65] << " (ref 178k, "
           << 100.0 * (static_cast<double>(m[0.65]) / 178000 - 1) << "%), 0.80 -> " << m[0.80] << ", 0.90 -> " << m[0.90]
           << " (ref 59k, " << 100.0 * (static_cast<double>(m[0.90]) / 59000 - 1) << "%), 0.99 -> " << m[0.99];
}

// Mean questions over every target = mean leaf depth of the tree the strategy builds.
std::map<std::pair<std::size_t, double>, Rational> g_mean_questions;
Rational mean_questions(std::size_t n, double alpha) {
  auto key = std::make_pair(n, alpha);
  if (auto it = g_mean_questions.find(key); it != g_mean_questions.end()) return it->second;
  Collection c = generate(GenConfig{n, 50, 60, alpha, 1});
  BenchRecord r = run_cell(c, StrategySpec::parse("klpve:k=3,q=10", AD));
  return g_mean_questions[key] = *r.avg_questions;
}

void scaling(Outcome& o) {
  Rational a = mean_questions(500, 0.9), b = mean_questions(1000, 0.9), c = mean_questions(2000, 0.9);
  const double d1 = (b - a).to_double(), d2 = (c - b).to_double();
  o.require(std::fabs(d1 - 1.0) <= 0.5, "500 -> 1000 step within 1.0 +- 0.5");
  o.require(std::fabs(d2 - 1.0) <= 0.5, "1000 -> 2000 step within 1.0 +- 0.5");
  o.detail << "klpve:k=3,q=10 mean questions n=500: " << a.to_decimal(4) << ", n=1000: " << b.to_decimal(4)
           << ", n=2000: " << c.to_decimal(4) << "; steps " << d1 << ", " << d2;
}

void overlap(Outcome& o) {
  Rational hi = mean_questions(2000, 0.9), lo = mean_questions(2000, 0.65);
  o.require(hi <= lo, "mean at alpha 0.90 <= mean at alpha 0.65");
  o.detail << "n=2000 klpve:k=3,q=10 mean questions: alpha 0.90 -> " << hi.to_decimal(4) << ", alpha 0.65 -> "
           << lo.to_decimal(4);
}

void query_discovery(Outcome& o) {
  std::ifstream schema_in(fixtures::data_dir() / "players.schema.json");
  nlohmann::json schema_doc = nlohmann::json::parse(schema_in);
  std::ifstream table_in(fixtures::data_dir() / "players.csv");
  Table t = load_table(table_in, TableSchema::from_json(schema_doc));
  o.require(t.rows.size() >= 20, "at least 20 rows");

  // Planted query and two of its result rows as examples.
  CandidateQuery planted{{CategoricalCondition{t.column_index("birthCity"), {"Chicago", "Seattle"}},
                          NumericalCondition{t.column_index("height"), 60.0, 75.0}}};
  const std::string planted_text = to_string(planted, t);
  std::vector<std::size_t> ex{*t.find_row("evansde01"), *t.find_row("fulchje01")};
  auto planted_rows = materialize(t, planted);
  for (auto e : ex) o.require(std::binary_search(planted_rows.begin(), planted_rows.end(), e), "examples in planted result");

  auto cands = enumerate_candidates(t, ex);
  auto raw = oracle::read_raw_table((fixtures::data_dir() / "players.csv").string());
  auto brute = oracle::brute_force_candidates(raw, schema_doc, ex);
  std::multiset<std::string> got, want;
  for (const auto& q : cands) got.insert(oracle::canonical(q, t));
  for (const auto& q : brute) want.insert(oracle::canonical(q));
  o.require(got == want, "enumeration equals brute force");
  o.require(std::find(cands.begin(), cands.end(), planted) != cands.end(), "planted query enumerated");

  QueryCollection qc = to_collection(t, cands);
  const auto labels = qc.query_labels;
  auto c = std::make_shared<const Collection>(std::move(qc.collection));
  const auto limit = static_cast<std::size_t>(ceil_log2(c->set_count()) + 3);

  auto discover = [&](const std::vector<std::size_t>& rows) {
    std::set<std::string> ids;
    for (auto r : rows) ids.insert(t.row_ids[r]);
    Session s(c, {}, StrategySpec::parse("klp:k=3", AD));
    return run_to_completion(s, [&](EntityId e) { return ids.count(c->entity_label(e)) ? Answer::kYes : Answer::kNo; });
  };
  auto r = discover(planted_rows);
  bool labelled = r.candidates.size() == 1 &&
                  std::find(labels[r.candidates[0].value].begin(), labels[r.candidates[0].value].end(), planted_text) !=
                      labels[r.candidates[0].value].end();
  o.require(labelled, "result set labelled with the planted query");
  o.require(r.transcript.size() <= limit, "questions within ceil(log2 #sets) + 3");

  // Every other candidate as the planted target, for good measure.
  std::size_t worst = 0, misses = 0;
  for (const auto& q : cands) {
    auto rr = discover(materialize(t, q));
    const auto& ls = labels.at(rr.candidates.at(0).value);
    if (std::find(ls.begin(), ls.end(), to_string(q, t)) == ls.end()) ++misses;
    worst = std::max(worst, rr.transcript.size());
  }
  o.require(misses == 0, "every candidate recoverable");
  o.require(worst <= limit, "all targets within the question limit");
  o.detail << t.rows.size() << " rows; " << cands.size() << " candidates (brute force " << brute.size() << "), "
           << c->set_count() << " distinct results; planted [" << planted_text << "] found in " << r.transcript.size()
           << " questions (limit " << limit << "); worst over all candidates " << worst;
}

void discovery_soundness(Outcome& o) {
  std::mt19937_64 rng(5009);
  int violations = 0, sessions = 1000;
  std::size_t steps = 0;
  const char* specs[] = {"klp:k=2", "klp:k=3", "infogain", "indg", "mosteven", "klple:k=2,q=3", "klpve:k=3,q=2", "gaink:k=2"};
  for (int t = 0; t < sessions; ++t) {
    oracle::Family f = random_family(rng, 20, 24);
    auto c = std::make_shared<const Collection>(oracle::to_collection(f));
    const int target = static_cast<int>(rng() % f.size());
    std::set<int> initial;
    for (int e : f[target])
      if (rng() % 4 == 0) initial.insert(e);
    std::vector<EntityId> ids;
    for (int e : initial) ids.push_back(oracle::entity_id(*c, e));
    Session s(c, ids, StrategySpec::parse(specs[t % 8], t % 2 ? AD : H));
    std::vector<std::pair<int, bool>> answers;
    bool ok = true;
    auto check = [&] {
      oracle::Members want = oracle::filter(f, initial, answers);
      std::vector<SetId> w;
      for (int i : want) w.push_back(SetId{static_cast<std::uint32_t>(i)});
      ok = ok && std::equal(w.begin(), w.end(), s.candidates().members().begin(), s.candidates().members().end());
      ok = ok && want.count(target) == 1;
    };
    check();
    while (s.awaiting_answer() && ok) {
      const EntityId q = s.current_question();
      const int e = std::stoi(c->entity_label(q).substr(1));
      const bool present = f[target].count(e) > 0;
      s.submit_answer(present ? Answer::kYes : Answer::kNo);
      answers.emplace_back(e, present);
      ++steps;
      check();
    }
    ok = ok && s.status() == SessionStatus::kFinished && s.candidates().size() == 1 &&
         s.candidates().members()[0] == SetId{static_cast<std::uint32_t>(target)};
    if (!ok) ++violations;
  }
  o.require(violations == 0, std::to_string(violations) + " violating sessions");
  o.detail << sessions << " simulated sessions, " << steps << " answered questions, 8 strategies; violations="
           << violations;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"seven_sets_optimal_tree", seven_sets_optimal},
      {"lookahead_walkthrough_c1_c2", walkthrough},
      {"greedy_selectors_agree", selectors_agree},
      {"lower_bounds_monotone_in_k", monotonicity},
      {"pruning_is_sound", pruning_soundness},
      {"large_k_is_optimal", optimality},
      {"pruning_speedup_desk_scale", speedup},
      {"generator_fidelity", generator},
      {"scaling_trend", scaling},
      {"overlap_trend", overlap},
      {"query_discovery_end_to_end", query_discovery},
      {"discovery_soundness", discovery_soundness},
  };
  std::set<std::string> only(argv + 1, argv + argc);
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && !only.count(name)) continue;
    Outcome o;
    auto start = Clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failures += o.pass ? 0 : 1;
    if (!o.pass) o.detail << " | violated: " << o.violated;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " [" << seconds_since(start) << "s] " << o.detail.str()
              << std::endl;
  }
  return failures;
}
