#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"

using namespace setquest;
using fixtures::ent;
using fixtures::set;

namespace {

std::vector<std::string> set_labels(const Collection& c, std::span<const SetId> ids) {
  std::vector<std::string> out;
  for (SetId s : ids) out.push_back(c.set_label(s));
  return out;
}

std::vector<std::string> entity_labels(const Collection& c, const std::vector<EntityId>& ids) {
  std::vector<std::string> out;
  for (EntityId e : ids) out.push_back(c.entity_label(e));
  return out;
}

Collection parse(const std::string& text, LoadOptions opts = {}) {
  std::istringstream in(text);
  return load_collection(in, opts);
}

}  // namespace

TEST(Load, SevenSetsHasSevenSetsElevenEntities) {
  Collection c = fixtures::seven_sets();
  EXPECT_EQ(c.set_count(), 7u);
  EXPECT_EQ(c.entity_count(), 11u);
  EXPECT_EQ(c.entity_label(EntityId{0}), "a");
  EXPECT_EQ(c.entity_label(EntityId{10}), "k");
}

TEST(Load, SingleSet) {
  Collection c = parse(R"({"id": "only", "elements": ["x"]})");
  EXPECT_EQ(c.set_count(), 1u);
  EXPECT_EQ(c.entity_count(), 1u);
}

TEST(Load, DuplicateSetsStrictAndLenient) {
  const std::string doc =
      "{\"id\": \"A\", \"elements\": [\"x\", \"y\"]}\n"
      "{\"id\": \"B\", \"elements\": [\"y\", \"x\", \"x\"]}\n"
      "{\"id\": \"C\", \"elements\": [\"z\"]}\n";
  try {
    parse(doc);
    FAIL() << "expected DuplicateSetError";
  } catch (const DuplicateSetError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  Collection c = parse(doc, LoadOptions{DuplicatePolicy::kLenient});
  EXPECT_EQ(c.set_count(), 2u);
  ASSERT_EQ(c.dropped_duplicates().size(), 1u);
  EXPECT_EQ(c.dropped_duplicates()[0], "B");
}

TEST(Load, ErrorsCarryLineNumbers) {
  try {
    parse("{\"id\": \"A\", \"elements\": [\"x\"]}\n\n{\"id\": \"B\", \"elements\": []}\n");
    FAIL();
  } catch (const EmptySetError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    parse("{\"id\": \"A\", \"elements\": [\"x\"]}\n{\"id\": \"B\" \n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse("{\"id\": 3, \"elements\": [\"x\"]}"), ParseError);
  EXPECT_THROW(parse("{\"id\": \"A\", \"elements\": [\"x\"]}\n{\"id\": \"A\", \"elements\": [\"y\"]}"), ParseError);
}

TEST(Load, DirectoryLoaderKeysByStem) {
  auto dir = std::filesystem::temp_directory_path() / "setquest_dir_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "beta.jsonl") << "{\"id\": \"s\", \"elements\": [\"a\"]}\n";
  std::ofstream(dir / "alpha.jsonl") << "{\"id\": \"s\", \"elements\": [\"a\"]}\n{\"id\": \"t\", \"elements\": [\"b\"]}\n";
  auto loaded = load_collection_directory(dir);
  ASSERT_EQ(loaded.size(), 2u);
  EXPECT_EQ(loaded[0].first, "alpha");
  EXPECT_EQ(loaded[0].second.set_count(), 2u);
  EXPECT_EQ(loaded[1].first, "beta");
  std::filesystem::remove_all(dir);
}

TEST(Load, WriteThenReadRoundTrips) {
  Collection c = fixtures::seven_sets();
  std::ostringstream out;
  write_collection(out, c);
  Collection back = parse(out.str());
  ASSERT_EQ(back.set_count(), c.set_count());
  for (std::size_t i = 0; i < c.set_count(); ++i) {
    EXPECT_EQ(back.sets()[i].label, c.sets()[i].label);
    EXPECT_EQ(back.sets()[i].elements, c.sets()[i].elements);
  }
}

TEST(Informative, SevenSetsExcludesA) {
  Collection c = fixtures::seven_sets();
  EXPECT_EQ(entity_labels(c, informative_entities(c.all())),
            (std::vector<std::string>{"b", "c", "d", "e", "f", "g", "h", "i", "j", "k"}));
}

TEST(Informative, SingletonHasNone) {
  Collection c = fixtures::seven_sets();
  EXPECT_TRUE(informative_entities(SubCollection(c, {set(c, "S1")})).empty());
}

TEST(Informative, S1S3MatchesScan) {
  Collection c = fixtures::seven_sets();
  SubCollection sub(c, {set(c, "S1"), set(c, "S3")});
  std::vector<std::string> expected;
  for (std::uint32_t e = 0; e < c.entity_count(); ++e) {
    int k = c.contains(set(c, "S1"), EntityId{e}) + c.contains(set(c, "S3"), EntityId{e});
    if (k == 1) expected.push_back(c.entity_label(EntityId{e}));
  }
  EXPECT_EQ(entity_labels(c, informative_entities(sub)), expected);
  EXPECT_EQ(expected, std::vector<std::string>{"f"});
}

TEST(Partition, SevenSetsByDAndC) {
  Collection c = fixtures::seven_sets();
  Partition d = partition(c.all(), ent(c, "d"));
  EXPECT_EQ(set_labels(c, d.positive), (std::vector<std::string>{"S1", "S2", "S3"}));
  EXPECT_EQ(set_labels(c, d.negative), (std::vector<std::string>{"S4", "S5", "S6", "S7"}));
  Partition cc = partition(c.all(), ent(c, "c"));
  EXPECT_EQ(set_labels(c, cc.positive), (std::vector<std::string>{"S1", "S3", "S4"}));
  EXPECT_EQ(set_labels(c, cc.negative), (std::vector<std::string>{"S2", "S5", "S6", "S7"}));
}

TEST(Partition, SingletonAndUnknownEntity) {
  Collection c = fixtures::seven_sets();
  Partition p = partition(SubCollection(c, {set(c, "S1")}), ent(c, "b"));
  EXPECT_EQ(p.positive.size(), 1u);
  EXPECT_TRUE(p.negative.empty());
  EXPECT_THROW(partition(c.all(), EntityId{99}), UnknownEntityError);
}

TEST(Supersets, SevenSetsExamples) {
  Collection c = fixtures::seven_sets();
  std::vector<EntityId> bc{ent(c, "b"), ent(c, "c")};
  EXPECT_EQ(set_labels(c, supersets_of(c, bc).members()), (std::vector<std::string>{"S1", "S3", "S4"}));
  EXPECT_EQ(supersets_of(c, {}).size(), 7u);
  std::vector<EntityId> ef{ent(c, "e"), ent(c, "f")};
  EXPECT_TRUE(supersets_of(c, ef).empty());
  std::vector<std::string> unknown{"b", "z"};
  auto r = supersets_of_labels(c, unknown);
  EXPECT_TRUE(r.candidates.empty());
  EXPECT_EQ(r.unknown_labels, std::vector<std::string>{"z"});
}

TEST(Fingerprint, IndependentOfConstructionOrder) {
  Collection c = fixtures::seven_sets();
  SubCollection a(c, {SetId{3}, SetId{0}, SetId{5}});
  SubCollection b(c, {SetId{5}, SetId{3}, SetId{0}, SetId{3}});
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  EXPECT_NE(SubCollection(c, {SetId{0}, SetId{1}}).fingerprint(), SubCollection(c, {SetId{0}, SetId{2}}).fingerprint());
}

TEST(Fingerprint, MatchesGoldenValue) {
  std::ifstream in(fixtures::data_dir() / "seven_sets_fingerprint.txt");
  std::string golden;
  std::getline(in, golden);
  ASSERT_FALSE(golden.empty());
  EXPECT_EQ(fixtures::seven_sets().all().fingerprint().to_hex(), golden);
}

TEST(Fingerprint, InjectiveOverAllSubsetsOfEightSets) {
  oracle::Family f;
  for (int i = 0; i < 8; ++i) f.push_back({i});
  Collection c = oracle::to_collection(f);
  std::map<Fingerprint, unsigned> seen;
  for (unsigned mask = 0; mask < 256; ++mask) {
    std::vector<SetId> ids;
    for (unsigned i = 0; i < 8; ++i)
      if (mask & (1u << i)) ids.push_back(SetId{i});
    auto [it, fresh] = seen.emplace(SubCollection(c, ids).fingerprint(), mask);
    EXPECT_TRUE(fresh) << "masks " << it->second << " and " << mask << " collide";
  }
}

TEST(Properties, RandomCollectionsAgreeWithScan) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng() % 20), m = 1 + static_cast<int>(rng() % 30);
    oracle::Family f = oracle::random_family(rng, n, m);
    for (bool bitsets : {true, false}) {
      LoadOptions opts;
      if (!bitsets) opts.bitset_max_sets = 0;
      std::vector<RawSet> raw;
      for (std::size_t i = 0; i < f.size(); ++i) {
        RawSet r{"S" + std::to_string(i), {}};
        for (int e : f[i]) r.elements.push_back(oracle::entity_label(e));
        raw.push_back(r);
      }
      Collection c = Collection::from_sets(raw, opts);
      ASSERT_EQ(c.has_bitsets(), bitsets);
      // random sub-collection
      oracle::Members sub;
      std::vector<SetId> ids;
      for (int i = 0; i < static_cast<int>(f.size()); ++i)
        if (rng() % 3 != 0) sub.insert(i), ids.push_back(SetId{static_cast<std::uint32_t>(i)});
      if (sub.empty()) continue;
      SubCollection sc(c, ids);
      std::vector<EntityId> expected;
      for (int e : oracle::informative(f, sub)) expected.push_back(oracle::entity_id(c, e));
      EXPECT_EQ(informative_entities(sc), expected);
      for (int e : oracle::entities_of(f, oracle::all_members(f))) {
        Partition p = partition(sc, oracle::entity_id(c, e));
        EXPECT_EQ(p.positive.size() + p.negative.size(), sc.size());
        EXPECT_EQ(static_cast<int>(p.positive.size()), oracle::count_with(f, sub, e));
      }
      // monotone supersets
      std::set<int> i1, i2;
      auto ents = oracle::entities_of(f, oracle::all_members(f));
      for (int e : ents)
        if (rng() % 4 == 0) i1.insert(e);
      i2 = i1;
      for (int e : ents)
        if (rng() % 4 == 0) i2.insert(e);
      auto ids_of = [&](const std::set<int>& s) {
        std::vector<EntityId> out;
        for (int e : s) out.push_back(oracle::entity_id(c, e));
        return out;
      };
      SubCollection r1 = supersets_of(c, ids_of(i1)), r2 = supersets_of(c, ids_of(i2));
      EXPECT_TRUE(std::includes(r1.members().begin(), r1.members().end(), r2.members().begin(), r2.members().end()));
      EXPECT_EQ(r1.size(), oracle::filter(f, i1, {}).size());
    }
  }
}
