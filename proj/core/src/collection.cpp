#include "setquest/collection.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace setquest {
namespace {

constexpr std::uint64_t fmix64(std::uint64_t k) {
  k ^= k >> 33;
  k *= 0xff51afd7ed558ccdULL;
  k ^= k >> 33;
  k *= 0xc4ceb9fe1a85ec53ULL;
  k ^= k >> 33;
  return k;
}

// Scratch counters indexed by entity id, reused across calls on one thread.
struct CountScratch {
  std::vector<std::uint32_t> counts;
  std::vector<std::uint32_t> touched;
};

CountScratch& scratch_for(std::size_t m) {
  thread_local CountScratch s;
  if (s.counts.size() < m) s.counts.resize(m, 0);
  return s;
}

}  // namespace

std::string Fingerprint::to_hex() const {
  std::ostringstream os;
  os << std::hex << std::setfill('0') << std::setw(16) << hi << std::setw(16) << lo;
  return os.str();
}

Fingerprint fingerprint(std::span<const SetId> sorted_ids) {
  std::uint64_t a = 0x243f6a8885a308d3ULL ^ sorted_ids.size();
  std::uint64_t b = 0x13198a2e03707344ULL ^ (sorted_ids.size() * 0x9e3779b97f4a7c15ULL);
  for (SetId id : sorted_ids) {
    std::uint64_t v = id.value;
    a = fmix64(a ^ (v * 0x87c37b91114253d5ULL + 0x52dce729ULL));
    b = fmix64((b + v) * 0x4cf5ad432745937fULL ^ 0x38495ab5ULL);
  }
  return Fingerprint{fmix64(a ^ (b >> 1)), fmix64(b + a)};
}

// --- Collection ------------------------------------------------------------

Collection Collection::from_sets(std::vector<RawSet> raw, const LoadOptions& options,
                                 std::span<const std::size_t> source_lines) {
  Collection c;
  auto line = [&](std::size_t i) { return i < source_lines.size() ? source_lines[i] : i + 1; };

  std::set<std::string> labels;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].elements.empty()) {
      throw EmptySetError("set '" + raw[i].label + "' has no elements", line(i));
    }
    for (const auto& e : raw[i].elements) labels.insert(e);
  }
  c.entity_labels_.assign(labels.begin(), labels.end());
  c.entity_index_.reserve(c.entity_labels_.size());
  for (std::uint32_t i = 0; i < c.entity_labels_.size(); ++i) c.entity_index_.emplace(c.entity_labels_[i], i);

  std::map<std::vector<EntityId>, std::string> seen;
  std::vector<bool> used(c.entity_labels_.size(), false);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::vector<EntityId> elements;
    elements.reserve(raw[i].elements.size());
    for (const auto& e : raw[i].elements) elements.push_back(EntityId{c.entity_index_.at(e)});
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());

    auto [it, inserted] = seen.emplace(elements, raw[i].label);
    if (!inserted) {
      if (options.duplicates == DuplicatePolicy::kStrict) {
        throw DuplicateSetError("set '" + raw[i].label + "' duplicates set '" + it->second + "'", line(i));
      }
      c.dropped_.push_back(raw[i].label);
      continue;
    }
    if (c.set_index_.contains(raw[i].label)) {
      throw ParseError("duplicate set id '" + raw[i].label + "'", line(i));
    }
    SetId id{static_cast<std::uint32_t>(c.sets_.size())};
    c.set_index_.emplace(raw[i].label, id.value);
    for (EntityId e : elements) used[e.value] = true;
    c.sets_.push_back(SetRecord{id, std::move(raw[i].label), std::move(elements)});
  }

  // Lenient de-duplication can orphan entities; re-intern so m counts only live ones.
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    std::vector<std::uint32_t> remap(used.size(), 0);
    std::vector<std::string> live;
    for (std::uint32_t i = 0; i < used.size(); ++i) {
      if (used[i]) {
        remap[i] = static_cast<std::uint32_t>(live.size());
        live.push_back(std::move(c.entity_labels_[i]));
      }
    }
    c.entity_labels_ = std::move(live);
    c.entity_index_.clear();
    for (std::uint32_t i = 0; i < c.entity_labels_.size(); ++i) c.entity_index_.emplace(c.entity_labels_[i], i);
    for (auto& s : c.sets_) {
      for (auto& e : s.elements) e.value = remap[e.value];
    }
  }

  const std::size_t m = c.entity_labels_.size();
  const std::size_t n = c.sets_.size();
  c.postings_offsets_.assign(m + 1, 0);
  for (const auto& s : c.sets_) {
    for (EntityId e : s.elements) ++c.postings_offsets_[e.value + 1];
  }
  for (std::size_t i = 0; i < m; ++i) c.postings_offsets_[i + 1] += c.postings_offsets_[i];
  c.postings_.resize(c.postings_offsets_[m]);
  std::vector<std::uint32_t> cursor(c.postings_offsets_.begin(), c.postings_offsets_.end() - 1);
  for (const auto& s : c.sets_) {
    for (EntityId e : s.elements) c.postings_[cursor[e.value]++] = s.id;
  }

  const std::size_t words = (n + 63) / 64;
  if (n > 0 && n <= options.bitset_max_sets && m * words * sizeof(std::uint64_t) <= options.bitset_budget_bytes) {
    c.words_per_entity_ = words;
    c.bits_.assign(m * words, 0);
    for (const auto& s : c.sets_) {
      for (EntityId e : s.elements) {
        c.bits_[e.value * words + s.id.value / 64] |= std::uint64_t{1} << (s.id.value % 64);
      }
    }
  }
  return c;
}

std::span<const SetId> Collection::sets_containing(EntityId e) const {
  if (e.value >= entity_count()) throw UnknownEntityError("unknown entity id " + std::to_string(e.value));
  return std::span<const SetId>(postings_).subspan(postings_offsets_[e.value],
                                                   postings_offsets_[e.value + 1] - postings_offsets_[e.value]);
}

std::optional<EntityId> Collection::find_entity(std::string_view label) const {
  auto it = entity_index_.find(std::string(label));
  if (it == entity_index_.end()) return std::nullopt;
  return EntityId{it->second};
}

std::optional<SetId> Collection::find_set(std::string_view label) const {
  auto it = set_index_.find(std::string(label));
  if (it == set_index_.end()) return std::nullopt;
  return SetId{it->second};
}

bool Collection::contains(SetId s, EntityId e) const {
  if (words_per_entity_ != 0) {
    return (bits_[e.value * words_per_entity_ + s.value / 64] >> (s.value % 64)) & 1U;
  }
  const auto& el = sets_[s.value].elements;
  return std::binary_search(el.begin(), el.end(), e);
}

SubCollection Collection::all() const {
  std::vector<SetId> ids(sets_.size());
  for (std::uint32_t i = 0; i < ids.size(); ++i) ids[i] = SetId{i};
  return SubCollection(*this, std::move(ids));
}

// --- SubCollection ---------------------------------------------------------

SubCollection::SubCollection(const Collection& parent, std::vector<SetId> members)
    : parent_(&parent), members_(std::move(members)) {
  if (!std::is_sorted(members_.begin(), members_.end())) std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  fingerprint_ = setquest::fingerprint(members_);
}

std::vector<EntityCount> informative_counts(const SubCollection& c, std::span<const EntityId> excluded) {
  const Collection& coll = c.collection();
  CountScratch& s = scratch_for(coll.entity_count());
  s.touched.clear();
  for (SetId id : c.members()) {
    for (EntityId e : coll.set(id).elements) {
      if (s.counts[e.value]++ == 0) s.touched.push_back(e.value);
    }
  }
  std::sort(s.touched.begin(), s.touched.end());
  std::vector<EntityCount> out;
  const auto n = static_cast<std::uint32_t>(c.size());
  for (std::uint32_t e : s.touched) {
    std::uint32_t count = s.counts[e];
    s.counts[e] = 0;
    if (count == n) continue;
    if (!excluded.empty() && std::binary_search(excluded.begin(), excluded.end(), EntityId{e})) continue;
    out.push_back(EntityCount{EntityId{e}, count});
  }
  return out;
}

std::vector<EntityId> informative_entities(const SubCollection& c) {
  auto counts = informative_counts(c);
  std::vector<EntityId> out;
  out.reserve(counts.size());
  for (const auto& ec : counts) out.push_back(ec.entity);
  return out;
}

Partition partition(const SubCollection& c, EntityId e) {
  const Collection& coll = c.collection();
  if (e.value >= coll.entity_count()) throw UnknownEntityError("unknown entity id " + std::to_string(e.value));
  Partition p{e, {}, {}};
  for (SetId id : c.members()) {
    (coll.contains(id, e) ? p.positive : p.negative).push_back(id);
  }
  return p;
}

std::pair<SubCollection, SubCollection> split(const SubCollection& c, EntityId e) {
  Partition p = partition(c, e);
  return {SubCollection(c.collection(), std::move(p.positive)), SubCollection(c.collection(), std::move(p.negative))};
}

SubCollection supersets_of(const Collection& c, std::span<const EntityId> initial) {
  if (initial.empty()) return c.all();
  // Start from the rarest entity's posting list and filter.
  EntityId rarest = initial.front();
  for (EntityId e : initial) {
    if (c.sets_containing(e).size() < c.sets_containing(rarest).size()) rarest = e;
  }
  std::vector<SetId> out;
  for (SetId s : c.sets_containing(rarest)) {
    bool all = std::all_of(initial.begin(), initial.end(), [&](EntityId e) { return c.contains(s, e); });
    if (all) out.push_back(s);
  }
  return SubCollection(c, std::move(out));
}

LabelledSupersets supersets_of_labels(const Collection& c, std::span<const std::string> labels) {
  std::vector<EntityId> ids;
  std::vector<std::string> unknown;
  for (const auto& l : labels) {
    if (auto id = c.find_entity(l)) {
      ids.push_back(*id);
    } else {
      unknown.push_back(l);
    }
  }
  if (!unknown.empty()) return {SubCollection(c, {}), std::move(unknown)};
  return {supersets_of(c, ids), {}};
}

// --- I/O -------------------------------------------------------------------

Collection load_collection(std::istream& in, const LoadOptions& options) {
  std::vector<RawSet> raw;
  std::vector<std::size_t> line_of;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("elements")) {
      throw ParseError("record must be an object with \"id\" and \"elements\"", lineno);
    }
    const auto& id = j.at("id");
    const auto& elements = j.at("elements");
    if (!id.is_string() || !elements.is_array()) {
      throw ParseError("\"id\" must be a string and \"elements\" an array", lineno);
    }
    RawSet rs;
    rs.label = id.get<std::string>();
    for (const auto& e : elements) {
      if (!e.is_string()) throw ParseError("elements must be strings", lineno);
      rs.elements.push_back(e.get<std::string>());
    }
    if (rs.elements.empty()) throw EmptySetError("set '" + rs.label + "' has no elements", lineno);
    raw.push_back(std::move(rs));
    line_of.push_back(lineno);
  }
  return Collection::from_sets(std::move(raw), options, line_of);
}

Collection load_collection_file(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open collection file: " + path.string());
  return load_collection(in, options);
}

std::vector<std::pair<std::string, Collection>> load_collection_directory(const std::filesystem::path& dir,
                                                                          const LoadOptions& options) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<std::pair<std::string, Collection>> out;
  out.reserve(files.size());
  for (const auto& f : files) out.emplace_back(f.stem().string(), load_collection_file(f, options));
  return out;
}

void write_sets(std::ostream& out, std::span<const RawSet> sets) {
  for (const auto& s : sets) {
    nlohmann::json j;
    j["id"] = s.label;
    j["elements"] = s.elements;
    out << j.dump() << '\n';
  }
}

void write_collection(std::ostream& out, const Collection& c) {
  for (const auto& s : c.sets()) {
    nlohmann::json j;
    j["id"] = s.label;
    auto& el = j["elements"] = nlohmann::json::array();
    for (EntityId e : s.elements) el.push_back(c.entity_label(e));
    out << j.dump() << '\n';
  }
}

}  // namespace setquest
