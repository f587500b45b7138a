#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "setquest/errors.hpp"

namespace setquest {

/// Dense handle of an entity, 0..m-1. Ids follow the lexicographic order of labels.
struct EntityId {
  std::uint32_t value = 0;
  friend auto operator<=>(EntityId, EntityId) = default;
};

/// Dense handle of a set, 0..n-1, in document order.
struct SetId {
  std::uint32_t value = 0;
  friend auto operator<=>(SetId, SetId) = default;
};

struct Fingerprint {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
  friend auto operator<=>(const Fingerprint&, const Fingerprint&) = default;
  std::string to_hex() const;
};

struct FingerprintHash {
  std::size_t operator()(const Fingerprint& f) const noexcept {
    return static_cast<std::size_t>(f.lo ^ (f.hi * 0x9e3779b97f4a7c15ULL));
  }
};

/// 128-bit digest of a sorted set-id sequence; stable across runs and platforms.
Fingerprint fingerprint(std::span<const SetId> sorted_ids);

struct SetRecord {
  SetId id;
  std::string label;
  std::vector<EntityId> elements;  // sorted, unique, non-empty
};

/// A set as it appears in an input document, before interning.
struct RawSet {
  std::string label;
  std::vector<std::string> elements;
};

enum class DuplicatePolicy { kStrict, kLenient };

struct LoadOptions {
  DuplicatePolicy duplicates = DuplicatePolicy::kStrict;
  // Per-entity membership bitsets are built when n <= bitset_max_sets and
  // the m*n bit matrix fits in bitset_budget_bytes.
  std::size_t bitset_max_sets = std::size_t{1} << 20;
  std::size_t bitset_budget_bytes = std::size_t{64} << 20;
};

class SubCollection;

/// Immutable family of unique sets with an entity -> sets inverted index.
/// SubCollections keep a pointer to their Collection; keep it alive and in place.
class Collection {
 public:
  /// `source_lines` maps record index -> document line for error messages.
  static Collection from_sets(std::vector<RawSet> sets, const LoadOptions& options = {},
                              std::span<const std::size_t> source_lines = {});

  std::size_t set_count() const { return sets_.size(); }
  std::size_t entity_count() const { return entity_labels_.size(); }

  std::span<const SetRecord> sets() const { return sets_; }
  const SetRecord& set(SetId id) const { return sets_.at(id.value); }
  std::span<const SetId> sets_containing(EntityId e) const;

  const std::string& entity_label(EntityId e) const { return entity_labels_.at(e.value); }
  const std::string& set_label(SetId s) const { return sets_.at(s.value).label; }
  std::optional<EntityId> find_entity(std::string_view label) const;
  std::optional<SetId> find_set(std::string_view label) const;

  bool contains(SetId s, EntityId e) const;
  bool has_bitsets() const { return words_per_entity_ != 0; }

  /// Labels of sets dropped as duplicates in lenient mode.
  const std::vector<std::string>& dropped_duplicates() const { return dropped_; }

  SubCollection all() const;

 private:
  std::vector<SetRecord> sets_;
  std::vector<std::string> entity_labels_;
  std::unordered_map<std::string, std::uint32_t> entity_index_;
  std::unordered_map<std::string, std::uint32_t> set_index_;
  std::vector<std::uint32_t> postings_offsets_;  // m+1 offsets into postings_
  std::vector<SetId> postings_;
  std::size_t words_per_entity_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::string> dropped_;
};

/// A subset of a collection's sets, canonicalized as a sorted id sequence.
class SubCollection {
 public:
  SubCollection(const Collection& parent, std::vector<SetId> members);

  const Collection& collection() const { return *parent_; }
  std::span<const SetId> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const Fingerprint& fingerprint() const { return fingerprint_; }

  friend bool operator==(const SubCollection& a, const SubCollection& b) {
    return a.parent_ == b.parent_ && a.members_ == b.members_;
  }

 private:
  const Collection* parent_;
  std::vector<SetId> members_;
  Fingerprint fingerprint_;
};

struct Partition {
  EntityId entity;
  std::vector<SetId> positive;
  std::vector<SetId> negative;
};

struct EntityCount {
  EntityId entity;
  std::uint32_t count = 0;  // member sets containing the entity
};

/// Sorted set of entity ids excluded from questioning.
using EntitySet = std::vector<EntityId>;

/// Informative entities (present in some but not all members) with their counts,
/// ascending by id. Entities in `excluded` (sorted) are skipped.
std::vector<EntityCount> informative_counts(const SubCollection& c, std::span<const EntityId> excluded = {});

std::vector<EntityId> informative_entities(const SubCollection& c);

/// Throws UnknownEntityError when `e` is not an entity of the parent collection.
Partition partition(const SubCollection& c, EntityId e);

std::pair<SubCollection, SubCollection> split(const SubCollection& c, EntityId e);

SubCollection supersets_of(const Collection& c, std::span<const EntityId> initial);

struct LabelledSupersets {
  SubCollection candidates;
  std::vector<std::string> unknown_labels;  // non-empty => candidates empty
};
LabelledSupersets supersets_of_labels(const Collection& c, std::span<const std::string> labels);

// --- I/O -------------------------------------------------------------------

/// Reads line-delimited {"id": "...", "elements": [...]} records. Blank lines are skipped.
Collection load_collection(std::istream& in, const LoadOptions& options = {});
Collection load_collection_file(const std::filesystem::path& path, const LoadOptions& options = {});
/// One collection per regular file, keyed by file stem, sorted by name.
std::vector<std::pair<std::string, Collection>> load_collection_directory(
    const std::filesystem::path& dir, const LoadOptions& options = {});

void write_collection(std::ostream& out, const Collection& c);
void write_sets(std::ostream& out, std::span<const RawSet> sets);

}  // namespace setquest

template <>
struct std::hash<setquest::EntityId> {
  std::size_t operator()(setquest::EntityId e) const noexcept { return e.value; }
};
template <>
struct std::hash<setquest::SetId> {
  std::size_t operator()(setquest::SetId s) const noexcept { return s.value; }
};
