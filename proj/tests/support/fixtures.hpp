#pragma once

#include <filesystem>
#include <string>

#include "setquest/collection.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return SETQUEST_TEST_DATA_DIR; }

inline setquest::Collection seven_sets() { return setquest::load_collection_file(data_dir() / "seven_sets.jsonl"); }
/// The seven-set example with S1 = {a,b,c} and S4 = {a,b,c,d,g,h}.
inline setquest::Collection seven_sets_c2() { return setquest::load_collection_file(data_dir() / "seven_sets_c2.jsonl"); }

inline setquest::EntityId ent(const setquest::Collection& c, const std::string& label) { return *c.find_entity(label); }
inline setquest::SetId set(const setquest::Collection& c, const std::string& label) { return *c.find_set(label); }

}  // namespace fixtures
