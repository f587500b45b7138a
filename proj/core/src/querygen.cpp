#include "setquest/querygen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <map>
#include <set>
#include <sstream>

namespace setquest {
namespace {

std::vector<std::string> split_record(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == delim) {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool is_null(const std::string& s) { return s.empty() || s == "NULL" || s == "NA" || s == "null"; }

std::string format_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

std::optional<double> numeric(const CellValue& v) {
  if (const double* d = std::get_if<double>(&v)) return *d;
  return std::nullopt;
}

}  // namespace

void TableSchema::validate() const {
  if (id_column.empty()) throw ParseError("schema: id_column is required");
  std::set<std::string> names;
  for (const auto& c : columns) {
    if (!names.insert(c.name).second) throw ParseError("schema: duplicate column '" + c.name + "'");
  }
  for (const auto& [col, refs] : reference_values) {
    auto it = std::find_if(columns.begin(), columns.end(), [&](const ColumnSpec& c) { return c.name == col; });
    if (it == columns.end() || it->kind != ColumnKind::kNumerical) {
      throw ParseError("schema: reference values for non-numerical column '" + col + "'");
    }
    for (std::size_t i = 1; i < refs.size(); ++i) {
      if (!(refs[i - 1] < refs[i])) throw ParseError("schema: reference values of '" + col + "' must be strictly increasing");
    }
  }
}

TableSchema TableSchema::from_json(const nlohmann::json& doc) {
  TableSchema s;
  try {
    s.id_column = doc.at("id_column").get<std::string>();
    if (doc.contains("delimiter")) {
      auto d = doc["delimiter"].get<std::string>();
      if (d.size() != 1) throw ParseError("schema: delimiter must be one character");
      s.delimiter = d == "\\t" ? '\t' : d[0];
    }
    for (const auto& c : doc.at("columns")) {
      ColumnSpec spec{c.at("name").get<std::string>(), ColumnKind::kCategorical};
      auto kind = c.at("kind").get<std::string>();
      if (kind == "numerical") {
        spec.kind = ColumnKind::kNumerical;
      } else if (kind != "categorical") {
        throw ParseError("schema: unknown column kind '" + kind + "'");
      }
      s.columns.push_back(std::move(spec));
    }
    if (doc.contains("reference_values")) {
      for (const auto& [col, refs] : doc["reference_values"].items()) {
        s.reference_values[col] = refs.get<std::vector<double>>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("schema: ") + e.what());
  }
  s.validate();
  return s;
}

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < schema.columns.size(); ++i) {
    if (schema.columns[i].name == name) return i;
  }
  throw Error("table: unknown column '" + name + "'");
}

std::optional<std::size_t> Table::find_row(const std::string& id) const {
  auto it = std::find(row_ids.begin(), row_ids.end(), id);
  if (it == row_ids.end()) return std::nullopt;
  return static_cast<std::size_t>(it - row_ids.begin());
}

Table load_table(std::istream& in, TableSchema schema) {
  schema.validate();
  Table t;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::size_t> source;  // schema column -> field index
  std::size_t id_field = 0;
  std::set<std::string> ids;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_record(line, schema.delimiter);
    for (auto& f : fields) f = trim(f);
    if (source.empty()) {
      auto locate = [&](const std::string& name) {
        auto it = std::find(fields.begin(), fields.end(), name);
        if (it == fields.end()) throw ParseError("header lacks column '" + name + "'", line_no);
        return static_cast<std::size_t>(it - fields.begin());
      };
      id_field = locate(schema.id_column);
      for (const auto& c : schema.columns) source.push_back(locate(c.name));
      if (schema.columns.empty()) source.push_back(id_field);  // marks the header as read
      continue;
    }
    std::size_t needed = id_field;
    for (auto s : source) needed = std::max(needed, s);
    if (fields.size() <= needed) throw ParseError("row has too few fields", line_no);
    if (is_null(fields[id_field])) throw ParseError("row without id", line_no);
    if (!ids.insert(fields[id_field]).second) throw ParseError("duplicate row id '" + fields[id_field] + "'", line_no);

    std::vector<CellValue> row;
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      const std::string& raw = fields[source[c]];
      if (is_null(raw)) {
        row.emplace_back(std::monostate{});
      } else if (schema.columns[c].kind == ColumnKind::kNumerical) {
        char* end = nullptr;
        double v = std::strtod(raw.c_str(), &end);
        if (end != raw.c_str() + raw.size() || !std::isfinite(v)) {
          throw ParseError("column '" + schema.columns[c].name + "': not a number: '" + raw + "'", line_no);
        }
        row.emplace_back(v);
      } else {
        row.emplace_back(raw);
      }
    }
    t.row_ids.push_back(fields[id_field]);
    t.rows.push_back(std::move(row));
  }
  if (source.empty()) throw ParseError("table has no header row");
  t.schema = std::move(schema);
  for (std::size_t c = 0; c < t.schema.columns.size(); ++c) {
    const auto& col = t.schema.columns[c];
    if (col.kind == ColumnKind::kNumerical && !t.schema.reference_values.contains(col.name)) {
      t.schema.reference_values[col.name] = default_reference_values(t, c);
    }
  }
  return t;
}

std::vector<double> default_reference_values(const Table& t, std::size_t column) {
  std::vector<double> values;
  for (const auto& row : t.rows) {
    if (auto v = numeric(row[column])) values.push_back(*v);
  }
  std::vector<double> refs;
  if (values.empty()) return refs;
  std::sort(values.begin(), values.end());
  for (int d = 1; d <= 9; ++d) {
    auto rank = static_cast<std::size_t>(std::ceil(d / 10.0 * static_cast<double>(values.size())));
    double v = values[std::max<std::size_t>(rank, 1) - 1];
    if (refs.empty() || refs.back() < v) refs.push_back(v);
  }
  return refs;
}

std::size_t condition_column(const Condition& c) {
  return std::visit([](const auto& x) { return x.column; }, c);
}

bool satisfies(const Table& t, std::size_t row, const Condition& c) {
  const CellValue& v = t.rows.at(row).at(condition_column(c));
  if (const auto* cat = std::get_if<CategoricalCondition>(&c)) {
    const auto* s = std::get_if<std::string>(&v);
    return s && std::binary_search(cat->values.begin(), cat->values.end(), *s);
  }
  const auto& num = std::get<NumericalCondition>(c);
  auto x = numeric(v);
  return x && (!num.lo || *num.lo < *x) && (!num.hi || *x < *num.hi);
}

std::string to_string(const Condition& c, const Table& t) {
  const std::string& name = t.schema.columns.at(condition_column(c)).name;
  std::string out;
  if (const auto* cat = std::get_if<CategoricalCondition>(&c)) {
    for (const auto& v : cat->values) {
      if (!out.empty()) out += " OR ";
      out += name + " = \"" + v + "\"";
    }
    return out;
  }
  const auto& num = std::get<NumericalCondition>(c);
  if (num.lo) out = name + " > " + format_number(*num.lo);
  if (num.hi) out += (out.empty() ? "" : " AND ") + name + " < " + format_number(*num.hi);
  return out;
}

std::string to_string(const CandidateQuery& q, const Table& t) {
  if (q.conjuncts.size() == 1) return to_string(q.conjuncts[0], t);
  std::string out;
  for (const auto& c : q.conjuncts) {
    if (!out.empty()) out += " AND ";
    out += "(" + to_string(c, t) + ")";
  }
  return out;
}

std::optional<CategoricalCondition> categorical_condition(const Table& t, std::size_t column,
                                                          const std::vector<std::size_t>& examples) {
  std::set<std::string> values;
  for (auto r : examples) {
    const auto* s = std::get_if<std::string>(&t.rows.at(r).at(column));
    if (!s) return std::nullopt;
    values.insert(*s);
  }
  if (values.empty()) return std::nullopt;
  return CategoricalCondition{column, {values.begin(), values.end()}};
}

std::vector<NumericalCondition> numerical_conditions(const Table& t, std::size_t column,
                                                     const std::vector<std::size_t>& examples,
                                                     const std::vector<double>& refs) {
  std::vector<NumericalCondition> out;
  if (examples.empty()) return out;
  double lo_ex = 0, hi_ex = 0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    auto x = numeric(t.rows.at(examples[i]).at(column));
    if (!x) return out;
    lo_ex = i == 0 ? *x : std::min(lo_ex, *x);
    hi_ex = i == 0 ? *x : std::max(hi_ex, *x);
  }
  std::vector<std::optional<double>> lows{std::nullopt}, highs;
  for (double r : refs) {
    if (r < lo_ex) lows.emplace_back(r);
  }
  for (double r : refs) {
    if (r > hi_ex) highs.emplace_back(r);
  }
  highs.emplace_back(std::nullopt);
  // Bounded intervals first, tightest lower bound first.
  std::reverse(lows.begin(), lows.end());
  for (const auto& lo : lows) {
    for (const auto& hi : highs) {
      if (!lo && !hi) continue;
      out.push_back(NumericalCondition{column, lo, hi});
    }
  }
  return out;
}

std::vector<CandidateQuery> enumerate_candidates(const Table& t, const std::vector<std::size_t>& examples) {
  if (examples.empty()) throw Error("query generation needs at least one example row");
  std::vector<std::vector<Condition>> per_column(t.schema.columns.size());
  for (std::size_t c = 0; c < t.schema.columns.size(); ++c) {
    const auto& col = t.schema.columns[c];
    if (col.kind == ColumnKind::kCategorical) {
      if (auto cond = categorical_condition(t, c, examples)) per_column[c].emplace_back(std::move(*cond));
    } else {
      auto it = t.schema.reference_values.find(col.name);
      if (it == t.schema.reference_values.end()) continue;
      for (auto& cond : numerical_conditions(t, c, examples, it->second)) per_column[c].emplace_back(std::move(cond));
    }
  }
  std::vector<CandidateQuery> out;
  for (const auto& conds : per_column) {
    for (const auto& cond : conds) out.push_back(CandidateQuery{{cond}});
  }
  for (std::size_t a = 0; a < per_column.size(); ++a) {
    for (std::size_t b = a + 1; b < per_column.size(); ++b) {
      for (const auto& ca : per_column[a]) {
        for (const auto& cb : per_column[b]) out.push_back(CandidateQuery{{ca, cb}});
      }
    }
  }
  if (out.empty()) throw Error("no candidate query: every column is null for some example");
  return out;
}

std::vector<std::size_t> materialize(const Table& t, const CandidateQuery& q) {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    bool ok = std::all_of(q.conjuncts.begin(), q.conjuncts.end(), [&](const Condition& c) { return satisfies(t, r, c); });
    if (ok) out.push_back(r);
  }
  return out;
}

QueryCollection to_collection(const Table& t, const std::vector<CandidateQuery>& candidates) {
  if (candidates.empty()) throw Error("to_collection: no candidates");
  std::map<std::vector<std::size_t>, std::size_t> index;  // result -> set position
  std::vector<RawSet> sets;
  std::vector<std::vector<std::string>> labels;
  for (const auto& q : candidates) {
    auto rows = materialize(t, q);
    std::string text = to_string(q, t);
    auto [it, fresh] = index.emplace(rows, sets.size());
    if (fresh) {
      RawSet r{text, {}};
      for (auto row : rows) r.elements.push_back(t.row_ids[row]);
      sets.push_back(std::move(r));
      labels.push_back({text});
    } else {
      labels[it->second].push_back(text);
    }
  }
  return QueryCollection{Collection::from_sets(std::move(sets)), std::move(labels)};
}

}  // namespace setquest
