#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "setquest/collection.hpp"

namespace setquest {

enum class ColumnKind { kCategorical, kNumerical };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kCategorical;
};

struct TableSchema {
  std::vector<ColumnSpec> columns;                          // queryable columns
  std::map<std::string, std::vector<double>> reference_values;  // numerical column -> thresholds
  std::string id_column;                                    // row identifier
  char delimiter = ',';

  /// {"id_column": ..., "delimiter": ",", "columns": [{"name", "kind"}],
  ///  "reference_values": {"col": [..]}}. Throws ParseError.
  static TableSchema from_json(const nlohmann::json& doc);
  /// Throws ParseError when reference values are not strictly increasing.
  void validate() const;
};

using CellValue = std::variant<std::monostate, std::string, double>;  // monostate = null

struct Table {
  std::vector<std::string> row_ids;
  std::vector<std::vector<CellValue>> rows;  // one value per schema column
  TableSchema schema;

  std::size_t column_index(const std::string& name) const;
  std::optional<std::size_t> find_row(const std::string& id) const;
};

/// Delimited text with a header row naming at least the id column and every schema
/// column. Empty cells and "NULL"/"NA" are null. Numerical cells must parse as numbers.
/// Missing reference values are filled in with deciles of the column. Throws ParseError.
Table load_table(std::istream& in, TableSchema schema);

/// Deciles (10%..90%, nearest rank) of the column's non-null values, deduplicated.
std::vector<double> default_reference_values(const Table& t, std::size_t column);

/// Disjunction of equalities for a categorical column.
struct CategoricalCondition {
  std::size_t column = 0;
  std::vector<std::string> values;  // sorted, distinct
  friend bool operator==(const CategoricalCondition&, const CategoricalCondition&) = default;
};

/// lo < x < hi; a missing side is unbounded.
struct NumericalCondition {
  std::size_t column = 0;
  std::optional<double> lo;
  std::optional<double> hi;
  friend bool operator==(const NumericalCondition&, const NumericalCondition&) = default;
};

using Condition = std::variant<CategoricalCondition, NumericalCondition>;

std::size_t condition_column(const Condition& c);
bool satisfies(const Table& t, std::size_t row, const Condition& c);  // null fails
std::string to_string(const Condition& c, const Table& t);

/// A conjunction of one or two conditions on distinct columns, ordered by column.
struct CandidateQuery {
  std::vector<Condition> conjuncts;
  friend bool operator==(const CandidateQuery&, const CandidateQuery&) = default;
};

std::string to_string(const CandidateQuery& q, const Table& t);

/// Equality disjunction over the examples' distinct values. Empty when any example
/// value is null (no condition on the column could then hold for every example).
std::optional<CategoricalCondition> categorical_condition(const Table& t, std::size_t column,
                                                          const std::vector<std::size_t>& examples);

/// Every interval over the reference values (plus unbounded sides, but not both) that
/// strictly contains all example values.
std::vector<NumericalCondition> numerical_conditions(const Table& t, std::size_t column,
                                                     const std::vector<std::size_t>& examples,
                                                     const std::vector<double>& refs);

/// All single conditions, then all conjunctions of two conditions on different
/// columns. Throws Error when no column yields a condition or no examples are given.
std::vector<CandidateQuery> enumerate_candidates(const Table& t, const std::vector<std::size_t>& examples);

/// Row indices satisfying every conjunct, ascending.
std::vector<std::size_t> materialize(const Table& t, const CandidateQuery& q);

struct QueryCollection {
  Collection collection;
  /// Query texts per set id; identical result sets share one set.
  std::vector<std::vector<std::string>> query_labels;
};

/// Entities are row ids. Each distinct result becomes one set labelled by its first query.
QueryCollection to_collection(const Table& t, const std::vector<CandidateQuery>& candidates);

}  // namespace setquest
