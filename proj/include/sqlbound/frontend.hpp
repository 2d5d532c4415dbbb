#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sqlbound/ast.hpp"
#include "sqlbound/schema.hpp"

namespace sqlbound {

// String literals become distinct Int codes in first-seen order.
class StringTable {
public:
  static constexpr std::int64_t kBase = 1000000;
  std::int64_t intern(const std::string& s);
  std::optional<std::string> lookup(std::int64_t code) const;
  const std::vector<std::string>& entries() const { return entries_; }
  nlohmann::json to_json() const;

private:
  std::vector<std::string> entries_;
};

struct ProblemOptions {
  std::optional<int> bound;
  std::optional<int> max_bound;
  std::int64_t timeout_ms = 600000;
};

struct Problem {
  Schema schema;
  ConstraintSet constraints;
  QueryPtr q1;
  QueryPtr q2;
  ProblemOptions options;
  StringTable strings;
};

Problem parse_problem(std::string_view json_text);
Schema parse_schema(const nlohmann::json& j);

// Raw (unresolved) parsers.
QueryPtr parse_sql(std::string_view sql, StringTable& strings);
QueryPtr parse_algebra(std::string_view text, StringTable& strings);
bool looks_like_algebra(std::string_view text);

std::string print_algebra(const Query& q);
std::string print_algebra(const Expr& e);
std::string print_algebra(const Pred& p);

QueryPtr resolve_names(const QueryPtr& q, const Schema& schema);
void check_well_formed(const Query& q, const Schema& schema);

// Parse (SQL or algebra), resolve and check.
QueryPtr parse_query(std::string_view text, const Schema& schema, StringTable& strings);

Constraint parse_constraint(std::string_view text, const Schema& schema, StringTable& strings);

} // namespace sqlbound
