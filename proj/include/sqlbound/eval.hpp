#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqlbound/ast.hpp"
#include "sqlbound/schema.hpp"
#include "sqlbound/value.hpp"

namespace sqlbound {

// Relation name -> rows, values in schema attribute order.
using Database = std::map<std::string, std::vector<Row>>;

struct Relation {
  AttrList attrs;
  std::vector<Row> rows;
};

// Division or modulo by zero throws EvalError.
std::vector<Row> eval_query(const Database& db, const Schema& schema, const Query& q);
Relation eval_relation(const Database& db, const Schema& schema, const Query& q);
// Attribute references read the first tuple of xs; aggregates range over all of xs.
TriBool eval_predicate(const Database& db, const Schema& schema, const std::vector<Row>& xs, const Pred& p);
Value eval_expression(const Database& db, const Schema& schema, const std::vector<Row>& xs, const Expr& e);
Value eval_aggregate(const Database& db, const Schema& schema, const std::vector<Row>& xs, AggFn fn,
                     const Expr& arg);

bool check_constraints(const Database& db, const Schema& schema, const ConstraintSet& cs);
bool check_constraint(const Database& db, const Schema& schema, const Constraint& c);
bool check_pred(const CheckPred& p, const Row& row);

// Names are ignored; throws on arity mismatch.
bool bag_equal(const std::vector<Row>& a, const std::vector<Row>& b);
bool list_equal(const std::vector<Row>& a, const std::vector<Row>& b);

std::vector<Value> default_domain();

// Every database with at most max_rows rows per relation over the domain that
// satisfies the constraints. Bool attributes range over {Null,false,true}.
class DatabaseEnumerator {
public:
  DatabaseEnumerator(const Schema& schema, const ConstraintSet& cs, std::size_t max_rows,
                     std::vector<Value> domain = default_domain(),
                     std::size_t cap = 2000000);

  // Throws Exhausted once more than cap candidates would be inspected.
  std::optional<Database> next();
  std::size_t candidates() const { return inspected_; }

private:
  bool advance();

  const Schema& schema_;
  const ConstraintSet& cs_;
  std::size_t cap_;
  std::size_t inspected_ = 0;
  std::vector<std::string> names_;
  std::vector<std::vector<std::vector<Row>>> choices_;
  std::vector<std::size_t> pos_;
  bool done_ = false;
  bool started_ = false;
};

nlohmann::json database_to_json(const Database& db, const Schema& schema);
Database database_from_json(const nlohmann::json& j, const Schema& schema);
std::string database_to_string(const Database& db);

} // namespace sqlbound
