#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "sqlbound/ast.hpp"
#include "sqlbound/schema.hpp"

namespace sqlbound {

using SymTupleList = std::vector<std::string>;
// Relation name -> tuple identifiers.
using TupleEnv = std::map<std::string, SymTupleList>;

// Relational inputs first, then subqueries embedded in predicates/expressions.
std::vector<const Query*> query_children(const Query& q);

AttrList infer_attributes(const Schema& schema, const Query& q);
AttrType infer_type(const Expr& e, const AttrList& in);

struct NodeInfo {
  int id = 0;
  AttrList attrs;
  SymTupleList tuples;
};

class Annotation {
public:
  const NodeInfo& at(const Query& q) const;
  const std::vector<const Query*>& order() const { return order_; }
  void put(const Query& q, NodeInfo info);
  nlohmann::json to_json() const;

private:
  std::unordered_map<const Query*, NodeInfo> info_;
  std::vector<const Query*> order_;
};

// Node ids are assigned in preorder starting at next_id, which is advanced.
Annotation annotate(const Schema& schema, const TupleEnv& env, const Query& q, int& next_id);

SymTupleList infer_tuples(const Schema& schema, const TupleEnv& env, const Query& q, int first_id = 1);

std::string fresh_tuple(int node, std::size_t index);

} // namespace sqlbound
