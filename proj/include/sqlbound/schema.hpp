#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sqlbound/value.hpp"

namespace sqlbound {

struct AttributeDef {
  std::string name;
  AttrType type = AttrType::Int;
};

struct RelationSchema {
  std::string name;
  std::vector<AttributeDef> attrs;

  // Case-insensitive lookup; -1 when absent.
  int index_of(const std::string& attr) const;
};

class Schema {
public:
  Schema() = default;
  explicit Schema(std::vector<RelationSchema> rels);

  const std::vector<RelationSchema>& relations() const { return rels_; }
  const RelationSchema* find(const std::string& name) const;
  const RelationSchema& at(const std::string& name) const;
  int index_of(const std::string& name) const;

private:
  std::vector<RelationSchema> rels_;
};

enum class CmpOp { Lt, Le, Eq, Ne, Gt, Ge };
const char* to_string(CmpOp op);
CmpOp flip(CmpOp op);
CmpOp negate(CmpOp op);

struct CheckPred;
using CheckPredPtr = std::shared_ptr<const CheckPred>;

// Restricted predicate over a single relation's attributes (by index).
struct CheckPred {
  struct AttrConst { int attr; CmpOp op; Value value; };
  struct AttrAttr { int lhs; CmpOp op; int rhs; };
  struct InValues { int attr; std::vector<Value> values; };
  struct And { CheckPredPtr lhs, rhs; };
  struct Or { CheckPredPtr lhs, rhs; };
  struct Not { CheckPredPtr arg; };
  std::variant<AttrConst, AttrAttr, InValues, And, Or, Not> node;
};

struct PrimaryKey { std::string rel; std::vector<int> attrs; };
struct ForeignKey { std::string rel; int attr; std::string ref_rel; int ref_attr; };
struct NotNull { std::string rel; int attr; };
struct Check { std::string rel; CheckPredPtr pred; };
struct AutoIncrement { std::string rel; int attr; std::int64_t start; };

using Constraint = std::variant<PrimaryKey, ForeignKey, NotNull, Check, AutoIncrement>;
using ConstraintSet = std::vector<Constraint>;

std::string to_string(const Constraint& c, const Schema& schema);

} // namespace sqlbound
