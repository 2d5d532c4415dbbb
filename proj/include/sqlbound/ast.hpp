#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sqlbound/schema.hpp"
#include "sqlbound/value.hpp"

namespace sqlbound {

struct Expr;
struct Pred;
struct Query;
using ExprPtr = std::shared_ptr<const Expr>;
using PredPtr = std::shared_ptr<const Pred>;
using QueryPtr = std::shared_ptr<const Query>;

enum class ArithOp { Add, Sub, Mul, Div, Mod };
enum class AggFn { Count, Sum, Avg, Min, Max };
const char* to_string(ArithOp op);
const char* to_string(AggFn fn);

// Attribute identifier: qualifier.name, or just name when unqualified.
struct Attribute {
  std::string qualifier;
  std::string name;
  AttrType type = AttrType::Int;

  std::string id() const { return qualifier.empty() ? name : qualifier + "." + name; }
  friend bool operator==(const Attribute& a, const Attribute& b) {
    return a.qualifier == b.qualifier && a.name == b.name && a.type == b.type;
  }
};
using AttrList = std::vector<Attribute>;

struct Expr {
  // index is -1 until resolution binds it to a position of the input row.
  struct Column { std::string qualifier; std::string name; int index = -1; };
  struct Const { Value value; };
  struct Arith { ArithOp op; ExprPtr lhs, rhs; };
  struct Ite { PredPtr cond; ExprPtr then_e, else_e; };
  struct Case { std::vector<std::pair<PredPtr, ExprPtr>> whens; ExprPtr else_e; };
  struct Cast { PredPtr pred; };
  struct Agg { AggFn fn; ExprPtr arg; };
  // Only legal as a projection item before resolution.
  struct Star { std::string qualifier; };
  std::variant<Column, Const, Arith, Ite, Case, Cast, Agg, Star> node;
};

struct Pred {
  struct Const { bool value; };
  struct Cmp { CmpOp op; ExprPtr lhs, rhs; };
  struct IsNull { ExprPtr arg; };
  struct InValues { std::vector<ExprPtr> lhs; std::vector<std::vector<Value>> rows; };
  struct InQuery { std::vector<ExprPtr> lhs; QueryPtr query; };
  struct And { PredPtr lhs, rhs; };
  struct Or { PredPtr lhs, rhs; };
  struct Not { PredPtr arg; };
  std::variant<Const, Cmp, IsNull, InValues, InQuery, And, Or, Not> node;
};

struct ProjectItem {
  ExprPtr expr;
  // Output attribute name; alias may be empty before resolution.
  std::string qualifier;
  std::string alias;
};

enum class SetOpKind { Union, Intersect, Except, UnionAll, IntersectAll, ExceptAll };
enum class JoinKind { Product, Inner, Left, Right, Full };
const char* to_string(SetOpKind k);
const char* to_string(JoinKind k);

struct Query {
  struct Relation { std::string name; };
  struct Project { QueryPtr input; std::vector<ProjectItem> items; };
  struct Filter { QueryPtr input; PredPtr pred; };
  struct Rename { QueryPtr input; std::string alias; };
  struct SetOp { SetOpKind kind; QueryPtr lhs, rhs; };
  struct Distinct { QueryPtr input; };
  struct Join { JoinKind kind; QueryPtr lhs, rhs; PredPtr pred; };
  struct GroupBy { QueryPtr input; std::vector<ExprPtr> keys; std::vector<ProjectItem> items; PredPtr having; };
  struct With { std::vector<std::pair<std::string, QueryPtr>> defs; QueryPtr body; };
  struct OrderBy { QueryPtr input; std::vector<ExprPtr> keys; bool ascending = true; };
  std::variant<Relation, Project, Filter, Rename, SetOp, Distinct, Join, GroupBy, With, OrderBy> node;
};

template <class T> ExprPtr make_expr(T node) { return std::make_shared<const Expr>(Expr{std::move(node)}); }
template <class T> PredPtr make_pred(T node) { return std::make_shared<const Pred>(Pred{std::move(node)}); }
template <class T> QueryPtr make_query(T node) { return std::make_shared<const Query>(Query{std::move(node)}); }

ExprPtr col(std::string qualifier, std::string name, int index = -1);
ExprPtr lit(Value v);
PredPtr pred_true();
PredPtr pred_and(PredPtr a, PredPtr b);
PredPtr pred_or(PredPtr a, PredPtr b);
PredPtr pred_not(PredPtr a);

bool has_aggregate(const Expr& e);
bool has_aggregate(const Pred& p);
bool has_aggregate(const std::vector<ProjectItem>& items);

// Structural equality over resolved or raw trees.
bool equal(const Expr& a, const Expr& b);
bool equal(const Pred& a, const Pred& b);
bool equal(const Query& a, const Query& b);

// Name of the derived attribute for an unaliased expression, e.g. "Avg_a".
std::string derived_name(const Expr& e);

} // namespace sqlbound
