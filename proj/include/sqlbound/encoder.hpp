#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "sqlbound/ast.hpp"
#include "sqlbound/eval.hpp"
#include "sqlbound/formula.hpp"
#include "sqlbound/inference.hpp"
#include "sqlbound/schema.hpp"

namespace sqlbound {

struct SymbolicDatabase {
  std::size_t bound = 0;
  TupleEnv tuples;
};

// Base tuples are t1..tk in schema order.
SymbolicDatabase build_symbolic_db(const Schema& schema, int bound);

// (isNull, val); den is the positive denominator of an exact Avg, null when 1.
struct SymValue {
  smt::Term is_null;
  smt::Term val;
  smt::Term den;
};

struct SymTri {
  smt::Term is_true;
  smt::Term is_false;
};

struct SymRow {
  smt::Term del;
  std::vector<SymValue> values;
};

struct EncodedRelation {
  AttrList attrs;
  // Attribute ids naming the functions that hold the tuples' values.
  std::vector<std::string> fns;
  SymTupleList tuples;
  bool sorted = false;
};

std::string del_fn();
std::string null_fn(const std::string& attr_id);
std::string val_fn(const std::string& attr_id);

smt::Term tuple_term(const std::string& name);
smt::Term del_term(const std::string& tuple);

class Encoder {
public:
  Encoder(const Schema& schema, const SymbolicDatabase& db, smt::Formula& out);

  // Declares Γ's tuples and functions; asserts Bool attributes range over {0,1}.
  void declare_database();
  EncodedRelation base_relation(const std::string& name) const;

  smt::Term encode_constraints(const ConstraintSet& cs);
  smt::Term encode_constraint(const Constraint& c);
  // Adds Φ_Q to the formula and returns the output relation.
  EncodedRelation encode_query(const Query& q);
  const Annotation& annotation() const { return ann_; }

  SymRow row(const EncodedRelation& r, std::size_t i) const;
  SymValue encode_expression(const std::vector<SymRow>& xs, const Expr& e);
  SymTri encode_predicate(const std::vector<SymRow>& xs, const Pred& p);

  smt::Term bag_equal(const EncodedRelation& a, const EncodedRelation& b) const;
  smt::Term list_equal(const EncodedRelation& a, const EncodedRelation& b) const;

  // Asserting this fixes Γ to db: absent tuples deleted, Null payloads set to null_payload.
  smt::Term pin(const Database& db, std::int64_t null_payload = 0) const;

  smt::Formula& formula() { return out_; }
  int next_node_id() const { return next_id_; }

private:
  struct Member {
    SymRow row;
    smt::Term guard;
  };
  struct Context {
    const SymRow* head = nullptr;
    std::vector<Member> members;
  };

  EncodedRelation encode_node(const Query& q);
  EncodedRelation node(const Query& q, const Query::Relation& n);
  EncodedRelation node(const Query& q, const Query::Project& n);
  EncodedRelation node(const Query& q, const Query::Filter& n);
  EncodedRelation node(const Query& q, const Query::Rename& n);
  EncodedRelation node(const Query& q, const Query::SetOp& n);
  EncodedRelation node(const Query& q, const Query::Distinct& n);
  EncodedRelation node(const Query& q, const Query::Join& n);
  EncodedRelation node(const Query& q, const Query::GroupBy& n);
  EncodedRelation node(const Query& q, const Query::With& n);
  EncodedRelation node(const Query& q, const Query::OrderBy& n);

  std::vector<SymRow> rows(const EncodedRelation& r) const;
  EncodedRelation output(const Query& q, const std::vector<SymRow>& out);
  std::vector<smt::Term> dedup(const std::vector<SymRow>& rs) const;
  std::vector<smt::Term> except_all(const EncodedRelation& l, const EncodedRelation& r, const std::string& fn);
  smt::Term membership(const SymRow& x, const std::vector<SymRow>& rs) const;

  SymValue expr(const Context& cx, const Expr& e);
  SymTri pred(const Context& cx, const Pred& p);
  SymValue aggregate(const Context& cx, AggFn fn, const Expr& arg);
  const EncodedRelation& subquery(const Query& q);
  smt::Term materialize(const std::string& tuple, const std::vector<std::string>& fns, const SymRow& r);
  void declare_tuple(const std::string& name);
  void declare_fns(const std::vector<std::string>& fns);
  smt::Term fresh_int(const std::string& prefix);
  smt::Term check_pred(const CheckPred& p, const SymRow& r) const;

  const Schema& schema_;
  const SymbolicDatabase& db_;
  smt::Formula& out_;
  int next_id_ = 1;
  int fresh_ = 0;
  Annotation ann_;
  std::vector<std::map<std::string, EncodedRelation>> ctes_;
  std::unordered_map<const Query*, EncodedRelation> sub_;
};

SymTri compare(CmpOp op, const SymValue& a, const SymValue& b);
// Value identity: both Null, or both non-null and equal.
smt::Term value_equal(const SymValue& a, const SymValue& b);
smt::Term tuple_equal(const SymRow& a, const SymRow& b);
// Truncating integer division and remainder, as in C.
smt::Term tdiv(const smt::Term& a, const smt::Term& b);
smt::Term tmod(const smt::Term& a, const smt::Term& b);
smt::Term trunc(const SymValue& v);

} // namespace sqlbound
