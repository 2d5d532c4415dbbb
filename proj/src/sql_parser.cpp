#include <memory>
#include <set>

#include "lexer.hpp"
#include "sqlbound/errors.hpp"
#include "sqlbound/frontend.hpp"

namespace sqlbound {

using detail::Token;
using detail::TokenStream;

namespace {

const std::set<std::string> kReserved = {
    "SELECT", "FROM", "WHERE", "GROUP", "BY", "HAVING", "ORDER", "UNION", "INTERSECT",
    "EXCEPT", "MINUS", "JOIN", "INNER", "LEFT", "RIGHT", "FULL", "OUTER", "CROSS", "ON",
    "AS", "AND", "OR", "NOT", "IN", "IS", "NULL", "CASE", "WHEN", "THEN", "ELSE", "END",
    "DISTINCT", "ALL", "WITH", "ASC", "DESC", "BETWEEN", "LIKE", "EXISTS", "TRUE", "FALSE",
    "USING", "NATURAL", "LIMIT", "OFFSET", "DIV", "MOD"};

// Surface expression tree; converted into Expr or Pred depending on position.
struct SNode;
using SPtr = std::shared_ptr<SNode>;

struct SNode {
  enum class K { Col, Int, Str, Null, Bool, Neg, Arith, Cmp, And, Or, Not, IsNull, In,
                 InQuery, Between, Case, Func, Tuple };
  K k;
  int line = 0, col = 0;
  std::string qual, name;
  std::int64_t ival = 0;
  bool flag = false;
  bool star = false;
  ArithOp aop = ArithOp::Add;
  CmpOp cop = CmpOp::Eq;
  std::vector<SPtr> kids;
  std::vector<std::pair<SPtr, SPtr>> whens;
  SPtr operand, else_e;
  QueryPtr sub;
};

class SqlParser {
public:
  SqlParser(std::string_view src, StringTable& strings)
    : ts_(detail::tokenize(src)), strings_(strings) {}

  QueryPtr parse() {
    QueryPtr q = query_expr();
    ts_.accept_sym(";");
    if (!ts_.at_end()) ts_.fail("unexpected trailing input");
    return q;
  }

private:
  SPtr node(SNode::K k) {
    auto n = std::make_shared<SNode>();
    n->k = k;
    n->line = ts_.peek().line;
    n->col = ts_.peek().col;
    return n;
  }

  std::string where() const {
    return std::to_string(ts_.peek().line) + ":" + std::to_string(ts_.peek().col);
  }

  [[noreturn]] void unsupported(const std::string& feature) const {
    throw Unsupported(feature, where());
  }

  bool starts_query(std::size_t ahead) const {
    return ts_.is_kw("SELECT", ahead) || ts_.is_kw("WITH", ahead);
  }

  bool is_alias_token() const {
    const Token& t = ts_.peek();
    if (t.kind == Token::Quoted) return true;
    return t.kind == Token::Ident && !kReserved.count(detail::upper(t.text));
  }

  // WITH / set operations / ORDER BY.
  QueryPtr query_expr() {
    if (ts_.accept_kw("WITH")) {
      if (ts_.accept_kw("RECURSIVE")) unsupported("recursive-cte");
      std::vector<std::pair<std::string, QueryPtr>> defs;
      do {
        std::string name = ts_.expect_ident();
        if (ts_.is_sym("(")) unsupported("cte-column-list");
        ts_.expect_kw("AS");
        ts_.expect_sym("(");
        QueryPtr def = query_expr();
        ts_.expect_sym(")");
        defs.emplace_back(name, def);
      } while (ts_.accept_sym(","));
      QueryPtr body = query_expr();
      QueryPtr order_input = body;
      const auto* ob = std::get_if<Query::OrderBy>(&body->node);
      if (ob) order_input = ob->input;
      for (auto it = defs.rbegin(); it != defs.rend(); ++it)
        order_input = make_query(Query::With{{*it}, order_input});
      if (ob) return make_query(Query::OrderBy{order_input, ob->keys, ob->ascending});
      return order_input;
    }
    QueryPtr q = set_expr();
    if (ts_.accept_kw("ORDER")) {
      ts_.expect_kw("BY");
      std::vector<ExprPtr> keys;
      int dir = 0;
      do {
        keys.push_back(to_expr(parse_or()));
        int d = 1;
        if (ts_.accept_kw("DESC")) d = -1;
        else ts_.accept_kw("ASC");
        if (ts_.is_kw("NULLS")) unsupported("nulls-first-last");
        if (dir != 0 && d != dir) unsupported("mixed-order-directions");
        dir = d;
      } while (ts_.accept_sym(","));
      q = make_query(Query::OrderBy{q, keys, dir > 0});
    }
    if (ts_.is_kw("LIMIT") || ts_.is_kw("OFFSET") || ts_.is_kw("FETCH")) unsupported("limit");
    return q;
  }

  QueryPtr set_expr() {
    QueryPtr lhs = set_term();
    for (;;) {
      bool is_union = ts_.is_kw("UNION");
      bool is_except = ts_.is_kw("EXCEPT") || ts_.is_kw("MINUS");
      if (!is_union && !is_except) return lhs;
      ts_.take();
      bool all = ts_.accept_kw("ALL");
      if (!all) ts_.accept_kw("DISTINCT");
      QueryPtr rhs = set_term();
      SetOpKind k = is_union ? (all ? SetOpKind::UnionAll : SetOpKind::Union)
                             : (all ? SetOpKind::ExceptAll : SetOpKind::Except);
      lhs = make_query(Query::SetOp{k, lhs, rhs});
    }
  }

  QueryPtr set_term() {
    QueryPtr lhs = set_primary();
    while (ts_.accept_kw("INTERSECT")) {
      bool all = ts_.accept_kw("ALL");
      if (!all) ts_.accept_kw("DISTINCT");
      QueryPtr rhs = set_primary();
      lhs = make_query(Query::SetOp{all ? SetOpKind::IntersectAll : SetOpKind::Intersect, lhs, rhs});
    }
    return lhs;
  }

  QueryPtr set_primary() {
    if (ts_.is_sym("(")) {
      ts_.take();
      QueryPtr q = query_expr();
      ts_.expect_sym(")");
      return q;
    }
    return select_core();
  }

  QueryPtr select_core() {
    ts_.expect_kw("SELECT");
    bool distinct = ts_.accept_kw("DISTINCT");
    if (!distinct) ts_.accept_kw("ALL");
    std::vector<ProjectItem> items;
    do {
      items.push_back(select_item());
    } while (ts_.accept_sym(","));
    if (!ts_.accept_kw("FROM")) unsupported("select-without-from");
    QueryPtr q = from_list();
    if (ts_.accept_kw("WHERE")) q = make_query(Query::Filter{q, to_pred(parse_or())});
    std::vector<ExprPtr> keys;
    bool grouped = false;
    if (ts_.accept_kw("GROUP")) {
      ts_.expect_kw("BY");
      grouped = true;
      do {
        keys.push_back(to_expr(parse_or()));
      } while (ts_.accept_sym(","));
      if (ts_.is_kw("WITH")) unsupported("rollup");
    }
    PredPtr having;
    if (ts_.accept_kw("HAVING")) having = to_pred(parse_or());
    if (grouped) {
      q = make_query(Query::GroupBy{q, keys, items, having ? having : pred_true()});
    } else {
      if (having) unsupported("having-without-group-by");
      q = make_query(Query::Project{q, items});
    }
    if (distinct) q = make_query(Query::Distinct{q});
    return q;
  }

  ProjectItem select_item() {
    if (ts_.accept_sym("*")) return ProjectItem{make_expr(Expr::Star{""}), "", ""};
    if ((ts_.peek().kind == Token::Ident || ts_.peek().kind == Token::Quoted) && ts_.is_sym(".", 1) &&
        ts_.is_sym("*", 2)) {
      std::string q = ts_.take().text;
      ts_.take();
      ts_.take();
      return ProjectItem{make_expr(Expr::Star{q}), "", ""};
    }
    ExprPtr e = to_expr(parse_or());
    std::string alias;
    if (ts_.accept_kw("AS")) {
      alias = ts_.peek().kind == Token::Str ? ts_.take().text : ts_.expect_ident();
    } else if (is_alias_token()) {
      alias = ts_.take().text;
    }
    return ProjectItem{e, "", alias};
  }

  QueryPtr from_list() {
    QueryPtr q = from_item();
    while (ts_.accept_sym(",")) q = make_query(Query::Join{JoinKind::Product, q, from_item(), nullptr});
    return q;
  }

  QueryPtr from_item() {
    QueryPtr lhs = table_primary();
    for (;;) {
      if (ts_.is_kw("NATURAL")) unsupported("natural-join");
      JoinKind kind;
      if (ts_.accept_kw("CROSS")) {
        ts_.expect_kw("JOIN");
        lhs = make_query(Query::Join{JoinKind::Product, lhs, table_primary(), nullptr});
        continue;
      } else if (ts_.accept_kw("JOIN")) {
        kind = JoinKind::Inner;
      } else if (ts_.accept_kw("INNER")) {
        ts_.expect_kw("JOIN");
        kind = JoinKind::Inner;
      } else if (ts_.is_kw("LEFT") || ts_.is_kw("RIGHT") || ts_.is_kw("FULL")) {
        std::string w = detail::upper(ts_.take().text);
        ts_.accept_kw("OUTER");
        ts_.expect_kw("JOIN");
        kind = w == "LEFT" ? JoinKind::Left : w == "RIGHT" ? JoinKind::Right : JoinKind::Full;
      } else {
        return lhs;
      }
      QueryPtr rhs = table_primary();
      if (ts_.is_kw("USING")) unsupported("join-using");
      if (ts_.accept_kw("ON")) {
        lhs = make_query(Query::Join{kind, lhs, rhs, to_pred(parse_or())});
      } else if (kind == JoinKind::Inner) {
        lhs = make_query(Query::Join{JoinKind::Product, lhs, rhs, nullptr});
      } else {
        ts_.fail("expected ON");
      }
    }
  }

  QueryPtr table_primary() {
    if (ts_.is_sym("(")) {
      std::size_t k = 1;
      while (ts_.is_sym("(", k)) ++k;
      if (starts_query(k)) {
        ts_.take();
        QueryPtr q = query_expr();
        ts_.expect_sym(")");
        return with_alias(q);
      }
      ts_.take();
      QueryPtr q = from_item();
      ts_.expect_sym(")");
      return q;
    }
    std::string name = ts_.expect_ident();
    if (ts_.is_sym(".")) unsupported("schema-qualified-table");
    QueryPtr q = make_query(Query::Relation{name});
    return with_alias(q);
  }

  QueryPtr with_alias(QueryPtr q) {
    std::string alias;
    if (ts_.accept_kw("AS")) alias = ts_.expect_ident();
    else if (is_alias_token()) alias = ts_.take().text;
    if (!alias.empty() && ts_.is_sym("(")) unsupported("derived-column-list");
    return alias.empty() ? q : make_query(Query::Rename{q, alias});
  }

  // Expression grammar.
  SPtr parse_or() {
    SPtr lhs = parse_and();
    while (ts_.is_kw("OR")) {
      auto n = node(SNode::K::Or);
      ts_.take();
      n->kids = {lhs, parse_and()};
      lhs = n;
    }
    return lhs;
  }

  SPtr parse_and() {
    SPtr lhs = parse_not();
    while (ts_.is_kw("AND")) {
      auto n = node(SNode::K::And);
      ts_.take();
      n->kids = {lhs, parse_not()};
      lhs = n;
    }
    return lhs;
  }

  SPtr parse_not() {
    if (ts_.is_kw("NOT") && !ts_.is_kw("EXISTS", 1)) {
      auto n = node(SNode::K::Not);
      ts_.take();
      n->kids = {parse_not()};
      return n;
    }
    return parse_predicate();
  }

  static bool cmp_op(const Token& t, CmpOp& op) {
    if (t.kind != Token::Sym) return false;
    if (t.text == "=" || t.text == "==") op = CmpOp::Eq;
    else if (t.text == "<>" || t.text == "!=") op = CmpOp::Ne;
    else if (t.text == "<") op = CmpOp::Lt;
    else if (t.text == "<=") op = CmpOp::Le;
    else if (t.text == ">") op = CmpOp::Gt;
    else if (t.text == ">=") op = CmpOp::Ge;
    else return false;
    return true;
  }

  SPtr parse_predicate() {
    SPtr lhs = parse_additive();
    for (;;) {
      CmpOp op;
      if (cmp_op(ts_.peek(), op)) {
        auto n = node(SNode::K::Cmp);
        ts_.take();
        if (ts_.is_kw("ANY") || ts_.is_kw("ALL") || ts_.is_kw("SOME")) unsupported("quantified-comparison");
        n->cop = op;
        n->kids = {lhs, parse_additive()};
        lhs = n;
        continue;
      }
      if (ts_.is_kw("IS")) {
        auto n = node(SNode::K::IsNull);
        ts_.take();
        n->flag = ts_.accept_kw("NOT");
        if (!ts_.accept_kw("NULL")) unsupported("is-truth-value");
        n->kids = {lhs};
        lhs = n;
        continue;
      }
      bool negated = false;
      if (ts_.is_kw("NOT") && (ts_.is_kw("IN", 1) || ts_.is_kw("BETWEEN", 1) || ts_.is_kw("LIKE", 1))) {
        ts_.take();
        negated = true;
      }
      if (ts_.is_kw("LIKE") || ts_.is_kw("REGEXP")) unsupported("like");
      if (ts_.is_kw("IN")) {
        ts_.take();
        ts_.expect_sym("(");
        SPtr n;
        if (starts_query(0)) {
          n = node(SNode::K::InQuery);
          n->sub = query_expr();
        } else {
          n = node(SNode::K::In);
          do {
            n->kids.push_back(parse_or());
          } while (ts_.accept_sym(","));
        }
        ts_.expect_sym(")");
        n->operand = lhs;
        n->flag = negated;
        lhs = n;
        continue;
      }
      if (ts_.is_kw("BETWEEN")) {
        auto n = node(SNode::K::Between);
        ts_.take();
        SPtr lo = parse_additive();
        ts_.expect_kw("AND");
        SPtr hi = parse_additive();
        n->kids = {lhs, lo, hi};
        n->flag = negated;
        lhs = n;
        continue;
      }
      if (negated) ts_.fail("expected IN, BETWEEN or LIKE");
      return lhs;
    }
  }

  SPtr parse_additive() {
    SPtr lhs = parse_mul();
    while (ts_.is_sym("+") || ts_.is_sym("-")) {
      auto n = node(SNode::K::Arith);
      n->aop = ts_.take().text == "+" ? ArithOp::Add : ArithOp::Sub;
      n->kids = {lhs, parse_mul()};
      lhs = n;
    }
    return lhs;
  }

  SPtr parse_mul() {
    SPtr lhs = parse_unary();
    for (;;) {
      ArithOp op;
      if (ts_.is_sym("*")) op = ArithOp::Mul;
      else if (ts_.is_sym("/") || ts_.is_kw("DIV")) op = ArithOp::Div;
      else if (ts_.is_sym("%") || ts_.is_kw("MOD")) op = ArithOp::Mod;
      else return lhs;
      auto n = node(SNode::K::Arith);
      ts_.take();
      n->aop = op;
      n->kids = {lhs, parse_unary()};
      lhs = n;
    }
  }

  SPtr parse_unary() {
    if (ts_.is_sym("-")) {
      auto n = node(SNode::K::Neg);
      ts_.take();
      SPtr arg = parse_unary();
      if (arg->k == SNode::K::Int) {
        arg->ival = -arg->ival;
        return arg;
      }
      n->kids = {arg};
      return n;
    }
    if (ts_.accept_sym("+")) return parse_unary();
    return parse_primary();
  }

  SPtr parse_primary() {
    const Token& t = ts_.peek();
    if (t.kind == Token::Int) {
      auto n = node(SNode::K::Int);
      try {
        n->ival = std::stoll(ts_.take().text);
      } catch (const std::out_of_range&) {
        throw ParseError("integer literal out of range", n->line, n->col);
      }
      return n;
    }
    if (t.kind == Token::Str) {
      auto n = node(SNode::K::Str);
      n->name = ts_.take().text;
      return n;
    }
    if (t.kind == Token::Sym && t.text == "(") {
      if (starts_query(1)) unsupported("scalar-subquery");
      auto n = node(SNode::K::Tuple);
      ts_.take();
      do {
        n->kids.push_back(parse_or());
      } while (ts_.accept_sym(","));
      ts_.expect_sym(")");
      return n->kids.size() == 1 ? n->kids[0] : n;
    }
    if (t.kind == Token::Quoted) return column();
    if (t.kind != Token::Ident) ts_.fail("expected expression");
    std::string up = detail::upper(t.text);
    if (up == "NULL") { auto n = node(SNode::K::Null); ts_.take(); return n; }
    if (up == "TRUE" || up == "FALSE") {
      auto n = node(SNode::K::Bool);
      ts_.take();
      n->flag = up == "TRUE";
      return n;
    }
    if (up == "EXISTS") unsupported("exists");
    if (up == "CASE") return parse_case();
    if (up == "INTERVAL") unsupported("interval");
    if (ts_.is_sym("(", 1)) {
      if (kReserved.count(up) && up != "LEFT" && up != "RIGHT") ts_.fail("unexpected keyword");
      auto n = node(SNode::K::Func);
      n->name = up;
      ts_.take();
      ts_.take();
      if (ts_.accept_sym("*")) {
        n->star = true;
      } else if (!ts_.is_sym(")")) {
        if (ts_.accept_kw("DISTINCT")) n->flag = true;
        do {
          n->kids.push_back(parse_or());
        } while (ts_.accept_sym(","));
      }
      ts_.expect_sym(")");
      if (ts_.is_kw("OVER")) unsupported("window-function");
      return n;
    }
    if (kReserved.count(up)) ts_.fail("unexpected keyword");
    return column();
  }

  SPtr column() {
    auto n = node(SNode::K::Col);
    std::string first = ts_.take().text;
    if (ts_.accept_sym(".")) {
      n->qual = first;
      n->name = ts_.expect_ident();
    } else {
      n->name = first;
    }
    return n;
  }

  SPtr parse_case() {
    auto n = node(SNode::K::Case);
    ts_.expect_kw("CASE");
    if (!ts_.is_kw("WHEN")) n->operand = parse_or();
    while (ts_.accept_kw("WHEN")) {
      SPtr c = parse_or();
      ts_.expect_kw("THEN");
      n->whens.emplace_back(c, parse_or());
    }
    if (n->whens.empty()) ts_.fail("expected WHEN");
    if (ts_.accept_kw("ELSE")) n->else_e = parse_or();
    ts_.expect_kw("END");
    return n;
  }

  // Conversion into the algebra.
  std::string loc(const SNode& n) const { return std::to_string(n.line) + ":" + std::to_string(n.col); }

  bool is_pred_node(const SNode& n) const {
    switch (n.k) {
    case SNode::K::Cmp: case SNode::K::And: case SNode::K::Or: case SNode::K::Not:
    case SNode::K::IsNull: case SNode::K::In: case SNode::K::InQuery: case SNode::K::Between:
      return true;
    default:
      return false;
    }
  }

  std::vector<SPtr> components(const SPtr& n) {
    if (n->k == SNode::K::Tuple) return n->kids;
    return {n};
  }

  PredPtr tuple_cmp(CmpOp op, const SNode& at, const std::vector<SPtr>& l, const std::vector<SPtr>& r) {
    if (l.size() != r.size()) throw Unsupported("row comparison arity", loc(at), true);
    if (l.size() > 1 && op != CmpOp::Eq && op != CmpOp::Ne) throw Unsupported("ordered row comparison", loc(at));
    PredPtr acc;
    for (std::size_t i = 0; i < l.size(); ++i) {
      PredPtr c = make_pred(Pred::Cmp{op == CmpOp::Ne && l.size() > 1 ? CmpOp::Eq : op, to_expr(l[i]), to_expr(r[i])});
      acc = acc ? pred_and(acc, c) : c;
    }
    return op == CmpOp::Ne && l.size() > 1 ? pred_not(acc) : acc;
  }

  std::optional<Value> constant(const SNode& n) {
    switch (n.k) {
    case SNode::K::Int: return Value::integer(n.ival);
    case SNode::K::Str: return Value::integer(strings_.intern(n.name));
    case SNode::K::Null: return Value::null();
    case SNode::K::Bool: return Value::boolean(n.flag);
    default: return std::nullopt;
    }
  }

  PredPtr to_pred(const SPtr& n) {
    switch (n->k) {
    case SNode::K::And: return pred_and(to_pred(n->kids[0]), to_pred(n->kids[1]));
    case SNode::K::Or: return pred_or(to_pred(n->kids[0]), to_pred(n->kids[1]));
    case SNode::K::Not: return pred_not(to_pred(n->kids[0]));
    case SNode::K::Cmp: return tuple_cmp(n->cop, *n, components(n->kids[0]), components(n->kids[1]));
    case SNode::K::IsNull: {
      PredPtr p = make_pred(Pred::IsNull{to_expr(n->kids[0])});
      return n->flag ? pred_not(p) : p;
    }
    case SNode::K::Between: {
      PredPtr p = pred_and(make_pred(Pred::Cmp{CmpOp::Ge, to_expr(n->kids[0]), to_expr(n->kids[1])}),
                           make_pred(Pred::Cmp{CmpOp::Le, to_expr(n->kids[0]), to_expr(n->kids[2])}));
      return n->flag ? pred_not(p) : p;
    }
    case SNode::K::InQuery: {
      std::vector<ExprPtr> lhs;
      for (const auto& c : components(n->operand)) lhs.push_back(to_expr(c));
      PredPtr p = make_pred(Pred::InQuery{lhs, n->sub});
      return n->flag ? pred_not(p) : p;
    }
    case SNode::K::In: {
      auto lhs_nodes = components(n->operand);
      std::vector<ExprPtr> lhs;
      for (const auto& c : lhs_nodes) lhs.push_back(to_expr(c));
      std::vector<std::vector<Value>> rows;
      bool all_const = true;
      for (const auto& item : n->kids) {
        std::vector<Value> row;
        for (const auto& c : components(item)) {
          auto v = constant(*c);
          if (!v) { all_const = false; break; }
          row.push_back(*v);
        }
        if (!all_const) break;
        if (row.size() != lhs.size()) throw Unsupported("IN list arity", loc(*n), true);
        rows.push_back(std::move(row));
      }
      PredPtr p;
      if (all_const) {
        p = make_pred(Pred::InValues{lhs, rows});
      } else {
        for (const auto& item : n->kids) {
          PredPtr c = tuple_cmp(CmpOp::Eq, *n, lhs_nodes, components(item));
          p = p ? pred_or(p, c) : c;
        }
      }
      return n->flag ? pred_not(p) : p;
    }
    case SNode::K::Bool: return make_pred(Pred::Const{n->flag});
    case SNode::K::Null: return make_pred(Pred::Cmp{CmpOp::Eq, lit(Value::null()), lit(Value::null())});
    default:
      // Truthiness of a non-boolean expression: non-zero.
      return make_pred(Pred::Cmp{CmpOp::Ne, to_expr(n), lit(Value::integer(0))});
    }
  }

  ExprPtr to_expr(const SPtr& n) {
    if (auto v = constant(*n)) return lit(*v);
    if (is_pred_node(*n)) return make_expr(Expr::Cast{to_pred(n)});
    switch (n->k) {
    case SNode::K::Col: return col(n->qual, n->name);
    case SNode::K::Neg:
      return make_expr(Expr::Arith{ArithOp::Sub, lit(Value::integer(0)), to_expr(n->kids[0])});
    case SNode::K::Arith:
      return make_expr(Expr::Arith{n->aop, to_expr(n->kids[0]), to_expr(n->kids[1])});
    case SNode::K::Case: {
      std::vector<std::pair<PredPtr, ExprPtr>> whens;
      for (const auto& [c, v] : n->whens) {
        PredPtr p = n->operand ? tuple_cmp(CmpOp::Eq, *n, {n->operand}, {c}) : to_pred(c);
        whens.emplace_back(p, to_expr(v));
      }
      ExprPtr e = n->else_e ? to_expr(n->else_e) : lit(Value::null());
      return make_expr(Expr::Case{whens, e});
    }
    case SNode::K::Func: return function(*n);
    case SNode::K::Tuple: throw Unsupported("row value in expression", loc(*n));
    default: throw Unsupported("expression", loc(*n));
    }
  }

  ExprPtr function(const SNode& n) {
    auto arity = [&](std::size_t k) {
      if (n.star || n.kids.size() != k)
        throw Unsupported("wrong argument count for " + n.name, loc(n), true);
    };
    static const std::pair<const char*, AggFn> aggs[] = {
        {"COUNT", AggFn::Count}, {"SUM", AggFn::Sum}, {"AVG", AggFn::Avg},
        {"MIN", AggFn::Min}, {"MAX", AggFn::Max}};
    for (const auto& [name, fn] : aggs) {
      if (n.name != name) continue;
      if (n.flag) throw Unsupported("aggregate-distinct", loc(n));
      if (n.star) {
        if (fn != AggFn::Count) throw Unsupported(n.name + "(*)", loc(n), true);
        return make_expr(Expr::Agg{fn, lit(Value::integer(1))});
      }
      arity(1);
      return make_expr(Expr::Agg{fn, to_expr(n.kids[0])});
    }
    if (n.name == "IF") {
      arity(3);
      return make_expr(Expr::Ite{to_pred(n.kids[0]), to_expr(n.kids[1]), to_expr(n.kids[2])});
    }
    if (n.name == "IFNULL" || n.name == "COALESCE" || n.name == "NVL") {
      if (n.star || n.kids.empty()) arity(2);
      ExprPtr e = to_expr(n.kids.back());
      for (std::size_t i = n.kids.size() - 1; i-- > 0;) {
        ExprPtr a = to_expr(n.kids[i]);
        e = make_expr(Expr::Case{{{pred_not(make_pred(Pred::IsNull{a})), a}}, e});
      }
      return e;
    }
    if (n.name == "NULLIF") {
      arity(2);
      ExprPtr a = to_expr(n.kids[0]);
      PredPtr same = make_pred(Pred::Cmp{CmpOp::Eq, a, to_expr(n.kids[1])});
      return make_expr(Expr::Case{{{same, lit(Value::null())}}, a});
    }
    if (n.name == "ABS") {
      arity(1);
      ExprPtr a = to_expr(n.kids[0]);
      PredPtr negp = make_pred(Pred::Cmp{CmpOp::Lt, a, lit(Value::integer(0))});
      return make_expr(Expr::Case{{{negp, make_expr(Expr::Arith{ArithOp::Sub, lit(Value::integer(0)), a})}}, a});
    }
    throw Unsupported("function " + n.name, loc(n));
  }

  TokenStream ts_;
  StringTable& strings_;
};

} // namespace

QueryPtr parse_sql(std::string_view sql, StringTable& strings) {
  return SqlParser(sql, strings).parse();
}

} // namespace sqlbound
