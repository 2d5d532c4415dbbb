#include <cctype>
#include <sstream>

#include "lexer.hpp"
#include "sqlbound/errors.hpp"
#include "sqlbound/frontend.hpp"

namespace sqlbound {

namespace {

struct SExp {
  bool atom = true;
  bool quoted = false;
  std::string text;
  std::vector<SExp> list;
  int line = 1, col = 1;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, col); }
  const SExp& at(std::size_t i) const {
    if (atom || i >= list.size()) fail("malformed form");
    return list[i];
  }
  std::string head() const { return atom || list.empty() || !list[0].atom ? "" : list[0].text; }
  bool is(const char* s) const { return atom && !quoted && detail::iequals(text, s); }
};

class Reader {
public:
  explicit Reader(std::string_view src) : src_(src) {}

  SExp read_all() {
    SExp e = read();
    skip();
    if (i_ < src_.size()) throw ParseError("trailing input", line_, col_);
    return e;
  }

private:
  void bump() {
    if (src_[i_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
    ++i_;
  }
  void skip() {
    while (i_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[i_]))) bump();
      else if (src_[i_] == ';') { while (i_ < src_.size() && src_[i_] != '\n') bump(); }
      else break;
    }
  }
  SExp read() {
    skip();
    if (i_ >= src_.size()) throw ParseError("unexpected end of input", line_, col_);
    SExp e;
    e.line = line_;
    e.col = col_;
    char c = src_[i_];
    if (c == '(') {
      e.atom = false;
      bump();
      for (;;) {
        skip();
        if (i_ >= src_.size()) throw ParseError("unbalanced parenthesis", e.line, e.col);
        if (src_[i_] == ')') { bump(); break; }
        e.list.push_back(read());
      }
      return e;
    }
    if (c == ')') throw ParseError("unexpected ')'", line_, col_);
    if (c == '\'') {
      bump();
      e.quoted = true;
      while (i_ < src_.size() && src_[i_] != '\'') { e.text += src_[i_]; bump(); }
      if (i_ >= src_.size()) throw ParseError("unterminated string", e.line, e.col);
      bump();
      return e;
    }
    while (i_ < src_.size() && !std::isspace(static_cast<unsigned char>(src_[i_])) && src_[i_] != '(' &&
           src_[i_] != ')') {
      e.text += src_[i_];
      bump();
    }
    return e;
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;
};

bool is_int(const std::string& s) {
  std::size_t i = s.size() > 1 && s[0] == '-' ? 1 : 0;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

class Builder {
public:
  explicit Builder(StringTable& strings) : strings_(strings) {}

  QueryPtr query(const SExp& e) {
    std::string h = e.head();
    auto arity = [&](std::size_t n) {
      if (e.list.size() != n) e.fail("'" + h + "' expects " + std::to_string(n - 1) + " arguments");
    };
    if (h == "rel") {
      arity(2);
      return make_query(Query::Relation{name(e.at(1))});
    }
    if (h == "project") {
      arity(3);
      return make_query(Query::Project{query(e.at(1)), items(e.at(2))});
    }
    if (h == "filter") {
      arity(3);
      return make_query(Query::Filter{query(e.at(1)), pred(e.at(2))});
    }
    if (h == "rename") {
      arity(3);
      return make_query(Query::Rename{query(e.at(1)), name(e.at(2))});
    }
    static const std::pair<const char*, SetOpKind> setops[] = {
        {"union", SetOpKind::Union}, {"intersect", SetOpKind::Intersect},
        {"except", SetOpKind::Except}, {"union-all", SetOpKind::UnionAll},
        {"intersect-all", SetOpKind::IntersectAll}, {"except-all", SetOpKind::ExceptAll}};
    for (const auto& [n, k] : setops) {
      if (h == n) {
        arity(3);
        return make_query(Query::SetOp{k, query(e.at(1)), query(e.at(2))});
      }
    }
    if (h == "distinct") {
      arity(2);
      return make_query(Query::Distinct{query(e.at(1))});
    }
    if (h == "product") {
      arity(3);
      return make_query(Query::Join{JoinKind::Product, query(e.at(1)), query(e.at(2)), nullptr});
    }
    static const std::pair<const char*, JoinKind> joins[] = {
        {"join", JoinKind::Inner}, {"left-join", JoinKind::Left},
        {"right-join", JoinKind::Right}, {"full-join", JoinKind::Full}};
    for (const auto& [n, k] : joins) {
      if (h == n) {
        arity(4);
        return make_query(Query::Join{k, query(e.at(1)), query(e.at(2)), pred(e.at(3))});
      }
    }
    if (h == "group-by") {
      arity(5);
      return make_query(Query::GroupBy{query(e.at(1)), keys(e.at(2)), items(e.at(3)), pred(e.at(4))});
    }
    if (h == "with") {
      arity(3);
      std::vector<std::pair<std::string, QueryPtr>> defs;
      const SExp& ds = e.at(1);
      if (ds.atom) ds.fail("expected definition list");
      for (const auto& d : ds.list) {
        if (d.atom || d.list.size() != 2) d.fail("expected (name query)");
        defs.emplace_back(name(d.list[0]), query(d.list[1]));
      }
      return make_query(Query::With{defs, query(e.at(2))});
    }
    if (h == "order-by") {
      arity(4);
      const SExp& dir = e.at(3);
      if (!dir.is("asc") && !dir.is("desc")) dir.fail("expected asc or desc");
      return make_query(Query::OrderBy{query(e.at(1)), keys(e.at(2)), dir.is("asc")});
    }
    e.fail("unknown query form '" + h + "'");
  }

private:
  std::string name(const SExp& e) {
    if (!e.atom) e.fail("expected name");
    return e.text;
  }

  std::vector<ExprPtr> keys(const SExp& e) {
    if (e.head() != "keys") e.fail("expected (keys ...)");
    std::vector<ExprPtr> out;
    for (std::size_t i = 1; i < e.list.size(); ++i) out.push_back(expr(e.list[i]));
    return out;
  }

  std::vector<ProjectItem> items(const SExp& e) {
    if (e.head() != "items") e.fail("expected (items ...)");
    std::vector<ProjectItem> out;
    for (std::size_t i = 1; i < e.list.size(); ++i) {
      const SExp& it = e.list[i];
      std::string h = it.head();
      if (h == "as") {
        if (it.list.size() == 3) out.push_back(ProjectItem{expr(it.at(1)), "", name(it.at(2))});
        else if (it.list.size() == 4) out.push_back(ProjectItem{expr(it.at(1)), name(it.at(2)), name(it.at(3))});
        else it.fail("expected (as expr [qualifier] name)");
      } else if (h == "star") {
        std::string q = it.list.size() > 1 ? name(it.at(1)) : "";
        out.push_back(ProjectItem{make_expr(Expr::Star{q}), "", ""});
      } else {
        out.push_back(ProjectItem{expr(it), "", ""});
      }
    }
    return out;
  }

  std::optional<Value> constant(const SExp& e) {
    if (!e.atom) return std::nullopt;
    if (e.quoted) return Value::integer(strings_.intern(e.text));
    if (is_int(e.text)) {
      try {
        return Value::integer(std::stoll(e.text));
      } catch (const std::out_of_range&) {
        e.fail("integer literal out of range");
      }
    }
    if (e.is("null")) return Value::null();
    if (e.is("true")) return Value::boolean(true);
    if (e.is("false")) return Value::boolean(false);
    return std::nullopt;
  }

  ExprPtr expr(const SExp& e) {
    if (e.atom) {
      if (auto v = constant(e)) return lit(*v);
      e.fail("unexpected atom '" + e.text + "'");
    }
    std::string h = e.head();
    if (h == "col") {
      if (e.list.size() == 2) return col("", name(e.at(1)));
      if (e.list.size() == 3) return col(name(e.at(1)), name(e.at(2)));
      e.fail("expected (col [qualifier] name)");
    }
    static const std::pair<const char*, ArithOp> ariths[] = {
        {"+", ArithOp::Add}, {"-", ArithOp::Sub}, {"*", ArithOp::Mul}, {"/", ArithOp::Div},
        {"%", ArithOp::Mod}};
    for (const auto& [n, op] : ariths) {
      if (h == n) {
        if (e.list.size() != 3) e.fail("arithmetic expects 2 arguments");
        return make_expr(Expr::Arith{op, expr(e.at(1)), expr(e.at(2))});
      }
    }
    if (h == "ite") {
      if (e.list.size() != 4) e.fail("ite expects 3 arguments");
      return make_expr(Expr::Ite{pred(e.at(1)), expr(e.at(2)), expr(e.at(3))});
    }
    if (h == "case") {
      if (e.list.size() != 3 || e.at(1).atom) e.fail("expected (case ((pred expr)...) expr)");
      std::vector<std::pair<PredPtr, ExprPtr>> whens;
      for (const auto& w : e.at(1).list) {
        if (w.atom || w.list.size() != 2) w.fail("expected (pred expr)");
        whens.emplace_back(pred(w.list[0]), expr(w.list[1]));
      }
      return make_expr(Expr::Case{whens, expr(e.at(2))});
    }
    if (h == "cast") {
      if (e.list.size() != 2) e.fail("cast expects 1 argument");
      return make_expr(Expr::Cast{pred(e.at(1))});
    }
    static const std::pair<const char*, AggFn> aggs[] = {
        {"count", AggFn::Count}, {"sum", AggFn::Sum}, {"avg", AggFn::Avg},
        {"min", AggFn::Min}, {"max", AggFn::Max}};
    for (const auto& [n, fn] : aggs) {
      if (h == n) {
        if (e.list.size() != 2) e.fail("aggregate expects 1 argument");
        return make_expr(Expr::Agg{fn, expr(e.at(1))});
      }
    }
    e.fail("unknown expression form '" + h + "'");
  }

  std::vector<ExprPtr> expr_list(const SExp& e) {
    if (e.atom) e.fail("expected expression list");
    std::vector<ExprPtr> out;
    for (const auto& x : e.list) out.push_back(expr(x));
    return out;
  }

  PredPtr pred(const SExp& e) {
    if (e.atom) {
      if (e.is("true")) return make_pred(Pred::Const{true});
      if (e.is("false")) return make_pred(Pred::Const{false});
      e.fail("unexpected atom '" + e.text + "' in predicate");
    }
    std::string h = e.head();
    static const std::pair<const char*, CmpOp> cmps[] = {
        {"=", CmpOp::Eq}, {"<>", CmpOp::Ne}, {"<", CmpOp::Lt}, {"<=", CmpOp::Le},
        {">", CmpOp::Gt}, {">=", CmpOp::Ge}};
    for (const auto& [n, op] : cmps) {
      if (h == n) {
        if (e.list.size() != 3) e.fail("comparison expects 2 arguments");
        return make_pred(Pred::Cmp{op, expr(e.at(1)), expr(e.at(2))});
      }
    }
    if (h == "is-null") {
      if (e.list.size() != 2) e.fail("is-null expects 1 argument");
      return make_pred(Pred::IsNull{expr(e.at(1))});
    }
    if (h == "in") {
      if (e.list.size() != 3 || e.at(2).atom) e.fail("expected (in (exprs) ((values)...))");
      std::vector<std::vector<Value>> rows;
      for (const auto& r : e.at(2).list) {
        if (r.atom) r.fail("expected value row");
        std::vector<Value> row;
        for (const auto& v : r.list) {
          auto c = constant(v);
          if (!c) v.fail("expected constant");
          row.push_back(*c);
        }
        rows.push_back(std::move(row));
      }
      return make_pred(Pred::InValues{expr_list(e.at(1)), rows});
    }
    if (h == "in-query") {
      if (e.list.size() != 3) e.fail("expected (in-query (exprs) query)");
      return make_pred(Pred::InQuery{expr_list(e.at(1)), query(e.at(2))});
    }
    if (h == "and" || h == "or") {
      if (e.list.size() < 3) e.fail(h + " expects at least 2 arguments");
      PredPtr acc = pred(e.at(1));
      for (std::size_t i = 2; i < e.list.size(); ++i)
        acc = h == "and" ? pred_and(acc, pred(e.list[i])) : pred_or(acc, pred(e.list[i]));
      return acc;
    }
    if (h == "not") {
      if (e.list.size() != 2) e.fail("not expects 1 argument");
      return pred_not(pred(e.at(1)));
    }
    e.fail("unknown predicate form '" + h + "'");
  }

  StringTable& strings_;
};

void print_value(std::ostream& os, const Value& v) {
  if (v.is_null()) os << "null";
  else if (v.is_bool()) os << (v.as_bool() ? "true" : "false");
  else os << v.as_int();
}

void print_e(std::ostream& os, const Expr& e);
void print_p(std::ostream& os, const Pred& p);
void print_q(std::ostream& os, const Query& q);

void print_items(std::ostream& os, const std::vector<ProjectItem>& items) {
  os << "(items";
  for (const auto& it : items) {
    os << " ";
    if (auto* s = std::get_if<Expr::Star>(&it.expr->node)) {
      os << "(star" << (s->qualifier.empty() ? "" : " " + s->qualifier) << ")";
    } else if (it.alias.empty()) {
      print_e(os, *it.expr);
    } else {
      os << "(as ";
      print_e(os, *it.expr);
      if (!it.qualifier.empty()) os << " " << it.qualifier;
      os << " " << it.alias << ")";
    }
  }
  os << ")";
}

void print_keys(std::ostream& os, const std::vector<ExprPtr>& keys) {
  os << "(keys";
  for (const auto& k : keys) {
    os << " ";
    print_e(os, *k);
  }
  os << ")";
}

void print_e(std::ostream& os, const Expr& e) {
  std::visit([&](const auto& n) {
    using T = std::decay_t<decltype(n)>;
    if constexpr (std::is_same_v<T, Expr::Column>) {
      os << "(col " << (n.qualifier.empty() ? "" : n.qualifier + " ") << n.name << ")";
    } else if constexpr (std::is_same_v<T, Expr::Const>) {
      print_value(os, n.value);
    } else if constexpr (std::is_same_v<T, Expr::Arith>) {
      os << "(" << to_string(n.op) << " ";
      print_e(os, *n.lhs);
      os << " ";
      print_e(os, *n.rhs);
      os << ")";
    } else if constexpr (std::is_same_v<T, Expr::Ite>) {
      os << "(ite ";
      print_p(os, *n.cond);
      os << " ";
      print_e(os, *n.then_e);
      os << " ";
      print_e(os, *n.else_e);
      os << ")";
    } else if constexpr (std::is_same_v<T, Expr::Case>) {
      os << "(case (";
      for (std::size_t i = 0; i < n.whens.size(); ++i) {
        os << (i ? " (" : "(");
        print_p(os, *n.whens[i].first);
        os << " ";
        print_e(os, *n.whens[i].second);
        os << ")";
      }
      os << ") ";
      print_e(os, *n.else_e);
      os << ")";
    } else if constexpr (std::is_same_v<T, Expr::Cast>) {
      os << "(cast ";
      print_p(os, *n.pred);
      os << ")";
    } else if constexpr (std::is_same_v<T, Expr::Agg>) {
      os << "(" << to_string(n.fn) << " ";
      print_e(os, *n.arg);
      os << ")";
    } else {
      os << "(star" << (n.qualifier.empty() ? "" : " " + n.qualifier) << ")";
    }
  }, e.node);
}

void print_exprs(std::ostream& os, const std::vector<ExprPtr>& es) {
  os << "(";
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (i) os << " ";
    print_e(os, *es[i]);
  }
  os << ")";
}

void print_p(std::ostream& os, const Pred& p) {
  std::visit([&](const auto& n) {
    using T = std::decay_t<decltype(n)>;
    if constexpr (std::is_same_v<T, Pred::Const>) {
      os << (n.value ? "true" : "false");
    } else if constexpr (std::is_same_v<T, Pred::Cmp>) {
      os << "(" << to_string(n.op) << " ";
      print_e(os, *n.lhs);
      os << " ";
      print_e(os, *n.rhs);
      os << ")";
    } else if constexpr (std::is_same_v<T, Pred::IsNull>) {
      os << "(is-null ";
      print_e(os, *n.arg);
      os << ")";
    } else if constexpr (std::is_same_v<T, Pred::InValues>) {
      os << "(in ";
      print_exprs(os, n.lhs);
      os << " (";
      for (std::size_t i = 0; i < n.rows.size(); ++i) {
        os << (i ? " (" : "(");
        for (std::size_t k = 0; k < n.rows[i].size(); ++k) {
          if (k) os << " ";
          print_value(os, n.rows[i][k]);
        }
        os << ")";
      }
      os << "))";
    } else if constexpr (std::is_same_v<T, Pred::InQuery>) {
      os << "(in-query ";
      print_exprs(os, n.lhs);
      os << " ";
      print_q(os, *n.query);
      os << ")";
    } else if constexpr (std::is_same_v<T, Pred::And> || std::is_same_v<T, Pred::Or>) {
      os << (std::is_same_v<T, Pred::And> ? "(and " : "(or ");
      print_p(os, *n.lhs);
      os << " ";
      print_p(os, *n.rhs);
      os << ")";
    } else {
      os << "(not ";
      print_p(os, *n.arg);
      os << ")";
    }
  }, p.node);
}

void print_q(std::ostream& os, const Query& q) {
  std::visit([&](const auto& n) {
    using T = std::decay_t<decltype(n)>;
    if constexpr (std::is_same_v<T, Query::Relation>) {
      os << "(rel " << n.name << ")";
    } else if constexpr (std::is_same_v<T, Query::Project>) {
      os << "(project ";
      print_q(os, *n.input);
      os << " ";
      print_items(os, n.items);
      os << ")";
    } else if constexpr (std::is_same_v<T, Query::Filter>) {
      os << "(filter ";
      print_q(os, *n.input);
      os << " ";
      print_p(os, *n.pred);
      os << ")";
    } else if constexpr (std::is_same_v<T, Query::Rename>) {
      os << "(rename ";
      print_q(os, *n.input);
      os << " " << n.alias << ")";
    } else if constexpr (std::is_same_v<T, Query::SetOp>) {
      os << "(" << to_string(n.kind) << " ";
      print_q(os, *n.lhs);
      os << " ";
      print_q(os, *n.rhs);
      os << ")";
    } else if constexpr (std::is_same_v<T, Query::Distinct>) {
      os << "(distinct ";
      print_q(os, *n.input);
      os << ")";
    } else if constexpr (std::is_same_v<T, Query::Join>) {
      os << "(" << to_string(n.kind) << " ";
      print_q(os, *n.lhs);
      os << " ";
      print_q(os, *n.rhs);
      if (n.pred) {
        os << " ";
        print_p(os, *n.pred);
      }
      os << ")";
    } else if constexpr (std::is_same_v<T, Query::GroupBy>) {
      os << "(group-by ";
      print_q(os, *n.input);
      os << " ";
      print_keys(os, n.keys);
      os << " ";
      print_items(os, n.items);
      os << " ";
      print_p(os, *n.having);
      os << ")";
    } else if constexpr (std::is_same_v<T, Query::With>) {
      os << "(with (";
      for (std::size_t i = 0; i < n.defs.size(); ++i) {
        os << (i ? " (" : "(") << n.defs[i].first << " ";
        print_q(os, *n.defs[i].second);
        os << ")";
      }
      os << ") ";
      print_q(os, *n.body);
      os << ")";
    } else {
      os << "(order-by ";
      print_q(os, *n.input);
      os << " ";
      print_keys(os, n.keys);
      os << (n.ascending ? " asc)" : " desc)");
    }
  }, q.node);
}

} // namespace

bool looks_like_algebra(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i >= text.size() || text[i] != '(') return false;
  ++i;
  std::size_t j = i;
  while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '(' && text[j] != ')')
    ++j;
  std::string head(text.substr(i, j - i));
  static const char* heads[] = {"rel", "project", "filter", "rename", "union", "intersect",
                                "except", "union-all", "intersect-all", "except-all", "distinct",
                                "product", "join", "left-join", "right-join", "full-join",
                                "group-by", "with", "order-by"};
  for (const char* h : heads)
    if (head == h) return true;
  return false;
}

QueryPtr parse_algebra(std::string_view text, StringTable& strings) {
  SExp e = Reader(text).read_all();
  return Builder(strings).query(e);
}

std::string print_algebra(const Query& q) {
  std::ostringstream os;
  print_q(os, q);
  return os.str();
}

std::string print_algebra(const Expr& e) {
  std::ostringstream os;
  print_e(os, e);
  return os.str();
}

std::string print_algebra(const Pred& p) {
  std::ostringstream os;
  print_p(os, p);
  return os.str();
}

} // namespace sqlbound
