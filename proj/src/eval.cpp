#include "sqlbound/eval.hpp"

#include <algorithm>
#include <numeric>
#include <span>
#include <sstream>

#include "sqlbound/errors.hpp"
#include "sqlbound/inference.hpp"

namespace sqlbound {

namespace {

using Int = __int128;

// Exact rational; den > 0. Only Avg produces den != 1.
struct Num {
  bool null = true;
  bool boolean = false;
  Int num = 0;
  Int den = 1;
};

Num from_value(const Value& v) {
  Num n;
  n.null = v.is_null();
  n.boolean = v.is_bool();
  n.num = v.as_int();
  return n;
}

Int gcd(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Num rational(Int num, Int den) {
  Num n;
  n.null = false;
  Int g = gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  n.num = num;
  n.den = den;
  return n;
}

Int trunc(const Num& n) { return n.num / n.den; }

Value to_value(const Num& n) {
  if (n.null) return Value::null();
  if (n.boolean) return Value::boolean(n.num != 0);
  return Value::integer(static_cast<std::int64_t>(trunc(n)));
}

bool compare(CmpOp op, Int a, Int b) {
  switch (op) {
  case CmpOp::Lt: return a < b;
  case CmpOp::Le: return a <= b;
  case CmpOp::Eq: return a == b;
  case CmpOp::Ne: return a != b;
  case CmpOp::Gt: return a > b;
  case CmpOp::Ge: return a >= b;
  }
  return false;
}

TriBool cmp(CmpOp op, const Num& a, const Num& b) {
  if (a.null || b.null) return TriBool::Null;
  return compare(op, a.num * b.den, b.num * a.den) ? TriBool::True : TriBool::False;
}

using Rows = std::vector<Row>;
using Ctx = std::span<const Row>;

struct Res {
  Rows rows;
  std::size_t arity = 0;
};

class Evaluator {
public:
  Evaluator(const Database& db, const Schema& schema) : db_(db), schema_(schema) {}

  Res eval(const Query& q) {
    return std::visit([&](const auto& n) { return node(n); }, q.node);
  }

  TriBool pred(Ctx xs, const Pred& p) {
    return std::visit([&](const auto& n) -> TriBool {
      using T = std::decay_t<decltype(n)>;
      if constexpr (std::is_same_v<T, Pred::Const>) {
        return n.value ? TriBool::True : TriBool::False;
      } else if constexpr (std::is_same_v<T, Pred::Cmp>) {
        return cmp(n.op, expr(xs, *n.lhs), expr(xs, *n.rhs));
      } else if constexpr (std::is_same_v<T, Pred::IsNull>) {
        return expr(xs, *n.arg).null ? TriBool::True : TriBool::False;
      } else if constexpr (std::is_same_v<T, Pred::InValues>) {
        std::vector<Num> lhs;
        for (const auto& e : n.lhs) lhs.push_back(expr(xs, *e));
        TriBool acc = TriBool::False;
        for (const auto& row : n.rows) acc = tri_or(acc, member(lhs, row));
        return acc;
      } else if constexpr (std::is_same_v<T, Pred::InQuery>) {
        std::vector<Num> lhs;
        for (const auto& e : n.lhs) lhs.push_back(expr(xs, *e));
        TriBool acc = TriBool::False;
        for (const auto& row : eval(*n.query).rows) acc = tri_or(acc, member(lhs, row));
        return acc;
      } else if constexpr (std::is_same_v<T, Pred::And>) {
        return tri_and(pred(xs, *n.lhs), pred(xs, *n.rhs));
      } else if constexpr (std::is_same_v<T, Pred::Or>) {
        return tri_or(pred(xs, *n.lhs), pred(xs, *n.rhs));
      } else {
        return tri_not(pred(xs, *n.arg));
      }
    }, p.node);
  }

  Num expr(Ctx xs, const Expr& e) {
    return std::visit([&](const auto& n) -> Num {
      using T = std::decay_t<decltype(n)>;
      if constexpr (std::is_same_v<T, Expr::Column>) {
        if (xs.empty()) return Num{};
        return from_value(xs.front().at(n.index));
      } else if constexpr (std::is_same_v<T, Expr::Const>) {
        return from_value(n.value);
      } else if constexpr (std::is_same_v<T, Expr::Arith>) {
        return arith(n.op, expr(xs, *n.lhs), expr(xs, *n.rhs));
      } else if constexpr (std::is_same_v<T, Expr::Ite>) {
        return pred(xs, *n.cond) == TriBool::True ? expr(xs, *n.then_e) : expr(xs, *n.else_e);
      } else if constexpr (std::is_same_v<T, Expr::Case>) {
        for (const auto& [p, v] : n.whens)
          if (pred(xs, *p) == TriBool::True) return expr(xs, *v);
        return expr(xs, *n.else_e);
      } else if constexpr (std::is_same_v<T, Expr::Cast>) {
        TriBool t = pred(xs, *n.pred);
        if (t == TriBool::Null) return Num{};
        return from_value(Value::integer(t == TriBool::True ? 1 : 0));
      } else if constexpr (std::is_same_v<T, Expr::Agg>) {
        return aggregate(xs, n.fn, *n.arg);
      } else {
        throw InternalError("unexpanded * in evaluation");
      }
    }, e.node);
  }

  Num aggregate(Ctx xs, AggFn fn, const Expr& arg) {
    std::vector<Int> vals;
    for (const auto& row : xs) {
      Num v = expr(Ctx(&row, 1), arg);
      if (!v.null) vals.push_back(trunc(v));
    }
    if (vals.empty()) return Num{};
    switch (fn) {
    case AggFn::Count: return rational(static_cast<Int>(vals.size()), 1);
    case AggFn::Sum: return rational(std::accumulate(vals.begin(), vals.end(), Int(0)), 1);
    case AggFn::Avg:
      return rational(std::accumulate(vals.begin(), vals.end(), Int(0)), static_cast<Int>(vals.size()));
    case AggFn::Min: return rational(*std::min_element(vals.begin(), vals.end()), 1);
    case AggFn::Max: return rational(*std::max_element(vals.begin(), vals.end()), 1);
    }
    return Num{};
  }

private:
  TriBool member(const std::vector<Num>& lhs, const Row& row) {
    TriBool acc = TriBool::True;
    for (std::size_t k = 0; k < lhs.size(); ++k) acc = tri_and(acc, cmp(CmpOp::Eq, lhs[k], from_value(row[k])));
    return acc;
  }

  Num arith(ArithOp op, const Num& a, const Num& b) {
    if (a.null || b.null) return Num{};
    switch (op) {
    case ArithOp::Add: return rational(a.num * b.den + b.num * a.den, a.den * b.den);
    case ArithOp::Sub: return rational(a.num * b.den - b.num * a.den, a.den * b.den);
    case ArithOp::Mul: return rational(a.num * b.num, a.den * b.den);
    case ArithOp::Div:
    case ArithOp::Mod: {
      Int x = trunc(a), y = trunc(b);
      if (y == 0) throw EvalError(op == ArithOp::Div ? "division by zero" : "modulo by zero");
      return rational(op == ArithOp::Div ? x / y : x % y, 1);
    }
    }
    return Num{};
  }

  Row project(Ctx xs, const std::vector<ProjectItem>& items) {
    Row out;
    out.reserve(items.size());
    for (const auto& it : items) out.push_back(to_value(expr(xs, *it.expr)));
    return out;
  }

  Res node(const Query::Relation& n) {
    for (auto it = ctes_.rbegin(); it != ctes_.rend(); ++it) {
      auto f = it->find(n.name);
      if (f != it->end()) return f->second;
    }
    std::size_t a = schema_.at(n.name).attrs.size();
    auto f = db_.find(n.name);
    if (f == db_.end()) return {{}, a};
    return {f->second, a};
  }

  Res node(const Query::Project& n) {
    Res in = eval(*n.input);
    if (has_aggregate(n.items)) return {{project(in.rows, n.items)}, n.items.size()};
    Rows out;
    out.reserve(in.rows.size());
    for (const auto& r : in.rows) out.push_back(project(Ctx(&r, 1), n.items));
    return {std::move(out), n.items.size()};
  }

  Res node(const Query::Filter& n) {
    Res in = eval(*n.input);
    Rows out;
    for (auto& r : in.rows)
      if (pred(Ctx(&r, 1), *n.pred) == TriBool::True) out.push_back(std::move(r));
    return {std::move(out), in.arity};
  }

  Res node(const Query::Rename& n) { return eval(*n.input); }

  static Rows distinct(const Rows& in) {
    Rows out;
    for (const auto& r : in)
      if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
    return out;
  }

  static Rows except_all(Rows l, const Rows& r) {
    for (const auto& s : r) {
      auto f = std::find(l.begin(), l.end(), s);
      if (f != l.end()) l.erase(f);
    }
    return l;
  }

  Res node(const Query::SetOp& n) {
    Res lr = eval(*n.lhs);
    Rows l = std::move(lr.rows);
    Rows r = eval(*n.rhs).rows;
    auto in_r = [&](const Row& t) { return std::find(r.begin(), r.end(), t) != r.end(); };
    Rows out;
    switch (n.kind) {
    case SetOpKind::UnionAll:
      out = std::move(l);
      out.insert(out.end(), r.begin(), r.end());
      break;
    case SetOpKind::Union:
      l.insert(l.end(), r.begin(), r.end());
      out = distinct(l);
      break;
    case SetOpKind::Intersect:
      for (auto& t : distinct(l))
        if (in_r(t)) out.push_back(t);
      break;
    case SetOpKind::Except:
      for (auto& t : distinct(l))
        if (!in_r(t)) out.push_back(t);
      break;
    case SetOpKind::ExceptAll:
      out = except_all(std::move(l), r);
      break;
    case SetOpKind::IntersectAll:
      out = except_all(l, except_all(l, r));
      break;
    }
    return {std::move(out), lr.arity};
  }

  Res node(const Query::Distinct& n) {
    Res in = eval(*n.input);
    return {distinct(in.rows), in.arity};
  }

  static Row concat(const Row& a, const Row& b) {
    Row out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
  }

  Res node(const Query::Join& n) {
    Res lr = eval(*n.lhs);
    Res rr = eval(*n.rhs);
    const Rows& l = lr.rows;
    const Rows& r = rr.rows;
    Row lnull(lr.arity), rnull(rr.arity);
    auto ok = [&](const Row& t) {
      return !n.pred || pred(Ctx(&t, 1), *n.pred) == TriBool::True;
    };
    Rows out;
    if (n.kind == JoinKind::Right) {
      for (const auto& b : r) {
        bool any = false;
        for (const auto& a : l) {
          Row t = concat(a, b);
          if (ok(t)) {
            out.push_back(std::move(t));
            any = true;
          }
        }
        if (!any) out.push_back(concat(lnull, b));
      }
      return {std::move(out), lr.arity + rr.arity};
    }
    std::vector<bool> matched(r.size(), false);
    for (const auto& a : l) {
      bool any = false;
      for (std::size_t j = 0; j < r.size(); ++j) {
        Row t = concat(a, r[j]);
        if (ok(t)) {
          out.push_back(std::move(t));
          any = true;
          matched[j] = true;
        }
      }
      if (!any && (n.kind == JoinKind::Left || n.kind == JoinKind::Full)) out.push_back(concat(a, rnull));
    }
    if (n.kind == JoinKind::Full)
      for (std::size_t j = 0; j < r.size(); ++j)
        if (!matched[j]) out.push_back(concat(lnull, r[j]));
    return {std::move(out), lr.arity + rr.arity};
  }

  Res node(const Query::GroupBy& n) {
    Rows in = eval(*n.input).rows;
    std::vector<Row> keys;
    std::vector<Rows> groups;
    for (const auto& r : in) {
      Row k;
      for (const auto& e : n.keys) k.push_back(to_value(expr(Ctx(&r, 1), *e)));
      auto f = std::find(keys.begin(), keys.end(), k);
      if (f == keys.end()) {
        keys.push_back(k);
        groups.push_back({r});
      } else {
        groups[f - keys.begin()].push_back(r);
      }
    }
    Rows out;
    for (const auto& g : groups)
      if (pred(g, *n.having) == TriBool::True) out.push_back(project(g, n.items));
    return {std::move(out), n.items.size()};
  }

  Res node(const Query::With& n) {
    std::map<std::string, Res> defs;
    for (const auto& [name, q] : n.defs) defs[name] = eval(*q);
    ctes_.push_back(std::move(defs));
    Res out = eval(*n.body);
    ctes_.pop_back();
    return out;
  }

  Res node(const Query::OrderBy& n) {
    Res r = eval(*n.input);
    const Rows& in = r.rows;
    std::vector<std::vector<Num>> keys;
    for (const auto& row : in) {
      std::vector<Num> k;
      for (const auto& e : n.keys) k.push_back(expr(Ctx(&row, 1), *e));
      keys.push_back(std::move(k));
    }
    // Lexicographic with Null as -infinity: -1, 0, 1.
    auto order = [&](std::size_t a, std::size_t b) {
      for (std::size_t k = 0; k < n.keys.size(); ++k) {
        const Num& x = keys[a][k];
        const Num& y = keys[b][k];
        if (x.null || y.null) {
          if (x.null != y.null) return x.null ? -1 : 1;
          continue;
        }
        Int lv = x.num * y.den, rv = y.num * x.den;
        if (lv != rv) return lv < rv ? -1 : 1;
      }
      return 0;
    };
    // Selection sort: repeatedly move the extreme tuple of the remainder to the output.
    std::vector<std::size_t> rest(in.size());
    std::iota(rest.begin(), rest.end(), 0);
    Rows out;
    while (!rest.empty()) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < rest.size(); ++i) {
        int c = order(rest[i], rest[best]);
        if (n.ascending ? c < 0 : c >= 0) best = i;
      }
      out.push_back(in[rest[best]]);
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return {std::move(out), r.arity};
  }

  const Database& db_;
  const Schema& schema_;
  std::vector<std::map<std::string, Res>> ctes_;
};

} // namespace

std::vector<Row> eval_query(const Database& db, const Schema& schema, const Query& q) {
  return Evaluator(db, schema).eval(q).rows;
}

Relation eval_relation(const Database& db, const Schema& schema, const Query& q) {
  return Relation{infer_attributes(schema, q), eval_query(db, schema, q)};
}

TriBool eval_predicate(const Database& db, const Schema& schema, const std::vector<Row>& xs, const Pred& p) {
  return Evaluator(db, schema).pred(xs, p);
}

Value eval_expression(const Database& db, const Schema& schema, const std::vector<Row>& xs, const Expr& e) {
  return to_value(Evaluator(db, schema).expr(xs, e));
}

Value eval_aggregate(const Database& db, const Schema& schema, const std::vector<Row>& xs, AggFn fn,
                     const Expr& arg) {
  return to_value(Evaluator(db, schema).aggregate(xs, fn, arg));
}

} // namespace sqlbound
