#include "sqlbound/ast.hpp"

namespace sqlbound {

const char* to_string(ArithOp op) {
  switch (op) {
  case ArithOp::Add: return "+";
  case ArithOp::Sub: return "-";
  case ArithOp::Mul: return "*";
  case ArithOp::Div: return "/";
  case ArithOp::Mod: return "%";
  }
  return "?";
}

const char* to_string(AggFn fn) {
  switch (fn) {
  case AggFn::Count: return "count";
  case AggFn::Sum: return "sum";
  case AggFn::Avg: return "avg";
  case AggFn::Min: return "min";
  case AggFn::Max: return "max";
  }
  return "?";
}

const char* to_string(SetOpKind k) {
  switch (k) {
  case SetOpKind::Union: return "union";
  case SetOpKind::Intersect: return "intersect";
  case SetOpKind::Except: return "except";
  case SetOpKind::UnionAll: return "union-all";
  case SetOpKind::IntersectAll: return "intersect-all";
  case SetOpKind::ExceptAll: return "except-all";
  }
  return "?";
}

const char* to_string(JoinKind k) {
  switch (k) {
  case JoinKind::Product: return "product";
  case JoinKind::Inner: return "join";
  case JoinKind::Left: return "left-join";
  case JoinKind::Right: return "right-join";
  case JoinKind::Full: return "full-join";
  }
  return "?";
}

ExprPtr col(std::string qualifier, std::string name, int index) {
  return make_expr(Expr::Column{std::move(qualifier), std::move(name), index});
}

ExprPtr lit(Value v) { return make_expr(Expr::Const{v}); }

PredPtr pred_true() { return make_pred(Pred::Const{true}); }
PredPtr pred_and(PredPtr a, PredPtr b) { return make_pred(Pred::And{std::move(a), std::move(b)}); }
PredPtr pred_or(PredPtr a, PredPtr b) { return make_pred(Pred::Or{std::move(a), std::move(b)}); }
PredPtr pred_not(PredPtr a) { return make_pred(Pred::Not{std::move(a)}); }

bool has_aggregate(const Expr& e) {
  return std::visit([](const auto& n) -> bool {
    using T = std::decay_t<decltype(n)>;
    if constexpr (std::is_same_v<T, Expr::Agg>) {
      return true;
    } else if constexpr (std::is_same_v<T, Expr::Arith>) {
      return has_aggregate(*n.lhs) || has_aggregate(*n.rhs);
    } else if constexpr (std::is_same_v<T, Expr::Ite>) {
      return has_aggregate(*n.cond) || has_aggregate(*n.then_e) || has_aggregate(*n.else_e);
    } else if constexpr (std::is_same_v<T, Expr::Case>) {
      for (const auto& [p, v] : n.whens)
        if (has_aggregate(*p) || has_aggregate(*v)) return true;
      return has_aggregate(*n.else_e);
    } else if constexpr (std::is_same_v<T, Expr::Cast>) {
      return has_aggregate(*n.pred);
    } else {
      return false;
    }
  }, e.node);
}

bool has_aggregate(const Pred& p) {
  return std::visit([](const auto& n) -> bool {
    using T = std::decay_t<decltype(n)>;
    if constexpr (std::is_same_v<T, Pred::Cmp>) {
      return has_aggregate(*n.lhs) || has_aggregate(*n.rhs);
    } else if constexpr (std::is_same_v<T, Pred::IsNull>) {
      return has_aggregate(*n.arg);
    } else if constexpr (std::is_same_v<T, Pred::InValues> || std::is_same_v<T, Pred::InQuery>) {
      for (const auto& e : n.lhs)
        if (has_aggregate(*e)) return true;
      return false;
    } else if constexpr (std::is_same_v<T, Pred::And> || std::is_same_v<T, Pred::Or>) {
      return has_aggregate(*n.lhs) || has_aggregate(*n.rhs);
    } else if constexpr (std::is_same_v<T, Pred::Not>) {
      return has_aggregate(*n.arg);
    } else {
      return false;
    }
  }, p.node);
}

bool has_aggregate(const std::vector<ProjectItem>& items) {
  for (const auto& it : items)
    if (it.expr && has_aggregate(*it.expr)) return true;
  return false;
}

namespace {

template <class P>
bool eq_ptr(const P& a, const P& b) {
  if (!a || !b) return !a && !b;
  return equal(*a, *b);
}

template <class P>
bool eq_vec(const std::vector<P>& a, const std::vector<P>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!eq_ptr(a[i], b[i])) return false;
  return true;
}

bool eq_items(const std::vector<ProjectItem>& a, const std::vector<ProjectItem>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].qualifier != b[i].qualifier || a[i].alias != b[i].alias || !eq_ptr(a[i].expr, b[i].expr))
      return false;
  return true;
}

} // namespace

bool equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit([&](const auto& x) -> bool {
    using T = std::decay_t<decltype(x)>;
    const auto& y = std::get<T>(b.node);
    if constexpr (std::is_same_v<T, Expr::Column>) {
      return x.qualifier == y.qualifier && x.name == y.name && x.index == y.index;
    } else if constexpr (std::is_same_v<T, Expr::Const>) {
      return x.value == y.value && x.value.kind() == y.value.kind();
    } else if constexpr (std::is_same_v<T, Expr::Arith>) {
      return x.op == y.op && eq_ptr(x.lhs, y.lhs) && eq_ptr(x.rhs, y.rhs);
    } else if constexpr (std::is_same_v<T, Expr::Ite>) {
      return eq_ptr(x.cond, y.cond) && eq_ptr(x.then_e, y.then_e) && eq_ptr(x.else_e, y.else_e);
    } else if constexpr (std::is_same_v<T, Expr::Case>) {
      if (x.whens.size() != y.whens.size()) return false;
      for (std::size_t i = 0; i < x.whens.size(); ++i)
        if (!eq_ptr(x.whens[i].first, y.whens[i].first) || !eq_ptr(x.whens[i].second, y.whens[i].second))
          return false;
      return eq_ptr(x.else_e, y.else_e);
    } else if constexpr (std::is_same_v<T, Expr::Cast>) {
      return eq_ptr(x.pred, y.pred);
    } else if constexpr (std::is_same_v<T, Expr::Agg>) {
      return x.fn == y.fn && eq_ptr(x.arg, y.arg);
    } else {
      return x.qualifier == y.qualifier;
    }
  }, a.node);
}

bool equal(const Pred& a, const Pred& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit([&](const auto& x) -> bool {
    using T = std::decay_t<decltype(x)>;
    const auto& y = std::get<T>(b.node);
    if constexpr (std::is_same_v<T, Pred::Const>) {
      return x.value == y.value;
    } else if constexpr (std::is_same_v<T, Pred::Cmp>) {
      return x.op == y.op && eq_ptr(x.lhs, y.lhs) && eq_ptr(x.rhs, y.rhs);
    } else if constexpr (std::is_same_v<T, Pred::IsNull>) {
      return eq_ptr(x.arg, y.arg);
    } else if constexpr (std::is_same_v<T, Pred::InValues>) {
      if (!eq_vec(x.lhs, y.lhs) || x.rows.size() != y.rows.size()) return false;
      for (std::size_t i = 0; i < x.rows.size(); ++i) {
        if (x.rows[i].size() != y.rows[i].size()) return false;
        for (std::size_t k = 0; k < x.rows[i].size(); ++k)
          if (!(x.rows[i][k] == y.rows[i][k]) || x.rows[i][k].kind() != y.rows[i][k].kind())
            return false;
      }
      return true;
    } else if constexpr (std::is_same_v<T, Pred::InQuery>) {
      return eq_vec(x.lhs, y.lhs) && eq_ptr(x.query, y.query);
    } else if constexpr (std::is_same_v<T, Pred::And> || std::is_same_v<T, Pred::Or>) {
      return eq_ptr(x.lhs, y.lhs) && eq_ptr(x.rhs, y.rhs);
    } else {
      return eq_ptr(x.arg, y.arg);
    }
  }, a.node);
}

bool equal(const Query& a, const Query& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit([&](const auto& x) -> bool {
    using T = std::decay_t<decltype(x)>;
    const auto& y = std::get<T>(b.node);
    if constexpr (std::is_same_v<T, Query::Relation>) {
      return x.name == y.name;
    } else if constexpr (std::is_same_v<T, Query::Project>) {
      return eq_ptr(x.input, y.input) && eq_items(x.items, y.items);
    } else if constexpr (std::is_same_v<T, Query::Filter>) {
      return eq_ptr(x.input, y.input) && eq_ptr(x.pred, y.pred);
    } else if constexpr (std::is_same_v<T, Query::Rename>) {
      return x.alias == y.alias && eq_ptr(x.input, y.input);
    } else if constexpr (std::is_same_v<T, Query::SetOp>) {
      return x.kind == y.kind && eq_ptr(x.lhs, y.lhs) && eq_ptr(x.rhs, y.rhs);
    } else if constexpr (std::is_same_v<T, Query::Distinct>) {
      return eq_ptr(x.input, y.input);
    } else if constexpr (std::is_same_v<T, Query::Join>) {
      return x.kind == y.kind && eq_ptr(x.lhs, y.lhs) && eq_ptr(x.rhs, y.rhs) && eq_ptr(x.pred, y.pred);
    } else if constexpr (std::is_same_v<T, Query::GroupBy>) {
      return eq_ptr(x.input, y.input) && eq_vec(x.keys, y.keys) && eq_items(x.items, y.items) &&
             eq_ptr(x.having, y.having);
    } else if constexpr (std::is_same_v<T, Query::With>) {
      if (x.defs.size() != y.defs.size()) return false;
      for (std::size_t i = 0; i < x.defs.size(); ++i)
        if (x.defs[i].first != y.defs[i].first || !eq_ptr(x.defs[i].second, y.defs[i].second))
          return false;
      return eq_ptr(x.body, y.body);
    } else {
      return x.ascending == y.ascending && eq_ptr(x.input, y.input) && eq_vec(x.keys, y.keys);
    }
  }, a.node);
}

std::string derived_name(const Expr& e) {
  return std::visit([](const auto& n) -> std::string {
    using T = std::decay_t<decltype(n)>;
    if constexpr (std::is_same_v<T, Expr::Column>) {
      return n.name;
    } else if constexpr (std::is_same_v<T, Expr::Const>) {
      if (n.value.is_null()) return "null";
      auto v = n.value.to_string();
      if (v[0] == '-') v[0] = 'm';
      return v;
    } else if constexpr (std::is_same_v<T, Expr::Agg>) {
      std::string fn = to_string(n.fn);
      fn[0] = static_cast<char>(fn[0] - 'a' + 'A');
      return fn + "_" + derived_name(*n.arg);
    } else if constexpr (std::is_same_v<T, Expr::Cast>) {
      return "cast";
    } else {
      return "expr";
    }
  }, e.node);
}

} // namespace sqlbound
