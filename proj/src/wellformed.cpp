#include "lexer.hpp"
#include "sqlbound/errors.hpp"
#include "sqlbound/frontend.hpp"

namespace sqlbound {

namespace {

class Checker {
public:
  explicit Checker(const Schema& schema) : schema_(schema) {}

  std::size_t query(const Query& q, bool top) {
    return std::visit([&](const auto& n) { return node(n, top); }, q.node);
  }

private:
  std::size_t node(const Query::Relation& n, bool) {
    for (auto it = ctes_.rbegin(); it != ctes_.rend(); ++it)
      if (it->first == n.name) return it->second;
    const RelationSchema* r = schema_.find(n.name);
    if (!r) throw ResolveError("unknown relation " + n.name);
    return r->attrs.size();
  }

  std::size_t node(const Query::Project& n, bool) {
    std::size_t in = query(*n.input, false);
    bool agg = has_aggregate(n.items);
    for (const auto& it : n.items) {
      if (agg) grouped(*it.expr, {}, in);
      else plain(*it.expr, in, "aggregate in projection");
    }
    return n.items.size();
  }

  std::size_t node(const Query::Filter& n, bool) {
    std::size_t in = query(*n.input, false);
    plain(*n.pred, in, "aggregate in WHERE");
    return in;
  }

  std::size_t node(const Query::Rename& n, bool) { return query(*n.input, false); }

  std::size_t node(const Query::SetOp& n, bool) {
    std::size_t l = query(*n.lhs, false);
    std::size_t r = query(*n.rhs, false);
    if (l != r) throw ResolveError("set operation operands have different arity");
    return l;
  }

  std::size_t node(const Query::Distinct& n, bool) { return query(*n.input, false); }

  std::size_t node(const Query::Join& n, bool) {
    std::size_t in = query(*n.lhs, false) + query(*n.rhs, false);
    if (n.pred) plain(*n.pred, in, "aggregate in join condition");
    else if (n.kind != JoinKind::Product) throw ResolveError("join without condition");
    return in;
  }

  std::size_t node(const Query::GroupBy& n, bool) {
    std::size_t in = query(*n.input, false);
    if (n.keys.empty()) throw Unsupported("empty GROUP BY list", "", true);
    for (const auto& k : n.keys) plain(*k, in, "aggregate in GROUP BY");
    for (const auto& it : n.items) grouped(*it.expr, n.keys, in);
    grouped(*n.having, n.keys, in);
    return n.items.size();
  }

  std::size_t node(const Query::With& n, bool top) {
    std::vector<std::pair<std::string, std::size_t>> bound;
    for (const auto& [name, def] : n.defs) bound.emplace_back(name, query(*def, false));
    std::size_t mark = ctes_.size();
    for (auto& b : bound) ctes_.push_back(b);
    std::size_t out = query(*n.body, false);
    ctes_.resize(mark);
    (void)top;
    return out;
  }

  std::size_t node(const Query::OrderBy& n, bool top) {
    if (!top) throw Unsupported("order-by-below-top", "ORDER BY must be the outermost operator");
    std::size_t in = query(*n.input, false);
    if (n.keys.empty()) throw ResolveError("empty ORDER BY list");
    for (const auto& k : n.keys) plain(*k, in, "aggregate in ORDER BY");
    return in;
  }

  void column(const Expr::Column& c, std::size_t arity) {
    if (c.index < 0 || static_cast<std::size_t>(c.index) >= arity)
      throw ResolveError("unresolved attribute " + c.name);
  }

  // No aggregate anywhere.
  void plain(const Expr& e, std::size_t arity, const char* what) {
    if (has_aggregate(e)) throw Unsupported(what, "", true);
    walk(e, arity);
  }

  void plain(const Pred& p, std::size_t arity, const char* what) {
    if (has_aggregate(p)) throw Unsupported(what, "", true);
    walk(p, arity);
  }

  void walk(const Expr& e, std::size_t arity) {
    std::visit([&](const auto& n) {
      using T = std::decay_t<decltype(n)>;
      if constexpr (std::is_same_v<T, Expr::Column>) {
        column(n, arity);
      } else if constexpr (std::is_same_v<T, Expr::Arith>) {
        walk(*n.lhs, arity);
        walk(*n.rhs, arity);
      } else if constexpr (std::is_same_v<T, Expr::Ite>) {
        walk(*n.cond, arity);
        walk(*n.then_e, arity);
        walk(*n.else_e, arity);
      } else if constexpr (std::is_same_v<T, Expr::Case>) {
        for (const auto& [p, v] : n.whens) {
          walk(*p, arity);
          walk(*v, arity);
        }
        walk(*n.else_e, arity);
      } else if constexpr (std::is_same_v<T, Expr::Cast>) {
        walk(*n.pred, arity);
      } else if constexpr (std::is_same_v<T, Expr::Agg>) {
        if (has_aggregate(*n.arg)) throw Unsupported("nested aggregate", "", true);
        walk(*n.arg, arity);
      } else if constexpr (std::is_same_v<T, Expr::Star>) {
        throw ResolveError("unexpanded *");
      }
    }, e.node);
  }

  void walk(const Pred& p, std::size_t arity) {
    std::visit([&](const auto& n) {
      using T = std::decay_t<decltype(n)>;
      if constexpr (std::is_same_v<T, Pred::Cmp>) {
        walk(*n.lhs, arity);
        walk(*n.rhs, arity);
      } else if constexpr (std::is_same_v<T, Pred::IsNull>) {
        walk(*n.arg, arity);
      } else if constexpr (std::is_same_v<T, Pred::InValues>) {
        for (const auto& e : n.lhs) walk(*e, arity);
        for (const auto& r : n.rows)
          if (r.size() != n.lhs.size()) throw Unsupported("IN list arity", "", true);
      } else if constexpr (std::is_same_v<T, Pred::InQuery>) {
        for (const auto& e : n.lhs) walk(*e, arity);
        if (query(*n.query, false) != n.lhs.size()) throw Unsupported("IN subquery arity", "", true);
      } else if constexpr (std::is_same_v<T, Pred::And> || std::is_same_v<T, Pred::Or>) {
        walk(*n.lhs, arity);
        walk(*n.rhs, arity);
      } else if constexpr (std::is_same_v<T, Pred::Not>) {
        walk(*n.arg, arity);
      }
    }, p.node);
  }

  // Column references outside aggregates must be grouping expressions.
  void grouped(const Expr& e, const std::vector<ExprPtr>& keys, std::size_t arity) {
    for (const auto& k : keys)
      if (equal(e, *k)) {
        walk(e, arity);
        return;
      }
    std::visit([&](const auto& n) {
      using T = std::decay_t<decltype(n)>;
      if constexpr (std::is_same_v<T, Expr::Column>) {
        throw Unsupported("attribute " + (n.qualifier.empty() ? n.name : n.qualifier + "." + n.name) +
                              " is neither grouped nor aggregated", "", true);
      } else if constexpr (std::is_same_v<T, Expr::Arith>) {
        grouped(*n.lhs, keys, arity);
        grouped(*n.rhs, keys, arity);
      } else if constexpr (std::is_same_v<T, Expr::Ite>) {
        grouped(*n.cond, keys, arity);
        grouped(*n.then_e, keys, arity);
        grouped(*n.else_e, keys, arity);
      } else if constexpr (std::is_same_v<T, Expr::Case>) {
        for (const auto& [p, v] : n.whens) {
          grouped(*p, keys, arity);
          grouped(*v, keys, arity);
        }
        grouped(*n.else_e, keys, arity);
      } else if constexpr (std::is_same_v<T, Expr::Cast>) {
        grouped(*n.pred, keys, arity);
      } else if constexpr (std::is_same_v<T, Expr::Agg>) {
        walk(e, arity);
      } else if constexpr (std::is_same_v<T, Expr::Star>) {
        throw ResolveError("unexpanded *");
      }
    }, e.node);
  }

  void grouped(const Pred& p, const std::vector<ExprPtr>& keys, std::size_t arity) {
    std::visit([&](const auto& n) {
      using T = std::decay_t<decltype(n)>;
      if constexpr (std::is_same_v<T, Pred::Cmp>) {
        grouped(*n.lhs, keys, arity);
        grouped(*n.rhs, keys, arity);
      } else if constexpr (std::is_same_v<T, Pred::IsNull>) {
        grouped(*n.arg, keys, arity);
      } else if constexpr (std::is_same_v<T, Pred::InValues>) {
        for (const auto& e : n.lhs) grouped(*e, keys, arity);
        for (const auto& r : n.rows)
          if (r.size() != n.lhs.size()) throw Unsupported("IN list arity", "", true);
      } else if constexpr (std::is_same_v<T, Pred::InQuery>) {
        for (const auto& e : n.lhs) grouped(*e, keys, arity);
        if (query(*n.query, false) != n.lhs.size()) throw Unsupported("IN subquery arity", "", true);
      } else if constexpr (std::is_same_v<T, Pred::And> || std::is_same_v<T, Pred::Or>) {
        grouped(*n.lhs, keys, arity);
        grouped(*n.rhs, keys, arity);
      } else if constexpr (std::is_same_v<T, Pred::Not>) {
        grouped(*n.arg, keys, arity);
      }
    }, p.node);
  }

  const Schema& schema_;
  std::vector<std::pair<std::string, std::size_t>> ctes_;
};

} // namespace

void check_well_formed(const Query& q, const Schema& schema) {
  Checker(schema).query(q, true);
}

} // namespace sqlbound
