#include "lexer.hpp"
#include "sqlbound/errors.hpp"
#include "sqlbound/frontend.hpp"
#include "sqlbound/inference.hpp"

namespace sqlbound {

using detail::iequals;

namespace {

AttrList requalify(const AttrList& attrs, const std::string& q) {
  AttrList out = attrs;
  for (auto& a : out) a.qualifier = q;
  return out;
}

bool has_id(const AttrList& attrs, const Attribute& a) {
  for (const auto& b : attrs)
    if (iequals(b.qualifier, a.qualifier) && iequals(b.name, a.name)) return true;
  return false;
}

class Resolver {
public:
  explicit Resolver(const Schema& schema) : schema_(schema) {}

  std::pair<QueryPtr, AttrList> query(const QueryPtr& q) {
    return std::visit([&](const auto& n) { return node(n); }, q->node);
  }

private:
  std::pair<QueryPtr, AttrList> node(const Query::Relation& n) {
    for (auto it = ctes_.rbegin(); it != ctes_.rend(); ++it) {
      if (iequals(it->first, n.name))
        return {make_query(Query::Relation{it->first}), requalify(it->second, it->first)};
    }
    const RelationSchema* r = schema_.find(n.name);
    if (!r) throw ResolveError("unknown relation " + n.name);
    AttrList attrs;
    for (const auto& a : r->attrs) attrs.push_back(Attribute{r->name, a.name, a.type});
    return {make_query(Query::Relation{r->name}), attrs};
  }

  std::pair<QueryPtr, AttrList> node(const Query::Project& n) {
    auto [input, in] = query(n.input);
    auto [items, out] = project_items(n.items, in);
    return {make_query(Query::Project{input, items}), out};
  }

  std::pair<QueryPtr, AttrList> node(const Query::Filter& n) {
    auto [input, in] = query(n.input);
    return {make_query(Query::Filter{input, pred(n.pred, in)}), in};
  }

  std::pair<QueryPtr, AttrList> node(const Query::Rename& n) {
    auto [input, in] = query(n.input);
    return {make_query(Query::Rename{input, n.alias}), requalify(in, n.alias)};
  }

  std::pair<QueryPtr, AttrList> node(const Query::SetOp& n) {
    auto [l, la] = query(n.lhs);
    auto [r, ra] = query(n.rhs);
    if (la.size() != ra.size())
      throw ResolveError("set operation operands have different arity (" + std::to_string(la.size()) +
                         " vs " + std::to_string(ra.size()) + ")");
    return {make_query(Query::SetOp{n.kind, l, r}), la};
  }

  std::pair<QueryPtr, AttrList> node(const Query::Distinct& n) {
    auto [input, in] = query(n.input);
    return {make_query(Query::Distinct{input}), in};
  }

  std::pair<QueryPtr, AttrList> node(const Query::Join& n) {
    auto [l, la] = query(n.lhs);
    auto [r, ra] = query(n.rhs);
    AttrList attrs = la;
    for (const auto& a : ra) {
      if (has_id(attrs, a)) throw ResolveError("duplicate alias: attribute " + a.id() + " appears twice");
      attrs.push_back(a);
    }
    PredPtr p = n.pred ? pred(n.pred, attrs) : nullptr;
    if (!p && n.kind != JoinKind::Product) throw ResolveError("join without condition");
    return {make_query(Query::Join{n.kind, l, r, p}), attrs};
  }

  std::pair<QueryPtr, AttrList> node(const Query::GroupBy& n) {
    auto [input, in] = query(n.input);
    std::vector<ExprPtr> keys;
    for (const auto& k : n.keys) {
      const auto* c = std::get_if<Expr::Const>(&k->node);
      if (c && c->value.kind() == Value::Kind::Int) {
        std::int64_t pos = c->value.as_int();
        if (pos < 1 || pos > static_cast<std::int64_t>(n.items.size()))
          throw ResolveError("GROUP BY position out of range");
        const ExprPtr& e = n.items[pos - 1].expr;
        if (std::holds_alternative<Expr::Star>(e->node)) throw ResolveError("GROUP BY position refers to *");
        keys.push_back(expr(e, in));
      } else {
        keys.push_back(expr(k, in));
      }
    }
    auto [items, out] = project_items(n.items, in);
    PredPtr having = pred(n.having, in);
    return {make_query(Query::GroupBy{input, keys, items, having}), out};
  }

  std::pair<QueryPtr, AttrList> node(const Query::With& n) {
    std::vector<std::pair<std::string, QueryPtr>> defs;
    std::vector<std::pair<std::string, AttrList>> bound;
    for (const auto& [name, def] : n.defs) {
      for (const auto& b : bound)
        if (iequals(b.first, name)) throw ResolveError("duplicate alias " + name + " in WITH");
      auto [q, attrs] = query(def);
      defs.emplace_back(name, q);
      bound.emplace_back(name, attrs);
    }
    std::size_t mark = ctes_.size();
    for (auto& b : bound) ctes_.push_back(b);
    auto [body, attrs] = query(n.body);
    ctes_.resize(mark);
    return {make_query(Query::With{defs, body}), attrs};
  }

  std::pair<QueryPtr, AttrList> node(const Query::OrderBy& n) {
    auto [input, in] = query(n.input);
    std::vector<ExprPtr> keys;
    for (const auto& k : n.keys) {
      const auto* c = std::get_if<Expr::Const>(&k->node);
      if (c && c->value.kind() == Value::Kind::Int) {
        std::int64_t pos = c->value.as_int();
        if (pos < 1 || pos > static_cast<std::int64_t>(in.size()))
          throw ResolveError("ORDER BY position out of range");
        const Attribute& a = in[pos - 1];
        keys.push_back(col(a.qualifier, a.name, static_cast<int>(pos - 1)));
        continue;
      }
      try {
        keys.push_back(expr(k, in));
      } catch (const ResolveError& e) {
        throw Unsupported("order-by-non-output-column", e.what());
      }
    }
    return {make_query(Query::OrderBy{input, keys, n.ascending}), in};
  }

  std::pair<std::vector<ProjectItem>, AttrList> project_items(const std::vector<ProjectItem>& raw,
                                                              const AttrList& in) {
    std::vector<ProjectItem> items;
    AttrList out;
    auto emit = [&](ExprPtr e, Attribute a) {
      std::string base = a.name;
      for (int k = 1; has_id(out, a); ++k) a.name = base + "_" + std::to_string(k);
      out.push_back(a);
      items.push_back(ProjectItem{std::move(e), a.qualifier, a.name});
    };
    for (const auto& it : raw) {
      if (const auto* s = std::get_if<Expr::Star>(&it.expr->node)) {
        bool any = false;
        for (std::size_t i = 0; i < in.size(); ++i) {
          if (!s->qualifier.empty() && !iequals(in[i].qualifier, s->qualifier)) continue;
          any = true;
          emit(col(in[i].qualifier, in[i].name, static_cast<int>(i)), in[i]);
        }
        if (!any) throw ResolveError("unknown relation " + s->qualifier + " in " + s->qualifier + ".*");
        continue;
      }
      ExprPtr e = expr(it.expr, in);
      Attribute a;
      a.type = infer_type(*e, in);
      if (!it.alias.empty()) {
        a.qualifier = it.qualifier;
        a.name = it.alias;
      } else if (const auto* c = std::get_if<Expr::Column>(&e->node)) {
        a.qualifier = in[c->index].qualifier;
        a.name = in[c->index].name;
      } else {
        a.name = derived_name(*e);
      }
      emit(e, a);
    }
    return {items, out};
  }

  int lookup(const Expr::Column& c, const AttrList& in) {
    int found = -1;
    for (std::size_t i = 0; i < in.size(); ++i) {
      if (!iequals(in[i].name, c.name)) continue;
      if (!c.qualifier.empty() && !iequals(in[i].qualifier, c.qualifier)) continue;
      if (found >= 0) throw ResolveError("ambiguous column reference " + display(c));
      found = static_cast<int>(i);
    }
    if (found >= 0) return found;
    for (const AttrList* o : outer_) {
      for (const auto& a : *o) {
        if (iequals(a.name, c.name) && (c.qualifier.empty() || iequals(a.qualifier, c.qualifier)))
          throw Unsupported("correlated-subquery", "reference to " + display(c));
      }
    }
    throw ResolveError("unknown attribute " + display(c));
  }

  static std::string display(const Expr::Column& c) {
    return c.qualifier.empty() ? c.name : c.qualifier + "." + c.name;
  }

  ExprPtr expr(const ExprPtr& e, const AttrList& in) {
    return std::visit([&](const auto& n) -> ExprPtr {
      using T = std::decay_t<decltype(n)>;
      if constexpr (std::is_same_v<T, Expr::Column>) {
        int i = lookup(n, in);
        return col(in[i].qualifier, in[i].name, i);
      } else if constexpr (std::is_same_v<T, Expr::Const>) {
        return e;
      } else if constexpr (std::is_same_v<T, Expr::Arith>) {
        return make_expr(Expr::Arith{n.op, expr(n.lhs, in), expr(n.rhs, in)});
      } else if constexpr (std::is_same_v<T, Expr::Ite>) {
        return make_expr(Expr::Ite{pred(n.cond, in), expr(n.then_e, in), expr(n.else_e, in)});
      } else if constexpr (std::is_same_v<T, Expr::Case>) {
        std::vector<std::pair<PredPtr, ExprPtr>> whens;
        for (const auto& [p, v] : n.whens) whens.emplace_back(pred(p, in), expr(v, in));
        return make_expr(Expr::Case{whens, expr(n.else_e, in)});
      } else if constexpr (std::is_same_v<T, Expr::Cast>) {
        return make_expr(Expr::Cast{pred(n.pred, in)});
      } else if constexpr (std::is_same_v<T, Expr::Agg>) {
        return make_expr(Expr::Agg{n.fn, expr(n.arg, in)});
      } else {
        throw ResolveError("* is only allowed as a select item");
      }
    }, e->node);
  }

  std::vector<ExprPtr> exprs(const std::vector<ExprPtr>& es, const AttrList& in) {
    std::vector<ExprPtr> out;
    for (const auto& e : es) out.push_back(expr(e, in));
    return out;
  }

  PredPtr pred(const PredPtr& p, const AttrList& in) {
    return std::visit([&](const auto& n) -> PredPtr {
      using T = std::decay_t<decltype(n)>;
      if constexpr (std::is_same_v<T, Pred::Const>) {
        return p;
      } else if constexpr (std::is_same_v<T, Pred::Cmp>) {
        return make_pred(Pred::Cmp{n.op, expr(n.lhs, in), expr(n.rhs, in)});
      } else if constexpr (std::is_same_v<T, Pred::IsNull>) {
        return make_pred(Pred::IsNull{expr(n.arg, in)});
      } else if constexpr (std::is_same_v<T, Pred::InValues>) {
        return make_pred(Pred::InValues{exprs(n.lhs, in), n.rows});
      } else if constexpr (std::is_same_v<T, Pred::InQuery>) {
        auto lhs = exprs(n.lhs, in);
        outer_.insert(outer_.begin(), &in);
        std::pair<QueryPtr, AttrList> sub;
        try {
          sub = query(n.query);
        } catch (...) {
          outer_.erase(outer_.begin());
          throw;
        }
        outer_.erase(outer_.begin());
        return make_pred(Pred::InQuery{lhs, sub.first});
      } else if constexpr (std::is_same_v<T, Pred::And>) {
        return pred_and(pred(n.lhs, in), pred(n.rhs, in));
      } else if constexpr (std::is_same_v<T, Pred::Or>) {
        return pred_or(pred(n.lhs, in), pred(n.rhs, in));
      } else {
        return pred_not(pred(n.arg, in));
      }
    }, p->node);
  }

  const Schema& schema_;
  std::vector<std::pair<std::string, AttrList>> ctes_;
  std::vector<const AttrList*> outer_;
};

} // namespace

QueryPtr resolve_names(const QueryPtr& q, const Schema& schema) {
  return Resolver(schema).query(q).first;
}

QueryPtr parse_query(std::string_view text, const Schema& schema, StringTable& strings) {
  QueryPtr raw = looks_like_algebra(text) ? parse_algebra(text, strings) : parse_sql(text, strings);
  QueryPtr q = resolve_names(raw, schema);
  check_well_formed(*q, schema);
  return q;
}

} // namespace sqlbound
