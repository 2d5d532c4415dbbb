#include "sqlbound/inference.hpp"

#include <algorithm>

#include "sqlbound/errors.hpp"

namespace sqlbound {

namespace {

void pred_subqueries(const Pred& p, std::vector<const Query*>& out);

void expr_subqueries(const Expr& e, std::vector<const Query*>& out) {
  std::visit([&](const auto& n) {
    using T = std::decay_t<decltype(n)>;
    if constexpr (std::is_same_v<T, Expr::Arith>) {
      expr_subqueries(*n.lhs, out);
      expr_subqueries(*n.rhs, out);
    } else if constexpr (std::is_same_v<T, Expr::Ite>) {
      pred_subqueries(*n.cond, out);
      expr_subqueries(*n.then_e, out);
      expr_subqueries(*n.else_e, out);
    } else if constexpr (std::is_same_v<T, Expr::Case>) {
      for (const auto& [p, v] : n.whens) {
        pred_subqueries(*p, out);
        expr_subqueries(*v, out);
      }
      expr_subqueries(*n.else_e, out);
    } else if constexpr (std::is_same_v<T, Expr::Cast>) {
      pred_subqueries(*n.pred, out);
    } else if constexpr (std::is_same_v<T, Expr::Agg>) {
      expr_subqueries(*n.arg, out);
    }
  }, e.node);
}

void pred_subqueries(const Pred& p, std::vector<const Query*>& out) {
  std::visit([&](const auto& n) {
    using T = std::decay_t<decltype(n)>;
    if constexpr (std::is_same_v<T, Pred::Cmp>) {
      expr_subqueries(*n.lhs, out);
      expr_subqueries(*n.rhs, out);
    } else if constexpr (std::is_same_v<T, Pred::IsNull>) {
      expr_subqueries(*n.arg, out);
    } else if constexpr (std::is_same_v<T, Pred::InValues>) {
      for (const auto& e : n.lhs) expr_subqueries(*e, out);
    } else if constexpr (std::is_same_v<T, Pred::InQuery>) {
      for (const auto& e : n.lhs) expr_subqueries(*e, out);
      out.push_back(n.query.get());
    } else if constexpr (std::is_same_v<T, Pred::And> || std::is_same_v<T, Pred::Or>) {
      pred_subqueries(*n.lhs, out);
      pred_subqueries(*n.rhs, out);
    } else if constexpr (std::is_same_v<T, Pred::Not>) {
      pred_subqueries(*n.arg, out);
    }
  }, p.node);
}

void items_subqueries(const std::vector<ProjectItem>& items, std::vector<const Query*>& out) {
  for (const auto& it : items) expr_subqueries(*it.expr, out);
}

AttrList requalify(AttrList attrs, const std::string& q) {
  for (auto& a : attrs) a.qualifier = q;
  return attrs;
}

AttrList item_attrs(const std::vector<ProjectItem>& items, const AttrList& in) {
  AttrList out;
  for (const auto& it : items) out.push_back(Attribute{it.qualifier, it.alias, infer_type(*it.expr, in)});
  return out;
}

using AttrEnv = std::map<std::string, AttrList>;

class Annotator {
public:
  Annotator(const Schema& schema, Annotation& ann, int& next_id) : schema_(schema), ann_(ann), next_id_(next_id) {}

  const NodeInfo& visit(const Query& q, const TupleEnv& env, const AttrEnv& attrs) {
    NodeInfo info;
    info.id = next_id_++;
    std::visit([&](const auto& n) { node(n, info, env, attrs); }, q.node);
    ann_.put(q, std::move(info));
    return ann_.at(q);
  }

private:
  SymTupleList fresh(int id, std::size_t n) {
    SymTupleList out;
    for (std::size_t i = 1; i <= n; ++i) out.push_back(fresh_tuple(id, i));
    return out;
  }

  void subqueries(const std::vector<const Query*>& qs, const TupleEnv& env, const AttrEnv& attrs) {
    for (const Query* s : qs) visit(*s, env, attrs);
  }

  void node(const Query::Relation& n, NodeInfo& info, const TupleEnv& env, const AttrEnv& attrs) {
    auto a = attrs.find(n.name);
    if (a != attrs.end()) {
      info.attrs = requalify(a->second, n.name);
    } else {
      const RelationSchema* r = schema_.find(n.name);
      if (!r) throw ResolveError("unknown relation " + n.name);
      for (const auto& d : r->attrs) info.attrs.push_back(Attribute{r->name, d.name, d.type});
    }
    auto t = env.find(n.name);
    if (t == env.end()) throw InternalError("no symbolic tuples for " + n.name);
    info.tuples = t->second;
  }

  void node(const Query::Project& n, NodeInfo& info, const TupleEnv& env, const AttrEnv& attrs) {
    const NodeInfo& in = visit(*n.input, env, attrs);
    std::vector<const Query*> subs;
    items_subqueries(n.items, subs);
    info.attrs = item_attrs(n.items, in.attrs);
    info.tuples = fresh(info.id, has_aggregate(n.items) ? 1 : in.tuples.size());
    subqueries(subs, env, attrs);
  }

  void node(const Query::Filter& n, NodeInfo& info, const TupleEnv& env, const AttrEnv& attrs) {
    const NodeInfo& in = visit(*n.input, env, attrs);
    info.attrs = in.attrs;
    info.tuples = fresh(info.id, in.tuples.size());
    std::vector<const Query*> subs;
    pred_subqueries(*n.pred, subs);
    subqueries(subs, env, attrs);
  }

  void node(const Query::Rename& n, NodeInfo& info, const TupleEnv& env, const AttrEnv& attrs) {
    const NodeInfo& in = visit(*n.input, env, attrs);
    info.attrs = requalify(in.attrs, n.alias);
    info.tuples = in.tuples;
  }

  void node(const Query::SetOp& n, NodeInfo& info, const TupleEnv& env, const AttrEnv& attrs) {
    NodeInfo l = visit(*n.lhs, env, attrs);
    const NodeInfo& r = visit(*n.rhs, env, attrs);
    if (l.attrs.size() != r.attrs.size()) throw ResolveError("set operation operands have different arity");
    info.attrs = l.attrs;
    bool plus = n.kind == SetOpKind::Union || n.kind == SetOpKind::UnionAll;
    info.tuples = fresh(info.id, plus ? l.tuples.size() + r.tuples.size() : l.tuples.size());
  }

  void node(const Query::Distinct& n, NodeInfo& info, const TupleEnv& env, const AttrEnv& attrs) {
    const NodeInfo& in = visit(*n.input, env, attrs);
    info.attrs = in.attrs;
    info.tuples = fresh(info.id, in.tuples.size());
  }

  void node(const Query::Join& n, NodeInfo& info, const TupleEnv& env, const AttrEnv& attrs) {
    NodeInfo l = visit(*n.lhs, env, attrs);
    const NodeInfo& r = visit(*n.rhs, env, attrs);
    info.attrs = l.attrs;
    info.attrs.insert(info.attrs.end(), r.attrs.begin(), r.attrs.end());
    std::size_t a = l.tuples.size(), b = r.tuples.size();
    std::size_t count = a * b;
    if (n.kind == JoinKind::Left) count = a * (b + 1);
    else if (n.kind == JoinKind::Right) count = (a + 1) * b;
    else if (n.kind == JoinKind::Full) count = a * b + a + b;
    info.tuples = fresh(info.id, count);
    if (n.pred) {
      std::vector<const Query*> subs;
      pred_subqueries(*n.pred, subs);
      subqueries(subs, env, attrs);
    }
  }

  void node(const Query::GroupBy& n, NodeInfo& info, const TupleEnv& env, const AttrEnv& attrs) {
    const NodeInfo& in = visit(*n.input, env, attrs);
    info.attrs = item_attrs(n.items, in.attrs);
    info.tuples = fresh(info.id, in.tuples.size());
    std::vector<const Query*> subs;
    for (const auto& k : n.keys) expr_subqueries(*k, subs);
    items_subqueries(n.items, subs);
    pred_subqueries(*n.having, subs);
    subqueries(subs, env, attrs);
  }

  void node(const Query::With& n, NodeInfo& info, const TupleEnv& env, const AttrEnv& attrs) {
    TupleEnv inner = env;
    AttrEnv inner_attrs = attrs;
    for (const auto& [name, def] : n.defs) {
      const NodeInfo& d = visit(*def, env, attrs);
      inner[name] = d.tuples;
      inner_attrs[name] = d.attrs;
    }
    const NodeInfo& body = visit(*n.body, inner, inner_attrs);
    info.attrs = body.attrs;
    info.tuples = body.tuples;
  }

  void node(const Query::OrderBy& n, NodeInfo& info, const TupleEnv& env, const AttrEnv& attrs) {
    const NodeInfo& in = visit(*n.input, env, attrs);
    info.attrs = in.attrs;
    info.tuples = fresh(info.id, in.tuples.size());
    std::vector<const Query*> subs;
    for (const auto& k : n.keys) expr_subqueries(*k, subs);
    subqueries(subs, env, attrs);
  }

  const Schema& schema_;
  Annotation& ann_;
  int& next_id_;
};

} // namespace

std::vector<const Query*> query_children(const Query& q) {
  std::vector<const Query*> out;
  std::visit([&](const auto& n) {
    using T = std::decay_t<decltype(n)>;
    if constexpr (std::is_same_v<T, Query::Relation>) {
    } else if constexpr (std::is_same_v<T, Query::Project>) {
      out.push_back(n.input.get());
      items_subqueries(n.items, out);
    } else if constexpr (std::is_same_v<T, Query::Filter>) {
      out.push_back(n.input.get());
      pred_subqueries(*n.pred, out);
    } else if constexpr (std::is_same_v<T, Query::Rename> || std::is_same_v<T, Query::Distinct>) {
      out.push_back(n.input.get());
    } else if constexpr (std::is_same_v<T, Query::SetOp>) {
      out.push_back(n.lhs.get());
      out.push_back(n.rhs.get());
    } else if constexpr (std::is_same_v<T, Query::Join>) {
      out.push_back(n.lhs.get());
      out.push_back(n.rhs.get());
      if (n.pred) pred_subqueries(*n.pred, out);
    } else if constexpr (std::is_same_v<T, Query::GroupBy>) {
      out.push_back(n.input.get());
      for (const auto& k : n.keys) expr_subqueries(*k, out);
      items_subqueries(n.items, out);
      pred_subqueries(*n.having, out);
    } else if constexpr (std::is_same_v<T, Query::With>) {
      for (const auto& d : n.defs) out.push_back(d.second.get());
      out.push_back(n.body.get());
    } else {
      out.push_back(n.input.get());
      for (const auto& k : n.keys) expr_subqueries(*k, out);
    }
  }, q.node);
  return out;
}

AttrType infer_type(const Expr& e, const AttrList& in) {
  if (const auto* c = std::get_if<Expr::Column>(&e.node))
    return c->index >= 0 && static_cast<std::size_t>(c->index) < in.size() ? in[c->index].type : AttrType::Int;
  if (const auto* k = std::get_if<Expr::Const>(&e.node))
    return k->value.is_bool() ? AttrType::Bool : AttrType::Int;
  auto null_const = [](const Expr& x) {
    const auto* k = std::get_if<Expr::Const>(&x.node);
    return k && k->value.is_null();
  };
  auto boolish = [&](const Expr& x) { return null_const(x) || infer_type(x, in) == AttrType::Bool; };
  if (const auto* i = std::get_if<Expr::Ite>(&e.node))
    return boolish(*i->then_e) && boolish(*i->else_e) && !(null_const(*i->then_e) && null_const(*i->else_e))
               ? AttrType::Bool : AttrType::Int;
  if (const auto* c = std::get_if<Expr::Case>(&e.node)) {
    bool all = boolish(*c->else_e);
    bool some = !null_const(*c->else_e);
    for (const auto& w : c->whens) {
      all = all && boolish(*w.second);
      some = some || !null_const(*w.second);
    }
    return all && some ? AttrType::Bool : AttrType::Int;
  }
  return AttrType::Int;
}

AttrList infer_attributes(const Schema& schema, const Query& q) {
  TupleEnv env;
  for (const auto& r : schema.relations()) env[r.name] = {};
  int id = 1;
  Annotation ann = annotate(schema, env, q, id);
  return ann.at(q).attrs;
}

const NodeInfo& Annotation::at(const Query& q) const {
  auto f = info_.find(&q);
  if (f == info_.end()) throw InternalError("query node was not annotated");
  return f->second;
}

void Annotation::put(const Query& q, NodeInfo info) {
  if (info_.emplace(&q, std::move(info)).second) order_.push_back(&q);
}

nlohmann::json Annotation::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  std::vector<const Query*> sorted = order_;
  std::sort(sorted.begin(), sorted.end(), [&](const Query* a, const Query* b) { return at(*a).id < at(*b).id; });
  for (const Query* q : sorted) {
    const NodeInfo& n = at(*q);
    nlohmann::json attrs = nlohmann::json::array();
    for (const auto& a : n.attrs) attrs.push_back(a.id());
    out.push_back({{"id", n.id}, {"attrs", attrs}, {"tuple_count", n.tuples.size()}, {"tuples", n.tuples}});
  }
  return out;
}

Annotation annotate(const Schema& schema, const TupleEnv& env, const Query& q, int& next_id) {
  Annotation ann;
  Annotator(schema, ann, next_id).visit(q, env, {});
  return ann;
}

SymTupleList infer_tuples(const Schema& schema, const TupleEnv& env, const Query& q, int first_id) {
  return annotate(schema, env, q, first_id).at(q).tuples;
}

std::string fresh_tuple(int node, std::size_t index) {
  return "t_" + std::to_string(node) + "_" + std::to_string(index);
}

} // namespace sqlbound
