#include "sqlbound/encoder.hpp"

#include <set>

#include "sqlbound/errors.hpp"

namespace sqlbound {

using namespace smt;

namespace {

Term one() { return integer(1); }

Term den_of(const SymValue& v) { return v.den ? v.den : one(); }

SymValue null_value() { return SymValue{tru(), integer(0), nullptr}; }

SymTri tri_and(const SymTri& a, const SymTri& b) {
  return {land(a.is_true, b.is_true), lor(a.is_false, b.is_false)};
}

SymTri tri_or(const SymTri& a, const SymTri& b) {
  return {lor(a.is_true, b.is_true), land(a.is_false, b.is_false)};
}

SymValue pick(const Term& c, const SymValue& a, const SymValue& b) {
  Term den = (a.den || b.den) ? ite(c, den_of(a), den_of(b)) : nullptr;
  return SymValue{ite(c, a.is_null, b.is_null), ite(c, a.val, b.val), den};
}

Term indicator(const Term& b) { return ite(b, one(), integer(0)); }

Term cmp_term(CmpOp op, const Term& a, const Term& b) {
  switch (op) {
  case CmpOp::Lt: return lt(a, b);
  case CmpOp::Le: return le(a, b);
  case CmpOp::Eq: return eq(a, b);
  case CmpOp::Ne: return lnot(eq(a, b));
  case CmpOp::Gt: return gt(a, b);
  case CmpOp::Ge: return ge(a, b);
  }
  return fls();
}

// Strict lexicographic order on sort keys, Null below every value.
Term key_less(const std::vector<SymValue>& a, const std::vector<SymValue>& b, std::size_t k = 0) {
  if (k == a.size()) return fls();
  const SymValue& x = a[k];
  const SymValue& y = b[k];
  Term x_num = mul(x.val, den_of(y)), y_num = mul(y.val, den_of(x));
  Term less = lor(land(x.is_null, lnot(y.is_null)), land({lnot(x.is_null), lnot(y.is_null), lt(x_num, y_num)}));
  return lor(less, land(value_equal(x, y), key_less(a, b, k + 1)));
}

Term key_equal(const std::vector<SymValue>& a, const std::vector<SymValue>& b) {
  std::vector<Term> cs;
  for (std::size_t k = 0; k < a.size(); ++k) cs.push_back(value_equal(a[k], b[k]));
  return land(std::move(cs));
}

std::vector<std::string> fns_for(const AttrList& attrs) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& a : attrs) {
    std::string f = a.id();
    for (int k = 2; !seen.insert(f).second; ++k) f = a.id() + "#" + std::to_string(k);
    out.push_back(f);
  }
  return out;
}

} // namespace

std::string del_fn() { return "Del"; }
std::string null_fn(const std::string& attr_id) { return "n:" + attr_id; }
std::string val_fn(const std::string& attr_id) { return "v:" + attr_id; }

Term tuple_term(const std::string& name) { return var(name, Sort::Tuple); }
Term del_term(const std::string& tuple) { return app(del_fn(), {tuple_term(tuple)}, Sort::Bool); }

SymbolicDatabase build_symbolic_db(const Schema& schema, int bound) {
  if (bound < 1) throw ResolveError("bound must be at least 1");
  SymbolicDatabase db;
  db.bound = static_cast<std::size_t>(bound);
  int k = 1;
  for (const auto& r : schema.relations()) {
    auto& ts = db.tuples[r.name];
    for (int i = 0; i < bound; ++i) ts.push_back("t" + std::to_string(k++));
  }
  return db;
}

SymTri compare(CmpOp op, const SymValue& a, const SymValue& b) {
  Term both = land(lnot(a.is_null), lnot(b.is_null));
  Term c = cmp_term(op, mul(a.val, den_of(b)), mul(b.val, den_of(a)));
  return {land(both, c), land(both, lnot(c))};
}

Term value_equal(const SymValue& a, const SymValue& b) {
  Term v = eq(mul(a.val, den_of(b)), mul(b.val, den_of(a)));
  return lor(land(a.is_null, b.is_null), land({lnot(a.is_null), lnot(b.is_null), v}));
}

Term tuple_equal(const SymRow& a, const SymRow& b) {
  if (a.values.size() != b.values.size()) throw InternalError("tuple arity mismatch");
  std::vector<Term> cs;
  for (std::size_t k = 0; k < a.values.size(); ++k) cs.push_back(value_equal(a.values[k], b.values[k]));
  return land(std::move(cs));
}

Term tdiv(const Term& a, const Term& b) {
  return ite(ge(a, integer(0)), div(a, b), neg(div(neg(a), b)));
}

Term tmod(const Term& a, const Term& b) { return sub(a, mul(b, tdiv(a, b))); }

Term trunc(const SymValue& v) { return v.den ? tdiv(v.val, v.den) : v.val; }

Encoder::Encoder(const Schema& schema, const SymbolicDatabase& db, Formula& out)
  : schema_(schema), db_(db), out_(out) {}

void Encoder::declare_tuple(const std::string& name) { out_.declare(name, {}, Sort::Tuple); }

void Encoder::declare_fns(const std::vector<std::string>& fns) {
  for (const auto& f : fns) {
    out_.declare(null_fn(f), {Sort::Tuple}, Sort::Bool);
    out_.declare(val_fn(f), {Sort::Tuple}, Sort::Int);
  }
}

Term Encoder::fresh_int(const std::string& prefix) {
  std::string name = prefix + "_" + std::to_string(++fresh_);
  out_.declare(name, {}, Sort::Int);
  return var(name, Sort::Int);
}

void Encoder::declare_database() {
  out_.declare(del_fn(), {Sort::Tuple}, Sort::Bool);
  for (const auto& rel : schema_.relations()) {
    EncodedRelation r = base_relation(rel.name);
    declare_fns(r.fns);
    for (const auto& t : r.tuples) declare_tuple(t);
  }
  for (const auto& rel : schema_.relations()) {
    EncodedRelation r = base_relation(rel.name);
    for (const auto& t : r.tuples)
      for (std::size_t k = 0; k < rel.attrs.size(); ++k)
        if (rel.attrs[k].type == AttrType::Bool) {
          Term v = app(val_fn(r.fns[k]), {tuple_term(t)}, Sort::Int);
          out_.add(land(ge(v, integer(0)), le(v, integer(1))));
        }
  }
}

EncodedRelation Encoder::base_relation(const std::string& name) const {
  const RelationSchema& rel = schema_.at(name);
  EncodedRelation r;
  for (const auto& a : rel.attrs) r.attrs.push_back(Attribute{rel.name, a.name, a.type});
  r.fns = fns_for(r.attrs);
  auto f = db_.tuples.find(rel.name);
  if (f == db_.tuples.end()) throw InternalError("relation " + name + " is not in the symbolic database");
  r.tuples = f->second;
  return r;
}

SymRow Encoder::row(const EncodedRelation& r, std::size_t i) const {
  Term t = tuple_term(r.tuples.at(i));
  SymRow out{app(del_fn(), {t}, Sort::Bool), {}};
  for (const auto& f : r.fns)
    out.values.push_back(SymValue{app(null_fn(f), {t}, Sort::Bool), app(val_fn(f), {t}, Sort::Int), nullptr});
  return out;
}

std::vector<SymRow> Encoder::rows(const EncodedRelation& r) const {
  std::vector<SymRow> out;
  for (std::size_t i = 0; i < r.tuples.size(); ++i) out.push_back(row(r, i));
  return out;
}

Term Encoder::materialize(const std::string& tuple, const std::vector<std::string>& fns, const SymRow& r) {
  declare_tuple(tuple);
  declare_fns(fns);
  Term t = tuple_term(tuple);
  std::vector<Term> cs{eq(app(del_fn(), {t}, Sort::Bool), r.del)};
  for (std::size_t k = 0; k < fns.size(); ++k) {
    const SymValue& v = r.values[k];
    cs.push_back(eq(app(null_fn(fns[k]), {t}, Sort::Bool), v.is_null));
    if (!is_true(v.is_null)) cs.push_back(eq(app(val_fn(fns[k]), {t}, Sort::Int), trunc(v)));
  }
  return land(std::move(cs));
}

EncodedRelation Encoder::output(const Query& q, const std::vector<SymRow>& out) {
  const NodeInfo& info = ann_.at(q);
  if (info.tuples.size() != out.size()) throw InternalError("tuple count disagrees with inference");
  EncodedRelation r{info.attrs, fns_for(info.attrs), info.tuples, false};
  for (std::size_t i = 0; i < out.size(); ++i) out_.add(materialize(r.tuples[i], r.fns, out[i]));
  return r;
}

EncodedRelation Encoder::encode_query(const Query& q) {
  ann_ = annotate(schema_, db_.tuples, q, next_id_);
  ctes_.clear();
  sub_.clear();
  return encode_node(q);
}

EncodedRelation Encoder::encode_node(const Query& q) {
  return std::visit([&](const auto& n) { return node(q, n); }, q.node);
}

const EncodedRelation& Encoder::subquery(const Query& q) {
  auto f = sub_.find(&q);
  if (f != sub_.end()) return f->second;
  EncodedRelation r = encode_node(q);
  return sub_.emplace(&q, std::move(r)).first->second;
}

EncodedRelation Encoder::node(const Query& q, const Query::Relation& n) {
  for (auto it = ctes_.rbegin(); it != ctes_.rend(); ++it) {
    auto f = it->find(n.name);
    if (f != it->end()) {
      EncodedRelation r = f->second;
      r.attrs = ann_.at(q).attrs;
      return r;
    }
  }
  return base_relation(n.name);
}

EncodedRelation Encoder::node(const Query& q, const Query::Project& n) {
  EncodedRelation in = encode_node(*n.input);
  std::vector<SymRow> ins = rows(in), out;
  if (has_aggregate(n.items)) {
    Context cx;
    if (!ins.empty()) cx.head = &ins[0];
    for (const auto& r : ins) cx.members.push_back(Member{r, lnot(r.del)});
    SymRow o{fls(), {}};
    for (const auto& it : n.items) o.values.push_back(expr(cx, *it.expr));
    out.push_back(std::move(o));
  } else {
    for (const auto& r : ins) {
      Context cx{&r, {}};
      SymRow o{r.del, {}};
      for (const auto& it : n.items) o.values.push_back(expr(cx, *it.expr));
      out.push_back(std::move(o));
    }
  }
  return output(q, out);
}

EncodedRelation Encoder::node(const Query& q, const Query::Filter& n) {
  EncodedRelation in = encode_node(*n.input);
  std::vector<SymRow> out;
  for (auto& r : rows(in)) {
    SymTri p = pred(Context{&r, {}}, *n.pred);
    out.push_back(SymRow{lor(r.del, lnot(p.is_true)), r.values});
  }
  return output(q, out);
}

EncodedRelation Encoder::node(const Query& q, const Query::Rename& n) {
  EncodedRelation r = encode_node(*n.input);
  r.attrs = ann_.at(q).attrs;
  return r;
}

std::vector<Term> Encoder::dedup(const std::vector<SymRow>& rs) const {
  std::vector<Term> out;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    std::vector<Term> earlier;
    for (std::size_t j = 0; j < i; ++j) earlier.push_back(land(lnot(rs[j].del), tuple_equal(rs[i], rs[j])));
    out.push_back(lor(rs[i].del, lor(std::move(earlier))));
  }
  return out;
}

Term Encoder::membership(const SymRow& x, const std::vector<SymRow>& rs) const {
  std::vector<Term> any;
  for (const auto& r : rs) any.push_back(land(lnot(r.del), tuple_equal(x, r)));
  return lor(std::move(any));
}

// Del of each left tuple after removing one left match per right tuple.
std::vector<Term> Encoder::except_all(const EncodedRelation& l, const EncodedRelation& r, const std::string& fn) {
  out_.declare(fn, {Sort::Tuple, Sort::Tuple}, Sort::Bool);
  std::vector<SymRow> ls = rows(l), rs = rows(r);
  auto paired = [&](std::size_t i, std::size_t j) {
    return app(fn, {tuple_term(l.tuples[i]), tuple_term(r.tuples[j])}, Sort::Bool);
  };
  std::vector<Term> out;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    std::vector<Term> removed;
    for (std::size_t j = 0; j < rs.size(); ++j) {
      std::vector<Term> def{lnot(ls[i].del), lnot(rs[j].del), tuple_equal(ls[i], rs[j])};
      for (std::size_t j2 = 0; j2 < j; ++j2) def.push_back(lnot(paired(i, j2)));
      for (std::size_t i2 = 0; i2 < i; ++i2) def.push_back(lnot(paired(i2, j)));
      out_.add(eq(paired(i, j), land(std::move(def))));
      removed.push_back(paired(i, j));
    }
    out.push_back(lor(ls[i].del, lor(std::move(removed))));
  }
  return out;
}

EncodedRelation Encoder::node(const Query& q, const Query::SetOp& n) {
  EncodedRelation l = encode_node(*n.lhs);
  EncodedRelation r = encode_node(*n.rhs);
  std::vector<SymRow> ls = rows(l), rs = rows(r), out;
  int id = ann_.at(q).id;
  switch (n.kind) {
  case SetOpKind::UnionAll:
    out = ls;
    out.insert(out.end(), rs.begin(), rs.end());
    break;
  case SetOpKind::Union: {
    out = ls;
    out.insert(out.end(), rs.begin(), rs.end());
    std::vector<Term> d = dedup(out);
    for (std::size_t i = 0; i < out.size(); ++i) out[i].del = d[i];
    break;
  }
  case SetOpKind::Intersect:
  case SetOpKind::Except: {
    std::vector<Term> d = dedup(ls);
    for (std::size_t i = 0; i < ls.size(); ++i) {
      Term m = membership(ls[i], rs);
      out.push_back(SymRow{lor(d[i], n.kind == SetOpKind::Intersect ? lnot(m) : m), ls[i].values});
    }
    break;
  }
  case SetOpKind::ExceptAll: {
    std::vector<Term> d = except_all(l, r, "paired_" + std::to_string(id));
    for (std::size_t i = 0; i < ls.size(); ++i) out.push_back(SymRow{d[i], ls[i].values});
    break;
  }
  case SetOpKind::IntersectAll: {
    // Q1 - (Q1 - Q2) over internal tuples.
    std::vector<Term> d = except_all(l, r, "paired_" + std::to_string(id) + "_e");
    EncodedRelation diff{l.attrs, fns_for(l.attrs), {}, false};
    for (std::size_t i = 0; i < ls.size(); ++i) {
      diff.tuples.push_back("t_" + std::to_string(id) + "_e" + std::to_string(i + 1));
      out_.add(materialize(diff.tuples.back(), diff.fns, SymRow{d[i], ls[i].values}));
    }
    std::vector<Term> kept = except_all(l, diff, "paired_" + std::to_string(id));
    for (std::size_t i = 0; i < ls.size(); ++i) out.push_back(SymRow{kept[i], ls[i].values});
    break;
  }
  }
  return output(q, out);
}

EncodedRelation Encoder::node(const Query& q, const Query::Distinct& n) {
  EncodedRelation in = encode_node(*n.input);
  std::vector<SymRow> out = rows(in);
  std::vector<Term> d = dedup(out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].del = d[i];
  return output(q, out);
}

EncodedRelation Encoder::node(const Query& q, const Query::Join& n) {
  EncodedRelation l = encode_node(*n.lhs);
  EncodedRelation r = encode_node(*n.rhs);
  std::vector<SymRow> ls = rows(l), rs = rows(r);
  const NodeInfo& info = ann_.at(q);
  auto concat = [](const SymRow& a, const SymRow& b, Term del) {
    SymRow out{std::move(del), a.values};
    out.values.insert(out.values.end(), b.values.begin(), b.values.end());
    return out;
  };
  SymRow lnull{tru(), std::vector<SymValue>(l.fns.size(), null_value())};
  SymRow rnull{tru(), std::vector<SymValue>(r.fns.size(), null_value())};
  auto inner = [&](std::size_t i, std::size_t j) {
    SymRow t = concat(ls[i], rs[j], lor(ls[i].del, rs[j].del));
    if (n.pred) t.del = lor(t.del, lnot(pred(Context{&t, {}}, *n.pred).is_true));
    return t;
  };
  std::vector<SymRow> out;
  // Del of each inner combination, by output position.
  std::vector<std::vector<Term>> dels(ls.size(), std::vector<Term>(rs.size()));
  auto add_inner = [&](std::size_t i, std::size_t j) {
    out.push_back(inner(i, j));
    dels[i][j] = del_term(info.tuples.at(out.size() - 1));
  };
  if (n.kind == JoinKind::Right) {
    for (std::size_t j = 0; j < rs.size(); ++j) {
      std::vector<Term> all;
      for (std::size_t i = 0; i < ls.size(); ++i) {
        add_inner(i, j);
        all.push_back(dels[i][j]);
      }
      out.push_back(concat(lnull, rs[j], lor(rs[j].del, lnot(land(std::move(all))))));
    }
    return output(q, out);
  }
  bool left = n.kind == JoinKind::Left || n.kind == JoinKind::Full;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    for (std::size_t j = 0; j < rs.size(); ++j) add_inner(i, j);
    if (left) out.push_back(concat(ls[i], rnull, lor(ls[i].del, lnot(land(dels[i])))));
  }
  if (n.kind == JoinKind::Full) {
    for (std::size_t j = 0; j < rs.size(); ++j) {
      std::vector<Term> all;
      for (std::size_t i = 0; i < ls.size(); ++i) all.push_back(dels[i][j]);
      out.push_back(concat(lnull, rs[j], lor(rs[j].del, lnot(land(std::move(all))))));
    }
  }
  return output(q, out);
}

EncodedRelation Encoder::node(const Query& q, const Query::GroupBy& n) {
  EncodedRelation in = encode_node(*n.input);
  std::vector<SymRow> ins = rows(in);
  std::string g = "g_" + std::to_string(ann_.at(q).id);
  out_.declare(g, {Sort::Tuple, Sort::Int}, Sort::Bool);
  auto member = [&](std::size_t i, std::size_t j) {
    return app(g, {tuple_term(in.tuples[i]), integer(static_cast<std::int64_t>(j + 1))}, Sort::Bool);
  };
  std::vector<std::vector<SymValue>> keys;
  for (const auto& r : ins) {
    Context cx{&r, {}};
    std::vector<SymValue> k;
    for (const auto& e : n.keys) k.push_back(expr(cx, *e));
    keys.push_back(std::move(k));
  }
  // Grouping: each live tuple joins exactly one group, led by its first equal tuple.
  for (std::size_t i = 0; i < ins.size(); ++i) {
    std::vector<Term> count;
    for (std::size_t j = 0; j <= i; ++j) count.push_back(indicator(member(i, j)));
    out_.add(eq(add(std::move(count)), ite(ins[i].del, integer(0), one())));
    for (std::size_t j = 0; j < i; ++j)
      out_.add(eq(member(i, j), land({lnot(ins[i].del), member(j, j), key_equal(keys[i], keys[j])})));
  }
  std::vector<SymRow> out;
  for (std::size_t i = 0; i < ins.size(); ++i) {
    Context cx{&ins[i], {}};
    for (std::size_t j = i; j < ins.size(); ++j) cx.members.push_back(Member{ins[j], member(j, i)});
    SymTri h = pred(cx, *n.having);
    SymRow o{lor(lnot(member(i, i)), lnot(h.is_true)), {}};
    for (const auto& it : n.items) o.values.push_back(expr(cx, *it.expr));
    out.push_back(std::move(o));
  }
  return output(q, out);
}

EncodedRelation Encoder::node(const Query&, const Query::With& n) {
  std::map<std::string, EncodedRelation> defs;
  for (const auto& [name, def] : n.defs) defs[name] = encode_node(*def);
  ctes_.push_back(std::move(defs));
  EncodedRelation out = encode_node(*n.body);
  ctes_.pop_back();
  return out;
}

EncodedRelation Encoder::node(const Query& q, const Query::OrderBy& n) {
  EncodedRelation in = encode_node(*n.input);
  std::vector<SymRow> ins = rows(in);
  const NodeInfo& info = ann_.at(q);
  std::vector<std::vector<SymValue>> keys;
  for (const auto& r : ins) {
    Context cx{&r, {}};
    std::vector<SymValue> k;
    for (const auto& e : n.keys) k.push_back(expr(cx, *e));
    keys.push_back(std::move(k));
  }
  // Strict total order: live rows by key (index breaks ties), then deleted rows by index.
  auto before = [&](std::size_t j, std::size_t i) {
    Term live = land(lnot(ins[j].del), lnot(ins[i].del));
    Term tie = boolean(n.ascending ? j < i : j > i);
    Term by_key = n.ascending ? key_less(keys[j], keys[i]) : key_less(keys[i], keys[j]);
    Term ordered = lor(by_key, land(key_equal(keys[j], keys[i]), tie));
    return lor({land(lnot(ins[j].del), ins[i].del), land(live, ordered),
                land({ins[j].del, ins[i].del, boolean(j < i)})});
  };
  std::vector<Term> rank;
  for (std::size_t i = 0; i < ins.size(); ++i) {
    std::vector<Term> ahead;
    for (std::size_t j = 0; j < ins.size(); ++j)
      if (j != i) ahead.push_back(indicator(before(j, i)));
    Term r = fresh_int("rank_" + std::to_string(info.id));
    out_.add(eq(r, add(std::move(ahead))));
    rank.push_back(r);
  }
  EncodedRelation out{info.attrs, fns_for(info.attrs), info.tuples, true};
  for (std::size_t k = 0; k < ins.size(); ++k) {
    for (std::size_t i = 0; i < ins.size(); ++i)
      out_.add(implies(eq(rank[i], integer(static_cast<std::int64_t>(k))),
                       materialize(out.tuples[k], out.fns, ins[i])));
  }
  return out;
}

SymValue Encoder::expr(const Context& cx, const Expr& e) {
  return std::visit([&](const auto& n) -> SymValue {
    using T = std::decay_t<decltype(n)>;
    if constexpr (std::is_same_v<T, Expr::Column>) {
      if (!cx.head) return null_value();
      return cx.head->values.at(n.index);
    } else if constexpr (std::is_same_v<T, Expr::Const>) {
      if (n.value.is_null()) return null_value();
      return SymValue{fls(), integer(n.value.as_int()), nullptr};
    } else if constexpr (std::is_same_v<T, Expr::Arith>) {
      SymValue a = expr(cx, *n.lhs), b = expr(cx, *n.rhs);
      SymValue out{lor(a.is_null, b.is_null), nullptr, nullptr};
      bool exact = a.den || b.den;
      switch (n.op) {
      case ArithOp::Add:
      case ArithOp::Sub: {
        Term x = mul(a.val, den_of(b)), y = mul(b.val, den_of(a));
        out.val = n.op == ArithOp::Add ? add(x, y) : sub(x, y);
        if (exact) out.den = mul(den_of(a), den_of(b));
        break;
      }
      case ArithOp::Mul:
        out.val = mul(a.val, b.val);
        if (exact) out.den = mul(den_of(a), den_of(b));
        break;
      case ArithOp::Div: out.val = tdiv(trunc(a), trunc(b)); break;
      case ArithOp::Mod: out.val = tmod(trunc(a), trunc(b)); break;
      }
      return out;
    } else if constexpr (std::is_same_v<T, Expr::Ite>) {
      SymTri c = pred(cx, *n.cond);
      return pick(c.is_true, expr(cx, *n.then_e), expr(cx, *n.else_e));
    } else if constexpr (std::is_same_v<T, Expr::Case>) {
      SymValue out = expr(cx, *n.else_e);
      for (auto it = n.whens.rbegin(); it != n.whens.rend(); ++it)
        out = pick(pred(cx, *it->first).is_true, expr(cx, *it->second), out);
      return out;
    } else if constexpr (std::is_same_v<T, Expr::Cast>) {
      SymTri p = pred(cx, *n.pred);
      return SymValue{land(lnot(p.is_true), lnot(p.is_false)), indicator(p.is_true), nullptr};
    } else if constexpr (std::is_same_v<T, Expr::Agg>) {
      return aggregate(cx, n.fn, *n.arg);
    } else {
      throw InternalError("unexpanded * in encoding");
    }
  }, e.node);
}

SymValue Encoder::aggregate(const Context& cx, AggFn fn, const Expr& arg) {
  std::vector<Term> live, vals;
  for (const auto& m : cx.members) {
    SymValue v = expr(Context{&m.row, {}}, arg);
    live.push_back(land(m.guard, lnot(v.is_null)));
    vals.push_back(trunc(v));
  }
  std::vector<Term> none;
  for (const auto& c : live) none.push_back(lnot(c));
  Term all_null = land(std::move(none));
  auto total = [&](bool count) {
    std::vector<Term> parts;
    for (std::size_t j = 0; j < live.size(); ++j) parts.push_back(ite(live[j], count ? one() : vals[j], integer(0)));
    return add(std::move(parts));
  };
  switch (fn) {
  case AggFn::Count: return SymValue{all_null, total(true), nullptr};
  case AggFn::Sum: return SymValue{all_null, total(false), nullptr};
  case AggFn::Avg: return SymValue{all_null, total(false), ite(all_null, one(), total(true))};
  case AggFn::Min:
  case AggFn::Max: {
    Term m = fresh_int(fn == AggFn::Min ? "min" : "max");
    std::vector<Term> witness{all_null};
    for (std::size_t j = 0; j < live.size(); ++j) {
      witness.push_back(land(live[j], eq(m, vals[j])));
      out_.add(implies(live[j], fn == AggFn::Min ? le(m, vals[j]) : ge(m, vals[j])));
    }
    out_.add(lor(std::move(witness)));
    return SymValue{all_null, m, nullptr};
  }
  }
  throw InternalError("unknown aggregate");
}

SymTri Encoder::pred(const Context& cx, const Pred& p) {
  return std::visit([&](const auto& n) -> SymTri {
    using T = std::decay_t<decltype(n)>;
    if constexpr (std::is_same_v<T, Pred::Const>) {
      return SymTri{boolean(n.value), boolean(!n.value)};
    } else if constexpr (std::is_same_v<T, Pred::Cmp>) {
      return compare(n.op, expr(cx, *n.lhs), expr(cx, *n.rhs));
    } else if constexpr (std::is_same_v<T, Pred::IsNull>) {
      SymValue v = expr(cx, *n.arg);
      return SymTri{v.is_null, lnot(v.is_null)};
    } else if constexpr (std::is_same_v<T, Pred::InValues>) {
      std::vector<SymValue> lhs;
      for (const auto& e : n.lhs) lhs.push_back(expr(cx, *e));
      SymTri acc{fls(), tru()};
      for (const auto& row : n.rows) {
        SymTri m{tru(), fls()};
        for (std::size_t k = 0; k < lhs.size(); ++k)
          m = tri_and(m, compare(CmpOp::Eq, lhs[k], expr(cx, Expr{Expr::Const{row[k]}})));
        acc = tri_or(acc, m);
      }
      return acc;
    } else if constexpr (std::is_same_v<T, Pred::InQuery>) {
      std::vector<SymValue> lhs;
      for (const auto& e : n.lhs) lhs.push_back(expr(cx, *e));
      const EncodedRelation& sub = subquery(*n.query);
      SymTri acc{fls(), tru()};
      for (std::size_t j = 0; j < sub.tuples.size(); ++j) {
        SymRow r = row(sub, j);
        SymTri m{tru(), fls()};
        for (std::size_t k = 0; k < lhs.size(); ++k) m = tri_and(m, compare(CmpOp::Eq, lhs[k], r.values[k]));
        acc = tri_or(acc, SymTri{land(lnot(r.del), m.is_true), lor(r.del, m.is_false)});
      }
      return acc;
    } else if constexpr (std::is_same_v<T, Pred::And>) {
      return tri_and(pred(cx, *n.lhs), pred(cx, *n.rhs));
    } else if constexpr (std::is_same_v<T, Pred::Or>) {
      return tri_or(pred(cx, *n.lhs), pred(cx, *n.rhs));
    } else {
      SymTri a = pred(cx, *n.arg);
      return SymTri{a.is_false, a.is_true};
    }
  }, p.node);
}

SymValue Encoder::encode_expression(const std::vector<SymRow>& xs, const Expr& e) {
  Context cx;
  if (!xs.empty()) cx.head = &xs[0];
  for (const auto& r : xs) cx.members.push_back(Member{r, lnot(r.del)});
  return expr(cx, e);
}

SymTri Encoder::encode_predicate(const std::vector<SymRow>& xs, const Pred& p) {
  Context cx;
  if (!xs.empty()) cx.head = &xs[0];
  for (const auto& r : xs) cx.members.push_back(Member{r, lnot(r.del)});
  return pred(cx, p);
}

Term Encoder::check_pred(const CheckPred& p, const SymRow& r) const {
  return std::visit([&](const auto& n) -> Term {
    using T = std::decay_t<decltype(n)>;
    if constexpr (std::is_same_v<T, CheckPred::AttrConst>) {
      const SymValue& v = r.values[n.attr];
      return land(lnot(v.is_null), cmp_term(n.op, v.val, integer(n.value.as_int())));
    } else if constexpr (std::is_same_v<T, CheckPred::AttrAttr>) {
      const SymValue& a = r.values[n.lhs];
      const SymValue& b = r.values[n.rhs];
      if (n.op == CmpOp::Eq) return value_equal(a, b);
      if (n.op == CmpOp::Ne) return lnot(value_equal(a, b));
      return compare(n.op, a, b).is_true;
    } else if constexpr (std::is_same_v<T, CheckPred::InValues>) {
      const SymValue& v = r.values[n.attr];
      std::vector<Term> any;
      for (const auto& c : n.values) any.push_back(eq(v.val, integer(c.as_int())));
      return land(lnot(v.is_null), lor(std::move(any)));
    } else if constexpr (std::is_same_v<T, CheckPred::And>) {
      return land(check_pred(*n.lhs, r), check_pred(*n.rhs, r));
    } else if constexpr (std::is_same_v<T, CheckPred::Or>) {
      return lor(check_pred(*n.lhs, r), check_pred(*n.rhs, r));
    } else {
      return lnot(check_pred(*n.arg, r));
    }
  }, p.node);
}

Term Encoder::encode_constraint(const Constraint& c) {
  return std::visit([&](const auto& k) -> Term {
    using T = std::decay_t<decltype(k)>;
    EncodedRelation rel = base_relation(k.rel);
    std::vector<SymRow> rs = rows(rel);
    std::vector<Term> cs;
    if constexpr (std::is_same_v<T, PrimaryKey>) {
      for (std::size_t i = 0; i < rs.size(); ++i) {
        std::vector<Term> present;
        for (int a : k.attrs) present.push_back(lnot(rs[i].values[a].is_null));
        cs.push_back(implies(lnot(rs[i].del), land(std::move(present))));
        for (std::size_t j = 0; j < i; ++j) {
          std::vector<Term> same;
          for (int a : k.attrs) same.push_back(eq(rs[i].values[a].val, rs[j].values[a].val));
          cs.push_back(implies(land(lnot(rs[i].del), lnot(rs[j].del)), lnot(land(std::move(same)))));
        }
      }
    } else if constexpr (std::is_same_v<T, ForeignKey>) {
      std::vector<SymRow> ref = rows(base_relation(k.ref_rel));
      for (const auto& r : rs) {
        const SymValue& v = r.values[k.attr];
        std::vector<Term> any;
        for (const auto& t : ref) {
          const SymValue& w = t.values[k.ref_attr];
          any.push_back(land({lnot(t.del), lnot(w.is_null), eq(v.val, w.val)}));
        }
        cs.push_back(implies(land(lnot(r.del), lnot(v.is_null)), lor(std::move(any))));
      }
    } else if constexpr (std::is_same_v<T, NotNull>) {
      for (const auto& r : rs) cs.push_back(implies(lnot(r.del), lnot(r.values[k.attr].is_null)));
    } else if constexpr (std::is_same_v<T, Check>) {
      for (const auto& r : rs) cs.push_back(implies(lnot(r.del), check_pred(*k.pred, r)));
    } else {
      for (std::size_t i = 0; i < rs.size(); ++i) {
        std::vector<Term> before{integer(k.start)};
        for (std::size_t j = 0; j < i; ++j) before.push_back(indicator(lnot(rs[j].del)));
        const SymValue& v = rs[i].values[k.attr];
        cs.push_back(implies(lnot(rs[i].del), land(lnot(v.is_null), eq(v.val, add(std::move(before))))));
      }
    }
    return land(std::move(cs));
  }, c);
}

Term Encoder::encode_constraints(const ConstraintSet& cs) {
  std::vector<Term> all;
  for (const auto& c : cs) all.push_back(encode_constraint(c));
  return land(std::move(all));
}

Term Encoder::bag_equal(const EncodedRelation& a, const EncodedRelation& b) const {
  if (a.fns.size() != b.fns.size()) throw ResolveError("compared queries have different arity");
  std::vector<SymRow> as = rows(a), bs = rows(b);
  auto count = [](const std::vector<SymRow>& rs) {
    std::vector<Term> parts;
    for (const auto& r : rs) parts.push_back(indicator(lnot(r.del)));
    return add(std::move(parts));
  };
  auto multiplicity = [](const SymRow& x, const std::vector<SymRow>& rs) {
    std::vector<Term> parts;
    for (const auto& r : rs) parts.push_back(indicator(land(lnot(r.del), tuple_equal(x, r))));
    return add(std::move(parts));
  };
  std::vector<Term> cs{eq(count(as), count(bs))};
  for (const auto& x : as) cs.push_back(implies(lnot(x.del), eq(multiplicity(x, as), multiplicity(x, bs))));
  return land(std::move(cs));
}

Term Encoder::list_equal(const EncodedRelation& a, const EncodedRelation& b) const {
  if (a.fns.size() != b.fns.size()) throw ResolveError("compared queries have different arity");
  if (!a.sorted || !b.sorted) throw InternalError("list equality needs sorted inputs");
  std::vector<SymRow> as = rows(a), bs = rows(b);
  std::vector<Term> ca, cb;
  for (const auto& r : as) ca.push_back(indicator(lnot(r.del)));
  for (const auto& r : bs) cb.push_back(indicator(lnot(r.del)));
  std::vector<Term> cs{eq(add(std::move(ca)), add(std::move(cb)))};
  for (std::size_t k = 0; k < std::min(as.size(), bs.size()); ++k)
    cs.push_back(implies(land(lnot(as[k].del), lnot(bs[k].del)), tuple_equal(as[k], bs[k])));
  return land(std::move(cs));
}

Term Encoder::pin(const Database& db, std::int64_t null_payload) const {
  std::vector<Term> cs;
  for (const auto& rel : schema_.relations()) {
    EncodedRelation r = base_relation(rel.name);
    auto f = db.find(rel.name);
    static const std::vector<Row> none;
    const std::vector<Row>& data = f == db.end() ? none : f->second;
    if (data.size() > r.tuples.size())
      throw ResolveError("relation " + rel.name + " has more rows than the bound");
    for (std::size_t i = 0; i < r.tuples.size(); ++i) {
      SymRow s = row(r, i);
      if (i >= data.size()) {
        cs.push_back(s.del);
        continue;
      }
      cs.push_back(lnot(s.del));
      for (std::size_t k = 0; k < rel.attrs.size(); ++k) {
        const Value& v = data[i][k];
        cs.push_back(eq(s.values[k].is_null, boolean(v.is_null())));
        cs.push_back(eq(s.values[k].val, integer(v.is_null() ? null_payload : v.as_int())));
      }
    }
  }
  return land(std::move(cs));
}

} // namespace sqlbound
