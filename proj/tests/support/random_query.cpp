#include "random_query.hpp"

#include <algorithm>
#include <functional>

namespace testkit {

namespace {

const CmpOp kOps[] = {CmpOp::Lt, CmpOp::Le, CmpOp::Eq, CmpOp::Ne, CmpOp::Gt, CmpOp::Ge};

bool unique_names(const std::vector<std::string>& names) {
  std::set<std::string> s(names.begin(), names.end());
  return s.size() == names.size();
}

} // namespace

QueryGenerator::QueryGenerator(const Schema& schema, std::uint64_t seed) : schema_(schema), rng_(seed) {}

const std::vector<std::string>& QueryGenerator::all_forms() {
  static const std::vector<std::string> forms = {
      "rel", "project", "agg-project", "filter", "rename", "distinct",
      "product", "join", "left-join", "right-join", "full-join",
      "union", "intersect", "except", "union-all", "intersect-all", "except-all",
      "group-by", "with", "order-by",
      "col", "const", "+", "-", "*", "/", "%", "ite", "case", "cast",
      "count", "sum", "avg", "min", "max",
      "cmp", "is-null", "in-values", "in-query", "and", "or", "not", "true"};
  return forms;
}

QueryPtr QueryGenerator::generate(int depth, int joins, bool allow_order) {
  joins_left_ = joins;
  ctes_.clear();
  if (allow_order && chance(0.15)) return order_by(depth).q;
  return query(depth).q;
}

QueryGenerator::Gen QueryGenerator::query(int depth) {
  if (depth <= 0) return leaf();
  for (;;) {
    switch (pick(12)) {
    case 0: return project(depth);
    case 1: return aggregate(depth);
    case 2:
    case 3: return filter(depth);
    case 4: return rename(depth);
    case 5: return distinct(depth);
    case 6:
    case 7:
      if (joins_left_ > 0) return join(depth);
      break;
    case 8:
    case 9:
      if (joins_left_ > 0) return setop(depth);
      break;
    case 10: return group_by(depth);
    case 11:
      if (ctes_.empty()) return with(depth);
      break;
    }
  }
}

QueryGenerator::Gen QueryGenerator::leaf() {
  use("rel");
  std::size_t n = schema_.relations().size();
  if (!ctes_.empty() && chance(0.7)) {
    const Cte& c = ctes_[pick(static_cast<int>(ctes_.size()))];
    Gen g{make_query(Query::Relation{c.name}), c.cols};
    for (auto& col : g.cols) col.qualifier = c.name;
    return g;
  }
  const RelationSchema& r = schema_.relations()[pick(static_cast<int>(n))];
  Gen g{make_query(Query::Relation{r.name}), {}};
  for (const auto& a : r.attrs) g.cols.push_back(Col{r.name, a.name, a.type});
  return g;
}

QueryGenerator::Gen QueryGenerator::normalize(Gen g) {
  std::vector<std::string> names;
  for (const auto& c : g.cols) names.push_back(c.name);
  if (unique_names(names)) return g;
  use("project");
  std::vector<ProjectItem> items;
  std::vector<Col> cols;
  for (const auto& c : g.cols) {
    std::string alias = fresh("x");
    items.push_back(ProjectItem{col(c.qualifier, c.name), "", alias});
    cols.push_back(Col{"", alias, c.type});
  }
  return Gen{make_query(Query::Project{g.q, items}), cols};
}

QueryGenerator::Gen QueryGenerator::renamed(Gen g) {
  use("rename");
  g = normalize(std::move(g));
  std::string alias = fresh("T");
  for (auto& c : g.cols) c.qualifier = alias;
  return Gen{make_query(Query::Rename{g.q, alias}), g.cols};
}

QueryGenerator::Gen QueryGenerator::as_ints(Gen g, std::size_t k) {
  use("project");
  std::vector<ProjectItem> items;
  std::vector<Col> cols;
  for (std::size_t i = 0; i < k; ++i) {
    std::string alias = fresh("x");
    items.push_back(ProjectItem{int_expr(g.cols, 1), "", alias});
    cols.push_back(Col{"", alias, AttrType::Int});
  }
  return Gen{make_query(Query::Project{g.q, items}), cols};
}

QueryGenerator::Gen QueryGenerator::project(int depth) {
  use("project");
  Gen in = query(depth - 1);
  std::vector<ProjectItem> items;
  std::vector<Col> cols;
  int k = 1 + pick(3);
  for (int i = 0; i < k; ++i) {
    std::string alias = fresh("x");
    std::vector<std::size_t> bools;
    for (std::size_t j = 0; j < in.cols.size(); ++j)
      if (in.cols[j].type == AttrType::Bool) bools.push_back(j);
    if (!bools.empty() && chance(0.2)) {
      const Col& c = in.cols[bools[pick(static_cast<int>(bools.size()))]];
      use("col");
      items.push_back(ProjectItem{col(c.qualifier, c.name), "", alias});
      cols.push_back(Col{"", alias, AttrType::Bool});
      continue;
    }
    items.push_back(ProjectItem{int_expr(in.cols, 2), "", alias});
    cols.push_back(Col{"", alias, AttrType::Int});
  }
  return Gen{make_query(Query::Project{in.q, items}), cols};
}

QueryGenerator::Gen QueryGenerator::aggregate(int depth) {
  use("agg-project");
  Gen in = query(depth - 1);
  std::vector<ProjectItem> items;
  std::vector<Col> cols;
  int k = 1 + pick(2);
  for (int i = 0; i < k; ++i) {
    std::string alias = fresh("x");
    items.push_back(ProjectItem{agg_expr(in.cols), "", alias});
    cols.push_back(Col{"", alias, AttrType::Int});
  }
  return Gen{make_query(Query::Project{in.q, items}), cols};
}

QueryGenerator::Gen QueryGenerator::filter(int depth) {
  use("filter");
  Gen in = query(depth - 1);
  return Gen{make_query(Query::Filter{in.q, pred(in.cols, 2)}), in.cols};
}

QueryGenerator::Gen QueryGenerator::rename(int depth) { return renamed(query(depth - 1)); }

QueryGenerator::Gen QueryGenerator::distinct(int depth) {
  use("distinct");
  Gen in = query(depth - 1);
  return Gen{make_query(Query::Distinct{in.q}), in.cols};
}

QueryGenerator::Gen QueryGenerator::join(int depth) {
  --joins_left_;
  Gen l = renamed(query(depth - 1));
  Gen r = renamed(query(depth - 1));
  std::vector<Col> cols = l.cols;
  cols.insert(cols.end(), r.cols.begin(), r.cols.end());
  static const std::pair<const char*, JoinKind> kinds[] = {
      {"product", JoinKind::Product}, {"join", JoinKind::Inner}, {"left-join", JoinKind::Left},
      {"right-join", JoinKind::Right}, {"full-join", JoinKind::Full}};
  const auto& [name, kind] = kinds[pick(5)];
  use(name);
  PredPtr p;
  if (kind != JoinKind::Product) {
    std::vector<Col> li, ri;
    for (const auto& c : l.cols)
      if (c.type == AttrType::Int) li.push_back(c);
    for (const auto& c : r.cols)
      if (c.type == AttrType::Int) ri.push_back(c);
    if (!li.empty() && !ri.empty() && chance(0.8)) {
      use("cmp");
      use("col");
      const Col& a = li[pick(static_cast<int>(li.size()))];
      const Col& b = ri[pick(static_cast<int>(ri.size()))];
      p = make_pred(Pred::Cmp{chance(0.7) ? CmpOp::Eq : kOps[pick(6)], col(a.qualifier, a.name),
                              col(b.qualifier, b.name)});
      if (chance(0.3)) {
        use("and");
        p = pred_and(p, pred(cols, 1, false));
      }
    } else {
      p = pred(cols, 1, false);
    }
  }
  return Gen{make_query(Query::Join{kind, l.q, r.q, p}), cols};
}

QueryGenerator::Gen QueryGenerator::setop(int depth) {
  --joins_left_;
  static const std::pair<const char*, SetOpKind> kinds[] = {
      {"union", SetOpKind::Union}, {"intersect", SetOpKind::Intersect}, {"except", SetOpKind::Except},
      {"union-all", SetOpKind::UnionAll}, {"intersect-all", SetOpKind::IntersectAll},
      {"except-all", SetOpKind::ExceptAll}};
  const auto& [name, kind] = kinds[pick(6)];
  use(name);
  Gen l = query(depth - 1);
  Gen r = query(depth - 1);
  bool same = l.cols.size() == r.cols.size();
  for (std::size_t i = 0; same && i < l.cols.size(); ++i) same = l.cols[i].type == r.cols[i].type;
  if (!same || chance(0.3)) {
    std::size_t k = 1 + pick(2);
    l = as_ints(std::move(l), k);
    r = as_ints(std::move(r), k);
  }
  return Gen{make_query(Query::SetOp{kind, l.q, r.q}), l.cols};
}

QueryGenerator::Gen QueryGenerator::group_by(int depth) {
  use("group-by");
  Gen in = query(depth - 1);
  std::vector<Col> candidates;
  for (const auto& c : in.cols)
    if (c.type == AttrType::Int) candidates.push_back(c);
  if (candidates.empty()) {
    in = as_ints(std::move(in), 1);
    candidates = in.cols;
  }
  std::shuffle(candidates.begin(), candidates.end(), rng_);
  std::size_t nk = std::min<std::size_t>(candidates.size(), 1 + pick(2));
  std::vector<Col> keys(candidates.begin(), candidates.begin() + static_cast<long>(nk));
  std::vector<ExprPtr> key_exprs;
  std::vector<ProjectItem> items;
  std::vector<Col> cols;
  for (const auto& k : keys) {
    use("col");
    key_exprs.push_back(col(k.qualifier, k.name));
    if (chance(0.7)) {
      std::string alias = fresh("x");
      items.push_back(ProjectItem{col(k.qualifier, k.name), "", alias});
      cols.push_back(Col{"", alias, AttrType::Int});
    }
  }
  int na = 1 + pick(2);
  for (int i = 0; i < na; ++i) {
    std::string alias = fresh("x");
    items.push_back(ProjectItem{agg_expr(in.cols), "", alias});
    cols.push_back(Col{"", alias, AttrType::Int});
  }
  return Gen{make_query(Query::GroupBy{in.q, key_exprs, items, having(keys, in.cols)}), cols};
}

QueryGenerator::Gen QueryGenerator::with(int depth) {
  use("with");
  Gen def = normalize(query(depth - 1));
  std::string name = fresh("W");
  ctes_.push_back(Cte{name, def.cols});
  Gen body = query(depth - 1);
  ctes_.pop_back();
  return Gen{make_query(Query::With{{{name, def.q}}, body.q}), body.cols};
}

QueryGenerator::Gen QueryGenerator::order_by(int depth) {
  use("order-by");
  Gen in = depth > 1 ? query(depth - 1) : leaf();
  std::vector<ExprPtr> keys;
  int nk = 1 + pick(2);
  for (int i = 0; i < nk; ++i) {
    const Col& c = in.cols[pick(static_cast<int>(in.cols.size()))];
    keys.push_back(col(c.qualifier, c.name));
  }
  return Gen{make_query(Query::OrderBy{in.q, keys, chance(0.5)}), in.cols};
}

Value QueryGenerator::constant(bool allow_null) {
  static const std::int64_t vals[] = {-1, 0, 1, 2};
  if (allow_null && chance(0.15)) return Value::null();
  return Value::integer(vals[pick(4)]);
}

ExprPtr QueryGenerator::int_expr(const std::vector<Col>& cols, int depth) {
  std::vector<Col> ints;
  for (const auto& c : cols)
    if (c.type == AttrType::Int) ints.push_back(c);
  int choice = depth <= 0 ? pick(2) : pick(10);
  if (choice == 0 && ints.empty()) choice = 1;
  switch (choice) {
  case 0:
  case 2:
  case 3:
    if (!ints.empty()) {
      use("col");
      const Col& c = ints[pick(static_cast<int>(ints.size()))];
      return col(c.qualifier, c.name);
    }
    [[fallthrough]];
  case 1:
    use("const");
    return lit(constant());
  case 4:
  case 5: {
    static const std::pair<const char*, ArithOp> ops[] = {
        {"+", ArithOp::Add}, {"-", ArithOp::Sub}, {"*", ArithOp::Mul}};
    const auto& [n, op] = ops[pick(3)];
    use(n);
    return make_expr(Expr::Arith{op, int_expr(cols, depth - 1), int_expr(cols, depth - 1)});
  }
  case 6: {
    bool d = chance(0.5);
    use(d ? "/" : "%");
    static const std::int64_t divisors[] = {1, 2, -2, 3};
    return make_expr(Expr::Arith{d ? ArithOp::Div : ArithOp::Mod, int_expr(cols, depth - 1),
                                 lit(Value::integer(divisors[pick(4)]))});
  }
  case 7:
    use("ite");
    return make_expr(Expr::Ite{pred(cols, depth - 1, false), int_expr(cols, depth - 1), int_expr(cols, depth - 1)});
  case 8: {
    use("case");
    std::vector<std::pair<PredPtr, ExprPtr>> whens;
    int n = 1 + pick(2);
    for (int i = 0; i < n; ++i) whens.emplace_back(pred(cols, depth - 1, false), int_expr(cols, depth - 1));
    return make_expr(Expr::Case{whens, chance(0.3) ? lit(Value::null()) : int_expr(cols, depth - 1)});
  }
  default:
    use("cast");
    return make_expr(Expr::Cast{pred(cols, depth - 1, false)});
  }
}

ExprPtr QueryGenerator::agg_expr(const std::vector<Col>& cols) {
  static const std::pair<const char*, AggFn> fns[] = {
      {"count", AggFn::Count}, {"sum", AggFn::Sum}, {"avg", AggFn::Avg}, {"min", AggFn::Min}, {"max", AggFn::Max}};
  const auto& [n, fn] = fns[pick(5)];
  use(n);
  ExprPtr a = make_expr(Expr::Agg{fn, int_expr(cols, 1)});
  if (chance(0.2)) {
    use("+");
    use("const");
    a = make_expr(Expr::Arith{ArithOp::Add, a, lit(constant(false))});
  }
  return a;
}

PredPtr QueryGenerator::having(const std::vector<Col>& keys, const std::vector<Col>& cols) {
  if (chance(0.4)) {
    use("true");
    return pred_true();
  }
  use("cmp");
  ExprPtr lhs;
  if (chance(0.3)) {
    use("col");
    const Col& k = keys[pick(static_cast<int>(keys.size()))];
    lhs = col(k.qualifier, k.name);
  } else {
    lhs = agg_expr(cols);
  }
  PredPtr p = make_pred(Pred::Cmp{kOps[pick(6)], lhs, lit(constant(false))});
  if (chance(0.2)) {
    use("not");
    p = pred_not(p);
  }
  return p;
}

PredPtr QueryGenerator::pred(const std::vector<Col>& cols, int depth, bool subqueries) {
  std::vector<Col> bools, ints;
  for (const auto& c : cols) (c.type == AttrType::Bool ? bools : ints).push_back(c);
  int choice = depth <= 0 ? pick(3) : pick(10);
  switch (choice) {
  case 0:
  case 3:
    if (!bools.empty() && chance(0.3)) {
      use("cmp");
      use("col");
      const Col& c = bools[pick(static_cast<int>(bools.size()))];
      return make_pred(Pred::Cmp{chance(0.5) ? CmpOp::Eq : CmpOp::Ne, col(c.qualifier, c.name),
                                 lit(chance(0.5) ? Value::boolean(true) : Value::boolean(false))});
    }
    use("cmp");
    return make_pred(Pred::Cmp{kOps[pick(6)], int_expr(cols, depth - 1), int_expr(cols, depth - 1)});
  case 1: {
    use("is-null");
    if (!bools.empty() && chance(0.3)) {
      use("col");
      const Col& c = bools[pick(static_cast<int>(bools.size()))];
      return make_pred(Pred::IsNull{col(c.qualifier, c.name)});
    }
    return make_pred(Pred::IsNull{int_expr(cols, depth - 1)});
  }
  case 2: {
    use("in-values");
    std::size_t arity = 1 + pick(2);
    std::vector<ExprPtr> lhs;
    for (std::size_t i = 0; i < arity; ++i) lhs.push_back(int_expr(cols, 0));
    std::vector<std::vector<Value>> rows(1 + pick(3));
    for (auto& r : rows)
      for (std::size_t i = 0; i < arity; ++i) r.push_back(constant());
    return make_pred(Pred::InValues{lhs, rows});
  }
  case 4:
    if (subqueries) {
      use("in-query");
      auto saved = joins_left_;
      joins_left_ = 0;
      Gen sub = as_ints(query(std::max(0, depth - 1)), 1);
      joins_left_ = saved;
      return make_pred(Pred::InQuery{{int_expr(cols, 0)}, sub.q});
    }
    [[fallthrough]];
  case 5:
  case 6:
    use("and");
    return pred_and(pred(cols, depth - 1, subqueries), pred(cols, depth - 1, false));
  case 7:
    use("or");
    return pred_or(pred(cols, depth - 1, subqueries), pred(cols, depth - 1, false));
  case 8:
    use("not");
    return pred_not(pred(cols, depth - 1, subqueries));
  default:
    use("true");
    return make_pred(Pred::Const{chance(0.7)});
  }
}

std::vector<std::string> random_constraints(const Schema& schema, std::mt19937_64& rng) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  auto chance = [&](double p) { return std::bernoulli_distribution(p)(rng); };
  static const char* ops[] = {"<", "<=", "=", "<>", ">", ">="};
  std::vector<std::string> out;
  const auto& rels = schema.relations();
  auto attr = [&](const RelationSchema& r) { return r.attrs[pick(static_cast<int>(r.attrs.size()))].name; };
  std::function<std::string(const RelationSchema&, int)> psi = [&](const RelationSchema& r, int d) -> std::string {
    int c = d <= 0 ? pick(3) : pick(6);
    switch (c) {
    case 0: return attr(r) + " " + ops[pick(6)] + " " + std::to_string(pick(4) - 1);
    case 1: return attr(r) + " " + ops[pick(6)] + " " + attr(r);
    case 2: {
      std::string s = attr(r) + (chance(0.3) ? " not in [" : " in [");
      int n = 1 + pick(3);
      for (int i = 0; i < n; ++i) s += (i ? "," : "") + std::to_string(pick(4) - 1);
      return s + "]";
    }
    case 3: return "(" + psi(r, d - 1) + " and " + psi(r, d - 1) + ")";
    case 4: return "(" + psi(r, d - 1) + " or " + psi(r, d - 1) + ")";
    default: return "not (" + psi(r, d - 1) + ")";
    }
  };
  int n = 1 + pick(3);
  for (int i = 0; i < n; ++i) {
    const RelationSchema& r = rels[pick(static_cast<int>(rels.size()))];
    switch (pick(5)) {
    case 0: {
      std::string keys = attr(r);
      if (r.attrs.size() > 1 && chance(0.4)) keys = r.attrs[0].name + "," + r.attrs[1].name;
      out.push_back("PK(" + r.name + ",[" + keys + "])");
      break;
    }
    case 1: {
      const RelationSchema& s = rels[pick(static_cast<int>(rels.size()))];
      out.push_back("FK(" + r.name + "," + attr(r) + "," + s.name + "," + attr(s) + ")");
      break;
    }
    case 2: out.push_back("NotNull(" + r.name + "," + attr(r) + ")"); break;
    case 3: out.push_back("Check(" + r.name + ", " + psi(r, 2) + ")"); break;
    default: out.push_back("Inc(" + r.name + "," + attr(r) + "," + std::to_string(pick(3)) + ")"); break;
    }
  }
  return out;
}

} // namespace testkit
