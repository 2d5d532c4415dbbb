#include "sqlbound/counterexample.hpp"

#include "sqlbound/errors.hpp"

namespace sqlbound {

using namespace smt;

namespace {

Term null_app(const std::string& fn, const std::string& t) { return app(null_fn(fn), {tuple_term(t)}, Sort::Bool); }
Term val_app(const std::string& fn, const std::string& t) { return app(val_fn(fn), {tuple_term(t)}, Sort::Int); }

bool read_bool(const Model& m, const Term& t, bool fallback, bool* defaulted = nullptr) {
  const GroundValue* v = m.find(t);
  if (!v) {
    if (defaulted) *defaulted = true;
    return fallback;
  }
  if (const auto* b = std::get_if<bool>(v)) return *b;
  throw InternalError("model value of " + print(t) + " is not Bool");
}

std::int64_t read_int(const Model& m, const Term& t, bool* defaulted = nullptr) {
  const GroundValue* v = m.find(t);
  if (!v) {
    if (defaulted) *defaulted = true;
    return 0;
  }
  if (const auto* i = std::get_if<std::int64_t>(v)) return *i;
  throw InternalError("model value of " + print(t) + " is not Int");
}

Value make_value(bool is_null, std::int64_t v, AttrType type) {
  if (is_null) return Value::null();
  return type == AttrType::Bool ? Value::boolean(v != 0) : Value::integer(v);
}

} // namespace

std::vector<Term> relation_terms(const EncodedRelation& r) {
  std::vector<Term> out;
  for (const auto& t : r.tuples) {
    out.push_back(del_term(t));
    for (const auto& f : r.fns) {
      out.push_back(null_app(f, t));
      out.push_back(val_app(f, t));
    }
  }
  return out;
}

std::vector<Term> model_terms(const Schema& schema, const SymbolicDatabase& db) {
  std::vector<Term> out;
  for (const auto& rel : schema.relations()) {
    EncodedRelation r;
    for (const auto& a : rel.attrs) r.fns.push_back(rel.name + "." + a.name);
    r.tuples = db.tuples.at(rel.name);
    auto ts = relation_terms(r);
    out.insert(out.end(), ts.begin(), ts.end());
  }
  return out;
}

std::vector<Row> read_relation(const Model& model, const EncodedRelation& r) {
  std::vector<Row> out;
  for (const auto& t : r.tuples) {
    if (read_bool(model, del_term(t), true)) continue;
    Row row;
    for (std::size_t k = 0; k < r.fns.size(); ++k) {
      AttrType type = k < r.attrs.size() ? r.attrs[k].type : AttrType::Int;
      bool n = read_bool(model, null_app(r.fns[k], t), false);
      row.push_back(make_value(n, n ? 0 : read_int(model, val_app(r.fns[k], t)), type));
    }
    out.push_back(std::move(row));
  }
  return out;
}

Counterexample build_counterexample(const Model& model, const SymbolicDatabase& db, const Schema& schema,
                                    const ConstraintSet& cs) {
  Counterexample ce;
  for (const auto& rel : schema.relations()) {
    auto& rows = ce.db[rel.name];
    for (const auto& t : db.tuples.at(rel.name)) {
      if (read_bool(model, del_term(t), true)) continue;
      Row row;
      for (const auto& a : rel.attrs) {
        std::string fn = rel.name + "." + a.name;
        bool missing = false;
        bool n = read_bool(model, null_app(fn, t), false, &missing);
        std::int64_t v = n ? 0 : read_int(model, val_app(fn, t), &missing);
        if (missing) ce.defaulted.push_back(t + "." + fn);
        row.push_back(make_value(n, v, a.type));
      }
      rows.push_back(std::move(row));
    }
  }
  if (!check_constraints(ce.db, schema, cs))
    throw InternalError("counterexample violates the integrity constraints:\n" + database_to_string(ce.db));
  return ce;
}

} // namespace sqlbound
