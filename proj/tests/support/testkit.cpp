#include "testkit.hpp"

#include <sstream>

#include "sqlbound/counterexample.hpp"
#include "sqlbound/errors.hpp"
#include "sqlbound/solver.hpp"

namespace testkit {

Schema schema_of(const std::string& text) {
  std::vector<RelationSchema> rels;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) {
    auto open = part.find('('), close = part.find(')');
    if (open == std::string::npos || close == std::string::npos) throw std::invalid_argument(text);
    RelationSchema r;
    std::stringstream name(part.substr(0, open));
    name >> r.name;
    std::stringstream attrs(part.substr(open + 1, close - open - 1));
    std::string a;
    while (std::getline(attrs, a, ',')) {
      std::stringstream as(a);
      std::string n;
      as >> n;
      AttributeDef d;
      auto colon = n.find(':');
      d.name = n.substr(0, colon);
      if (colon != std::string::npos && n.substr(colon + 1) == "bool") d.type = AttrType::Bool;
      r.attrs.push_back(d);
    }
    rels.push_back(r);
  }
  return Schema(rels);
}

ConstraintSet Parsed::constraints(const std::vector<std::string>& texts) {
  ConstraintSet cs;
  for (const auto& t : texts) cs.push_back(parse_constraint(t, schema, strings));
  return cs;
}

PinnedRun run_pinned(const Schema& schema, const Query& q, const Database& db, int bound,
                     std::int64_t null_payload) {
  SymbolicDatabase sdb = build_symbolic_db(schema, bound);
  smt::Formula f;
  Encoder enc(schema, sdb, f);
  enc.declare_database();
  EncodedRelation out = enc.encode_query(q);
  f.add(enc.pin(db, null_payload));
  std::vector<smt::Term> terms = relation_terms(out);
  SatResult r = check_sat(smt::emit_smtlib(f, terms), 60000, terms);
  if (r.status == SatStatus::Unknown) throw std::runtime_error("solver: " + r.reason + " " + r.stderr_text);
  PinnedRun run;
  run.sat = r.status == SatStatus::Sat;
  run.sorted = out.sorted;
  if (run.sat) run.rows = read_relation(r.model, out);
  return run;
}

bool constraints_sat(const Schema& schema, const ConstraintSet& cs, const Database& db, int bound,
                     std::int64_t null_payload) {
  SymbolicDatabase sdb = build_symbolic_db(schema, bound);
  smt::Formula f;
  Encoder enc(schema, sdb, f);
  enc.declare_database();
  f.add(enc.encode_constraints(cs));
  f.add(enc.pin(db, null_payload));
  SatResult r = check_sat(smt::emit_smtlib(f), 60000);
  if (r.status == SatStatus::Unknown) throw std::runtime_error("solver: " + r.reason + " " + r.stderr_text);
  return r.status == SatStatus::Sat;
}

bool is_sorted_query(const Query& q) { return std::holds_alternative<Query::OrderBy>(q.node); }

bool outputs_equal(const Query& q1, const Query& q2, const std::vector<Row>& a, const std::vector<Row>& b) {
  if (is_sorted_query(q1) && is_sorted_query(q2)) return list_equal(a, b);
  return bag_equal(a, b);
}

Outcome compare_on(const Database& db, const Schema& schema, const Query& q1, const Query& q2) {
  try {
    auto a = eval_query(db, schema, q1);
    auto b = eval_query(db, schema, q2);
    return outputs_equal(q1, q2, a, b) ? Outcome::Equal : Outcome::Differ;
  } catch (const EvalError&) {
    return Outcome::Error;
  }
}

std::optional<Database> find_witness(const Schema& schema, const ConstraintSet& cs, const Query& q1,
                                     const Query& q2, std::size_t max_rows, std::vector<Value> domain) {
  DatabaseEnumerator en(schema, cs, max_rows, std::move(domain), 50000000);
  while (auto db = en.next())
    if (compare_on(*db, schema, q1, q2) == Outcome::Differ) return db;
  return std::nullopt;
}

Database random_database(const Schema& schema, std::mt19937_64& rng, std::size_t max_rows,
                         const std::vector<Value>& domain) {
  Database db;
  std::uniform_int_distribution<std::size_t> rows(0, max_rows), pick(0, domain.size() - 1);
  std::uniform_int_distribution<int> coin(0, 2);
  for (const auto& rel : schema.relations()) {
    auto& data = db[rel.name];
    std::size_t n = rows(rng);
    for (std::size_t i = 0; i < n; ++i) {
      Row r;
      for (const auto& a : rel.attrs) {
        if (a.type == AttrType::Bool) {
          int c = coin(rng);
          r.push_back(c == 0 ? Value::null() : Value::boolean(c == 2));
        } else {
          r.push_back(domain[pick(rng)]);
        }
      }
      data.push_back(std::move(r));
    }
  }
  return db;
}

VerifyOptions quick_options(std::int64_t timeout_ms) {
  VerifyOptions o;
  o.timeout_ms = timeout_ms;
  return o;
}

} // namespace testkit
