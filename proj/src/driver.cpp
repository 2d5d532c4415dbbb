#include "sqlbound/driver.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>

#include "sqlbound/errors.hpp"

namespace sqlbound {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

VerificationResult unsupported(const std::string& reason, int bound) {
  VerificationResult r;
  r.status = Status::Unsupported;
  r.bound = bound;
  r.reason = reason;
  return r;
}

nlohmann::json render(const Value& v, AttrType type, const StringTable* strings) {
  if (v.is_null()) return nullptr;
  if (type == AttrType::Bool) return v.as_bool();
  if (strings)
    if (auto s = strings->lookup(v.as_int())) return *s;
  return v.as_int();
}

} // namespace

const char* to_string(Status s) {
  switch (s) {
  case Status::Checked: return "checked";
  case Status::Refuted: return "refuted";
  case Status::Unsupported: return "unsupported";
  case Status::Unknown: return "unknown";
  }
  return "?";
}

int VerificationResult::exit_code() const {
  switch (status) {
  case Status::Checked: return 0;
  case Status::Refuted: return 1;
  case Status::Unsupported: return 2;
  case Status::Unknown: return 3;
  }
  return 3;
}

nlohmann::json VerificationResult::to_json(const Schema& schema, const StringTable* strings) const {
  nlohmann::json j;
  j["status"] = sqlbound::to_string(status);
  j["bound"] = bound;
  if (counterexample) {
    nlohmann::json db = nlohmann::json::object();
    for (const auto& rel : schema.relations()) {
      nlohmann::json rows = nlohmann::json::array();
      auto f = counterexample->db.find(rel.name);
      if (f != counterexample->db.end())
        for (const auto& row : f->second) {
          nlohmann::json t = nlohmann::json::object();
          for (std::size_t k = 0; k < rel.attrs.size(); ++k)
            t[rel.attrs[k].name] = render(row[k], rel.attrs[k].type, strings);
          rows.push_back(t);
        }
      db[rel.name] = rows;
    }
    j["counterexample"] = db;
    if (!counterexample->defaulted.empty()) j["defaulted"] = counterexample->defaulted;
  }
  if (!reason.empty()) j["reason"] = reason;
  if (!warnings.empty()) j["warnings"] = warnings;
  j["timings"] = {{"encode_ms", timings.encode_ms}, {"solve_ms", timings.solve_ms}, {"total_ms", timings.total_ms}};
  if (strings && !strings->entries().empty()) j["strings"] = strings->to_json();
  return j;
}

std::string Encoding::script() const { return smt::emit_smtlib(formula, model_terms); }

Encoding encode_equivalence(const Query& q1, const Query& q2, const Schema& schema, const ConstraintSet& cs, int n) {
  Encoding e;
  e.db = build_symbolic_db(schema, n);
  Encoder enc(schema, e.db, e.formula);
  enc.declare_database();
  e.formula.add(enc.encode_constraints(cs));
  EncodedRelation r1 = enc.encode_query(q1);
  EncodedRelation r2 = enc.encode_query(q2);
  if (r1.fns.size() != r2.fns.size())
    throw ResolveError("queries have different arity (" + std::to_string(r1.fns.size()) + " vs " +
                       std::to_string(r2.fns.size()) + ")");
  e.list_semantics = r1.sorted && r2.sorted;
  if (r1.sorted != r2.sorted)
    e.warnings.push_back("only one query is ordered; results are compared as bags");
  e.formula.add(smt::lnot(e.list_semantics ? enc.list_equal(r1, r2) : enc.bag_equal(r1, r2)));
  e.model_terms = model_terms(schema, e.db);
  return e;
}

VerificationResult verify_at_bound(const Query& q1, const Query& q2, const Schema& schema, const ConstraintSet& cs,
                                   int n, const VerifyOptions& opts) {
  auto start = Clock::now();
  VerificationResult res;
  res.bound = n;
  Encoding enc;
  try {
    enc = encode_equivalence(q1, q2, schema, cs, n);
  } catch (const Unsupported& e) {
    return unsupported(e.what(), n);
  } catch (const ResolveError& e) {
    return unsupported(e.what(), n);
  }
  res.warnings = enc.warnings;
  std::string script = enc.script();
  res.timings.encode_ms = ms_since(start);
  if (!opts.dump_dir.empty()) {
    std::filesystem::create_directories(opts.dump_dir);
    std::ofstream(std::filesystem::path(opts.dump_dir) / (opts.dump_name + "_n" + std::to_string(n) + ".smt2"))
        << script;
  }
  std::int64_t left = opts.timeout_ms - static_cast<std::int64_t>(res.timings.encode_ms);
  SatResult sat = check_sat(script, left, enc.model_terms, opts.solver);
  res.timings.solve_ms = sat.elapsed_ms;
  switch (sat.status) {
  case SatStatus::Unsat:
    res.status = Status::Checked;
    break;
  case SatStatus::Unknown:
    res.status = Status::Unknown;
    res.reason = sat.reason;
    if (!sat.stderr_text.empty()) res.reason += ": " + sat.stderr_text.substr(0, 500);
    break;
  case SatStatus::Sat: {
    Counterexample ce = build_counterexample(sat.model, enc.db, schema, cs);
    std::vector<Row> o1, o2;
    try {
      o1 = eval_query(ce.db, schema, q1);
      o2 = eval_query(ce.db, schema, q2);
    } catch (const EvalError& e) {
      VerificationResult u = unsupported(std::string("counterexample evaluation failed: ") + e.what(), n);
      u.timings = res.timings;
      u.timings.total_ms = ms_since(start);
      return u;
    }
    bool same = enc.list_semantics ? list_equal(o1, o2) : bag_equal(o1, o2);
    if (same)
      throw InternalError("solver model does not distinguish the queries under the reference semantics:\n" +
                          database_to_string(ce.db));
    res.status = Status::Refuted;
    res.counterexample = std::move(ce);
    break;
  }
  }
  res.timings.total_ms = ms_since(start);
  return res;
}

VerificationResult verify_incremental(const Query& q1, const Query& q2, const Schema& schema, const ConstraintSet& cs,
                                      int max_n, const VerifyOptions& opts) {
  auto start = Clock::now();
  Timings total;
  int verified = 0;
  std::vector<std::string> warnings;
  auto finish = [&](VerificationResult r) {
    r.timings = total;
    r.timings.total_ms = ms_since(start);
    for (const auto& w : warnings)
      if (std::find(r.warnings.begin(), r.warnings.end(), w) == r.warnings.end()) r.warnings.push_back(w);
    return r;
  };
  std::string stop;
  for (int n = 1; n <= max_n; ++n) {
    std::int64_t left = opts.timeout_ms - static_cast<std::int64_t>(ms_since(start));
    if (left <= 0) {
      stop = "timeout";
      break;
    }
    VerifyOptions o = opts;
    o.timeout_ms = left;
    VerificationResult r = verify_at_bound(q1, q2, schema, cs, n, o);
    total.encode_ms += r.timings.encode_ms;
    total.solve_ms += r.timings.solve_ms;
    for (const auto& w : r.warnings)
      if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
    if (r.status == Status::Checked) {
      verified = n;
      continue;
    }
    if (r.status != Status::Unknown) return finish(std::move(r));
    stop = r.reason;
    break;
  }
  VerificationResult res;
  if (verified >= 1) {
    res.status = Status::Checked;
    res.bound = verified;
    if (verified < max_n) warnings.push_back("stopped before bound " + std::to_string(verified + 1) + ": " + stop);
  } else {
    res.status = Status::Unknown;
    res.bound = 0;
    res.reason = stop.empty() ? "timeout" : stop;
  }
  return finish(std::move(res));
}

VerificationResult verify_problem(const Problem& p, VerifyOptions opts) {
  if (p.options.bound) return verify_at_bound(*p.q1, *p.q2, p.schema, p.constraints, *p.options.bound, opts);
  return verify_incremental(*p.q1, *p.q2, p.schema, p.constraints, p.options.max_bound.value_or(2), opts);
}

} // namespace sqlbound
