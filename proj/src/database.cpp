#include <algorithm>
#include <sstream>

#include "sqlbound/errors.hpp"
#include "sqlbound/eval.hpp"

namespace sqlbound {

namespace {

const std::vector<Row>& rows_of(const Database& db, const std::string& rel) {
  static const std::vector<Row> empty;
  auto f = db.find(rel);
  return f == db.end() ? empty : f->second;
}

bool holds(CmpOp op, std::int64_t a, std::int64_t b) {
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

// Constraints that only look at one relation.
bool local(const Constraint& c) { return !std::holds_alternative<ForeignKey>(c); }

const std::string& rel_of(const Constraint& c) {
  return std::visit([](const auto& k) -> const std::string& { return k.rel; }, c);
}

} // namespace

bool check_pred(const CheckPred& p, const Row& row) {
  return std::visit([&](const auto& n) -> bool {
    using T = std::decay_t<decltype(n)>;
    if constexpr (std::is_same_v<T, CheckPred::AttrConst>) {
      const Value& v = row[n.attr];
      return !v.is_null() && !n.value.is_null() && holds(n.op, v.as_int(), n.value.as_int());
    } else if constexpr (std::is_same_v<T, CheckPred::AttrAttr>) {
      const Value& a = row[n.lhs];
      const Value& b = row[n.rhs];
      if (n.op == CmpOp::Eq) return a == b;
      if (n.op == CmpOp::Ne) return !(a == b);
      return !a.is_null() && !b.is_null() && holds(n.op, a.as_int(), b.as_int());
    } else if constexpr (std::is_same_v<T, CheckPred::InValues>) {
      const Value& v = row[n.attr];
      if (v.is_null()) return false;
      return std::any_of(n.values.begin(), n.values.end(), [&](const Value& x) { return x == v; });
    } else if constexpr (std::is_same_v<T, CheckPred::And>) {
      return check_pred(*n.lhs, row) && check_pred(*n.rhs, row);
    } else if constexpr (std::is_same_v<T, CheckPred::Or>) {
      return check_pred(*n.lhs, row) || check_pred(*n.rhs, row);
    } else {
      return !check_pred(*n.arg, row);
    }
  }, p.node);
}

bool check_constraint(const Database& db, const Schema& schema, const Constraint& c) {
  (void)schema;
  return std::visit([&](const auto& k) -> bool {
    using T = std::decay_t<decltype(k)>;
    const auto& rows = rows_of(db, k.rel);
    if constexpr (std::is_same_v<T, PrimaryKey>) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int a : k.attrs)
          if (rows[i][a].is_null()) return false;
        for (std::size_t j = 0; j < i; ++j) {
          bool same = true;
          for (int a : k.attrs) same = same && rows[i][a] == rows[j][a];
          if (same) return false;
        }
      }
      return true;
    } else if constexpr (std::is_same_v<T, ForeignKey>) {
      const auto& ref = rows_of(db, k.ref_rel);
      for (const auto& r : rows) {
        const Value& v = r[k.attr];
        if (v.is_null()) continue;
        bool found = std::any_of(ref.begin(), ref.end(), [&](const Row& t) { return t[k.ref_attr] == v; });
        if (!found) return false;
      }
      return true;
    } else if constexpr (std::is_same_v<T, NotNull>) {
      return std::none_of(rows.begin(), rows.end(), [&](const Row& r) { return r[k.attr].is_null(); });
    } else if constexpr (std::is_same_v<T, Check>) {
      return std::all_of(rows.begin(), rows.end(), [&](const Row& r) { return check_pred(*k.pred, r); });
    } else {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const Value& v = rows[i][k.attr];
        if (v.is_null() || v.as_int() != k.start + static_cast<std::int64_t>(i)) return false;
      }
      return true;
    }
  }, c);
}

bool check_constraints(const Database& db, const Schema& schema, const ConstraintSet& cs) {
  return std::all_of(cs.begin(), cs.end(), [&](const Constraint& c) { return check_constraint(db, schema, c); });
}

bool bag_equal(const std::vector<Row>& a, const std::vector<Row>& b) {
  for (const auto* rs : {&a, &b})
    for (const auto& r : *rs)
      if (!a.empty() && r.size() != a.front().size()) throw EvalError("arity mismatch in bag comparison");
  if (!a.empty() && !b.empty() && a.front().size() != b.front().size())
    throw EvalError("arity mismatch in bag comparison");
  if (a.size() != b.size()) return false;
  auto sa = a, sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return sa == sb;
}

bool list_equal(const std::vector<Row>& a, const std::vector<Row>& b) {
  if (!a.empty() && !b.empty() && a.front().size() != b.front().size())
    throw EvalError("arity mismatch in list comparison");
  return a == b;
}

std::vector<Value> default_domain() {
  return {Value::null(), Value::integer(0), Value::integer(1), Value::integer(2)};
}

DatabaseEnumerator::DatabaseEnumerator(const Schema& schema, const ConstraintSet& cs, std::size_t max_rows,
                                       std::vector<Value> domain, std::size_t cap)
  : schema_(schema), cs_(cs), cap_(cap) {
  const std::vector<Value> bools = {Value::null(), Value::boolean(false), Value::boolean(true)};
  for (const auto& rel : schema.relations()) {
    // All tuples over the per-attribute domains.
    std::vector<Row> tuples = {Row{}};
    for (const auto& a : rel.attrs) {
      const auto& dom = a.type == AttrType::Bool ? bools : domain;
      std::vector<Row> next;
      for (const auto& t : tuples)
        for (const auto& v : dom) {
          Row r = t;
          r.push_back(v);
          next.push_back(std::move(r));
        }
      tuples = std::move(next);
    }
    std::size_t total = 1, layer = 1;
    for (std::size_t k = 1; k <= max_rows; ++k) {
      layer *= tuples.size();
      total += layer;
      if (total > cap) throw Exhausted("enumeration of " + rel.name + " exceeds the cap of " + std::to_string(cap));
    }
    // Relation instances in length-then-lexicographic order, pruned by local constraints.
    std::vector<std::vector<Row>> instances;
    std::vector<std::vector<Row>> frontier = {{}};
    for (std::size_t k = 0; k <= max_rows; ++k) {
      std::vector<std::vector<Row>> next;
      for (auto& inst : frontier) {
        Database single{{rel.name, inst}};
        bool ok = true;
        for (const auto& c : cs)
          if (local(c) && rel_of(c) == rel.name && !check_constraint(single, schema, c)) ok = false;
        // Every local constraint is prefix-closed, so a violating prefix can be dropped.
        if (!ok) continue;
        instances.push_back(inst);
        if (k < max_rows)
          for (const auto& t : tuples) {
            auto ext = inst;
            ext.push_back(t);
            next.push_back(std::move(ext));
          }
      }
      frontier = std::move(next);
    }
    names_.push_back(rel.name);
    choices_.push_back(std::move(instances));
  }
  pos_.assign(names_.size(), 0);
}

bool DatabaseEnumerator::advance() {
  for (std::size_t i = names_.size(); i-- > 0;) {
    if (++pos_[i] < choices_[i].size()) return true;
    pos_[i] = 0;
  }
  return false;
}

std::optional<Database> DatabaseEnumerator::next() {
  while (!done_) {
    if (started_ && !advance()) {
      done_ = true;
      break;
    }
    started_ = true;
    if (++inspected_ > cap_) throw Exhausted("database enumeration exceeded the cap of " + std::to_string(cap_));
    Database db;
    for (std::size_t i = 0; i < names_.size(); ++i) db[names_[i]] = choices_[i][pos_[i]];
    bool ok = true;
    for (const auto& c : cs_)
      if (!local(c) && !check_constraint(db, schema_, c)) {
        ok = false;
        break;
      }
    if (ok) return db;
  }
  return std::nullopt;
}

nlohmann::json database_to_json(const Database& db, const Schema& schema) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& rel : schema.relations()) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rows_of(db, rel.name)) {
      nlohmann::json t = nlohmann::json::object();
      for (std::size_t i = 0; i < rel.attrs.size(); ++i) {
        const Value& v = r[i];
        if (v.is_null()) t[rel.attrs[i].name] = nullptr;
        else if (rel.attrs[i].type == AttrType::Bool) t[rel.attrs[i].name] = v.as_bool();
        else t[rel.attrs[i].name] = v.as_int();
      }
      rows.push_back(t);
    }
    j[rel.name] = rows;
  }
  return j;
}

Database database_from_json(const nlohmann::json& j, const Schema& schema) {
  Database db;
  for (const auto& rel : schema.relations()) {
    auto& rows = db[rel.name];
    if (!j.contains(rel.name)) continue;
    for (const auto& t : j.at(rel.name)) {
      Row r;
      for (const auto& a : rel.attrs) {
        const auto& v = t.contains(a.name) ? t.at(a.name) : nlohmann::json();
        if (v.is_null()) r.push_back(Value::null());
        else if (v.is_boolean()) r.push_back(Value::boolean(v.get<bool>()));
        else if (v.is_number_integer()) r.push_back(a.type == AttrType::Bool ? Value::boolean(v.get<std::int64_t>() != 0)
                                                                            : Value::integer(v.get<std::int64_t>()));
        else throw ResolveError("unsupported value for " + rel.name + "." + a.name);
      }
      rows.push_back(std::move(r));
    }
  }
  return db;
}

std::string database_to_string(const Database& db) {
  std::ostringstream os;
  for (const auto& [name, rows] : db) {
    os << name << " = [";
    for (std::size_t i = 0; i < rows.size(); ++i) os << (i ? ", " : "") << row_to_string(rows[i]);
    os << "]\n";
  }
  return os.str();
}

} // namespace sqlbound
