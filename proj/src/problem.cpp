#include "lexer.hpp"
#include "sqlbound/errors.hpp"
#include "sqlbound/frontend.hpp"

namespace sqlbound {

using detail::Token;
using detail::TokenStream;

std::int64_t StringTable::intern(const std::string& s) {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i] == s) return kBase + static_cast<std::int64_t>(i);
  entries_.push_back(s);
  return kBase + static_cast<std::int64_t>(entries_.size() - 1);
}

std::optional<std::string> StringTable::lookup(std::int64_t code) const {
  if (code < kBase || code >= kBase + static_cast<std::int64_t>(entries_.size())) return std::nullopt;
  return entries_[code - kBase];
}

nlohmann::json StringTable::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < entries_.size(); ++i)
    j[entries_[i]] = kBase + static_cast<std::int64_t>(i);
  return j;
}

namespace {

class ConstraintParser {
public:
  ConstraintParser(std::string_view text, const Schema& schema, StringTable& strings)
    : ts_(detail::tokenize(text)), schema_(schema), strings_(strings) {}

  Constraint parse() {
    std::string kind = detail::upper(ts_.expect_ident());
    ts_.expect_sym("(");
    const RelationSchema& rel = relation();
    Constraint c;
    if (kind == "PK") {
      ts_.expect_sym(",");
      PrimaryKey pk{rel.name, {}};
      if (ts_.accept_sym("[")) {
        do {
          pk.attrs.push_back(attr(rel));
        } while (ts_.accept_sym(","));
        ts_.expect_sym("]");
      } else {
        pk.attrs.push_back(attr(rel));
      }
      c = pk;
    } else if (kind == "FK") {
      ts_.expect_sym(",");
      int a = attr(rel);
      ts_.expect_sym(",");
      const RelationSchema& ref = relation();
      ts_.expect_sym(",");
      c = ForeignKey{rel.name, a, ref.name, attr(ref)};
    } else if (kind == "NOTNULL") {
      ts_.expect_sym(",");
      c = NotNull{rel.name, attr(rel)};
    } else if (kind == "CHECK") {
      ts_.expect_sym(",");
      c = Check{rel.name, psi_or(rel)};
    } else if (kind == "INC") {
      ts_.expect_sym(",");
      int a = attr(rel);
      if (rel.attrs[a].type != AttrType::Int)
        throw ResolveError("Inc attribute " + rel.name + "." + rel.attrs[a].name + " is not Int");
      ts_.expect_sym(",");
      bool neg = ts_.accept_sym("-");
      if (ts_.peek().kind != Token::Int) ts_.fail("expected integer start value");
      std::int64_t v = std::stoll(ts_.take().text);
      c = AutoIncrement{rel.name, a, neg ? -v : v};
    } else {
      throw ResolveError("unknown constraint kind " + kind);
    }
    ts_.expect_sym(")");
    if (!ts_.at_end()) ts_.fail("unexpected trailing input");
    return c;
  }

private:
  const RelationSchema& relation() {
    std::string name = ts_.expect_ident();
    const RelationSchema* r = schema_.find(name);
    if (!r) throw ResolveError("constraint references unknown relation " + name);
    return *r;
  }

  int attr(const RelationSchema& rel) {
    std::string name = ts_.expect_ident();
    if (ts_.accept_sym(".")) {
      if (!detail::iequals(name, rel.name)) throw ResolveError("attribute qualifier " + name + " is not " + rel.name);
      name = ts_.expect_ident();
    }
    int i = rel.index_of(name);
    if (i < 0) throw ResolveError("constraint references unknown attribute " + rel.name + "." + name);
    return i;
  }

  bool at_attr(const RelationSchema& rel) const {
    const Token& t = ts_.peek();
    if (t.kind != Token::Ident && t.kind != Token::Quoted) return false;
    return rel.index_of(t.text) >= 0 || (ts_.is_sym(".", 1) && detail::iequals(t.text, rel.name));
  }

  Value value() {
    bool neg = ts_.accept_sym("-");
    const Token& t = ts_.peek();
    if (t.kind == Token::Int) {
      std::int64_t v = std::stoll(ts_.take().text);
      return Value::integer(neg ? -v : v);
    }
    if (neg) ts_.fail("expected integer");
    if (t.kind == Token::Str) return Value::integer(strings_.intern(ts_.take().text));
    if (ts_.accept_kw("TRUE")) return Value::boolean(true);
    if (ts_.accept_kw("FALSE")) return Value::boolean(false);
    if (ts_.is_kw("NULL")) ts_.fail("null is not a check value (use NotNull)");
    ts_.fail("expected value");
  }

  static bool cmp(const Token& t, CmpOp& op) {
    if (t.kind != Token::Sym) return false;
    if (t.text == "=" || t.text == "==") op = CmpOp::Eq;
    else if (t.text == "<>" || t.text == "!=") op = CmpOp::Ne;
    else if (t.text == "<") op = CmpOp::Lt;
    else if (t.text == "<=") op = CmpOp::Le;
    else if (t.text == ">") op = CmpOp::Gt;
    else if (t.text == ">=") op = CmpOp::Ge;
    else return false;
    return true;
  }

  CheckPredPtr mk(CheckPred p) { return std::make_shared<const CheckPred>(std::move(p)); }

  CheckPredPtr psi_or(const RelationSchema& rel) {
    CheckPredPtr lhs = psi_and(rel);
    while (ts_.accept_kw("OR")) lhs = mk(CheckPred{CheckPred::Or{lhs, psi_and(rel)}});
    return lhs;
  }

  CheckPredPtr psi_and(const RelationSchema& rel) {
    CheckPredPtr lhs = psi_not(rel);
    while (ts_.accept_kw("AND")) lhs = mk(CheckPred{CheckPred::And{lhs, psi_not(rel)}});
    return lhs;
  }

  CheckPredPtr psi_not(const RelationSchema& rel) {
    if (ts_.accept_kw("NOT")) return mk(CheckPred{CheckPred::Not{psi_not(rel)}});
    if (ts_.accept_sym("(")) {
      CheckPredPtr p = psi_or(rel);
      ts_.expect_sym(")");
      return p;
    }
    return atom(rel);
  }

  CheckPredPtr atom(const RelationSchema& rel) {
    if (!at_attr(rel)) {
      Value v = value();
      CmpOp op;
      if (!cmp(ts_.peek(), op)) ts_.fail("expected comparison");
      ts_.take();
      return mk(CheckPred{CheckPred::AttrConst{attr(rel), flip(op), v}});
    }
    int a = attr(rel);
    bool negated = false;
    if (ts_.is_kw("NOT") && ts_.is_kw("IN", 1)) {
      ts_.take();
      negated = true;
    }
    if (ts_.accept_kw("IN")) {
      std::string close = ts_.accept_sym("[") ? "]" : (ts_.expect_sym("("), ")");
      std::vector<Value> vals;
      do {
        vals.push_back(value());
      } while (ts_.accept_sym(","));
      ts_.expect_sym(close);
      CheckPredPtr p = mk(CheckPred{CheckPred::InValues{a, vals}});
      return negated ? mk(CheckPred{CheckPred::Not{p}}) : p;
    }
    CmpOp op;
    if (!cmp(ts_.peek(), op)) ts_.fail("expected comparison or IN");
    ts_.take();
    if (at_attr(rel)) return mk(CheckPred{CheckPred::AttrAttr{a, op, attr(rel)}});
    return mk(CheckPred{CheckPred::AttrConst{a, op, value()}});
  }

  TokenStream ts_;
  const Schema& schema_;
  StringTable& strings_;
};

} // namespace

Constraint parse_constraint(std::string_view text, const Schema& schema, StringTable& strings) {
  return ConstraintParser(text, schema, strings).parse();
}

Schema parse_schema(const nlohmann::json& j) {
  if (!j.is_array()) throw ResolveError("schema must be an array");
  std::vector<RelationSchema> rels;
  for (const auto& r : j) {
    RelationSchema rs;
    rs.name = r.at("name").get<std::string>();
    for (const auto& a : r.at("attrs")) {
      AttributeDef d;
      if (a.is_string()) {
        d.name = a.get<std::string>();
      } else {
        d.name = a.at("name").get<std::string>();
        std::string t = detail::upper(a.value("type", std::string("int")));
        d.type = (t == "BOOL" || t == "BOOLEAN") ? AttrType::Bool : AttrType::Int;
      }
      rs.attrs.push_back(d);
    }
    rels.push_back(std::move(rs));
  }
  return Schema(std::move(rels));
}

Problem parse_problem(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid problem JSON: ") + e.what(), 1, static_cast<int>(e.byte));
  }
  Problem p;
  try {
    p.schema = parse_schema(j.at("schema"));
    if (j.contains("constraints"))
      for (const auto& c : j.at("constraints"))
        p.constraints.push_back(parse_constraint(c.get<std::string>(), p.schema, p.strings));
    p.q1 = parse_query(j.at("q1").get<std::string>(), p.schema, p.strings);
    p.q2 = parse_query(j.at("q2").get<std::string>(), p.schema, p.strings);
    if (j.contains("bound")) p.options.bound = j.at("bound").get<int>();
    if (j.contains("max_bound")) p.options.max_bound = j.at("max_bound").get<int>();
    if (j.contains("timeout_ms")) p.options.timeout_ms = j.at("timeout_ms").get<std::int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ResolveError(std::string("malformed problem file: ") + e.what());
  }
  return p;
}

} // namespace sqlbound
