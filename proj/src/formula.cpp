#include "sqlbound/formula.hpp"

#include <cctype>
#include <sstream>
#include <unordered_set>

#include "sqlbound/errors.hpp"

namespace sqlbound::smt {

namespace {

Term make(Kind k, Sort s, std::vector<Term> args = {}, std::int64_t value = 0, std::string symbol = {}) {
  return std::make_shared<const Node>(Node{k, s, value, std::move(symbol), std::move(args)});
}

std::int64_t ival(const Term& t) { return t->value; }

std::int64_t euclid_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b, r = a % b;
  if (r < 0) q += b > 0 ? -1 : 1;
  return q;
}

std::int64_t euclid_mod(std::int64_t a, std::int64_t b) { return a - b * euclid_div(a, b); }

Term compare(Kind k, const Term& a, const Term& b) {
  if (is_const_int(a) && is_const_int(b)) {
    std::int64_t x = ival(a), y = ival(b);
    switch (k) {
    case Kind::Lt: return boolean(x < y);
    case Kind::Le: return boolean(x <= y);
    case Kind::Gt: return boolean(x > y);
    default: return boolean(x >= y);
    }
  }
  return make(k, Sort::Bool, {a, b});
}

const char* sort_name(Sort s) {
  switch (s) {
  case Sort::Bool: return "Bool";
  case Sort::Int: return "Int";
  case Sort::Tuple: return "Tuple";
  }
  return "?";
}

const char* op_name(Kind k) {
  switch (k) {
  case Kind::Not: return "not";
  case Kind::And: return "and";
  case Kind::Or: return "or";
  case Kind::Implies: return "=>";
  case Kind::Eq: return "=";
  case Kind::Ite: return "ite";
  case Kind::Add: return "+";
  case Kind::Sub: return "-";
  case Kind::Neg: return "-";
  case Kind::Mul: return "*";
  case Kind::Div: return "div";
  case Kind::Mod: return "mod";
  case Kind::Lt: return "<";
  case Kind::Le: return "<=";
  case Kind::Gt: return ">";
  case Kind::Ge: return ">=";
  default: return "?";
  }
}

void print_to(std::ostream& os, const Term& t) {
  switch (t->kind) {
  case Kind::True: os << "true"; return;
  case Kind::False: os << "false"; return;
  case Kind::Int:
    if (t->value < 0) os << "(- " << std::to_string(t->value).substr(1) << ")";
    else os << t->value;
    return;
  case Kind::Var: os << symbol(t->symbol); return;
  case Kind::App:
    os << "(" << symbol(t->symbol);
    for (const auto& a : t->args) {
      os << " ";
      print_to(os, a);
    }
    os << ")";
    return;
  default:
    os << "(" << op_name(t->kind);
    for (const auto& a : t->args) {
      os << " ";
      print_to(os, a);
    }
    os << ")";
  }
}

std::string ground_text(const GroundValue& v) {
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  return std::get<std::string>(v);
}

bool as_bool(const GroundValue& v) {
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  throw InternalError("expected a Bool value");
}

std::int64_t as_int(const GroundValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  throw InternalError("expected an Int value");
}

} // namespace

Term tru() {
  static const Term t = make(Kind::True, Sort::Bool);
  return t;
}

Term fls() {
  static const Term t = make(Kind::False, Sort::Bool);
  return t;
}

Term boolean(bool b) { return b ? tru() : fls(); }
Term integer(std::int64_t v) { return make(Kind::Int, Sort::Int, {}, v); }
Term var(const std::string& name, Sort sort) { return make(Kind::Var, sort, {}, 0, name); }
Term app(const std::string& fn, std::vector<Term> args, Sort sort) {
  return make(Kind::App, sort, std::move(args), 0, fn);
}

bool is_true(const Term& t) { return t->kind == Kind::True; }
bool is_false(const Term& t) { return t->kind == Kind::False; }
bool is_const_int(const Term& t) { return t->kind == Kind::Int; }

Term lnot(const Term& a) {
  if (is_true(a)) return fls();
  if (is_false(a)) return tru();
  if (a->kind == Kind::Not) return a->args[0];
  return make(Kind::Not, Sort::Bool, {a});
}

Term land(std::vector<Term> args) {
  std::vector<Term> out;
  for (auto& a : args) {
    if (is_true(a)) continue;
    if (is_false(a)) return fls();
    if (a->kind == Kind::And) out.insert(out.end(), a->args.begin(), a->args.end());
    else out.push_back(std::move(a));
  }
  if (out.empty()) return tru();
  if (out.size() == 1) return out[0];
  return make(Kind::And, Sort::Bool, std::move(out));
}

Term land(const Term& a, const Term& b) { return land(std::vector<Term>{a, b}); }

Term lor(std::vector<Term> args) {
  std::vector<Term> out;
  for (auto& a : args) {
    if (is_false(a)) continue;
    if (is_true(a)) return tru();
    if (a->kind == Kind::Or) out.insert(out.end(), a->args.begin(), a->args.end());
    else out.push_back(std::move(a));
  }
  if (out.empty()) return fls();
  if (out.size() == 1) return out[0];
  return make(Kind::Or, Sort::Bool, std::move(out));
}

Term lor(const Term& a, const Term& b) { return lor(std::vector<Term>{a, b}); }

Term implies(const Term& a, const Term& b) {
  if (is_false(a) || is_true(b)) return tru();
  if (is_true(a)) return b;
  if (is_false(b)) return lnot(a);
  return make(Kind::Implies, Sort::Bool, {a, b});
}

Term eq(const Term& a, const Term& b) {
  if (a == b) return tru();
  if (is_const_int(a) && is_const_int(b)) return boolean(ival(a) == ival(b));
  if (a->sort == Sort::Bool) {
    if (is_true(a)) return b;
    if (is_true(b)) return a;
    if (is_false(a)) return lnot(b);
    if (is_false(b)) return lnot(a);
  }
  return make(Kind::Eq, Sort::Bool, {a, b});
}

Term ite(const Term& c, const Term& a, const Term& b) {
  if (is_true(c)) return a;
  if (is_false(c)) return b;
  if (a == b) return a;
  if (a->sort == Sort::Bool) {
    if (is_true(a) && is_false(b)) return c;
    if (is_false(a) && is_true(b)) return lnot(c);
  }
  if (is_const_int(a) && is_const_int(b) && ival(a) == ival(b)) return a;
  return make(Kind::Ite, a->sort, {c, a, b});
}

Term add(std::vector<Term> args) {
  std::vector<Term> out;
  std::int64_t k = 0;
  for (auto& a : args) {
    if (is_const_int(a)) k += ival(a);
    else if (a->kind == Kind::Add) {
      for (const auto& x : a->args) {
        if (is_const_int(x)) k += ival(x);
        else out.push_back(x);
      }
    } else {
      out.push_back(std::move(a));
    }
  }
  if (k != 0 || out.empty()) out.push_back(integer(k));
  if (out.size() == 1) return out[0];
  return make(Kind::Add, Sort::Int, std::move(out));
}

Term add(const Term& a, const Term& b) { return add(std::vector<Term>{a, b}); }

Term sub(const Term& a, const Term& b) {
  if (is_const_int(b) && ival(b) == 0) return a;
  if (is_const_int(a) && is_const_int(b)) return integer(ival(a) - ival(b));
  return make(Kind::Sub, Sort::Int, {a, b});
}

Term neg(const Term& a) {
  if (is_const_int(a)) return integer(-ival(a));
  if (a->kind == Kind::Neg) return a->args[0];
  return make(Kind::Neg, Sort::Int, {a});
}

Term mul(const Term& a, const Term& b) {
  if (is_const_int(a) && is_const_int(b)) return integer(ival(a) * ival(b));
  for (const auto& [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
    if (is_const_int(x) && ival(x) == 0) return integer(0);
    if (is_const_int(x) && ival(x) == 1) return y;
  }
  return make(Kind::Mul, Sort::Int, {a, b});
}

Term div(const Term& a, const Term& b) {
  if (is_const_int(a) && is_const_int(b) && ival(b) != 0) return integer(euclid_div(ival(a), ival(b)));
  if (is_const_int(b) && ival(b) == 1) return a;
  return make(Kind::Div, Sort::Int, {a, b});
}

Term mod(const Term& a, const Term& b) {
  if (is_const_int(a) && is_const_int(b) && ival(b) != 0) return integer(euclid_mod(ival(a), ival(b)));
  return make(Kind::Mod, Sort::Int, {a, b});
}

Term lt(const Term& a, const Term& b) { return compare(Kind::Lt, a, b); }
Term le(const Term& a, const Term& b) { return compare(Kind::Le, a, b); }
Term gt(const Term& a, const Term& b) { return compare(Kind::Gt, a, b); }
Term ge(const Term& a, const Term& b) { return compare(Kind::Ge, a, b); }

void Formula::declare(const std::string& name, std::vector<Sort> args, Sort result) {
  if (!names_.insert(name).second) return;
  decls_.push_back(FunctionDecl{name, std::move(args), result});
}

void Formula::add(const Term& t) {
  if (t->sort != Sort::Bool) throw InternalError("asserting a non-Bool term");
  if (is_true(t)) return;
  assertions_.push_back(t);
}

Term Formula::conjunction() const { return land(assertions_); }

bool Formula::nonlinear() const {
  std::unordered_set<const Node*> seen;
  std::vector<const Node*> stack;
  for (const auto& a : assertions_) stack.push_back(a.get());
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    if (n->kind == Kind::Mul && !is_const_int(n->args[0]) && !is_const_int(n->args[1])) return true;
    if ((n->kind == Kind::Div || n->kind == Kind::Mod) && !is_const_int(n->args[1])) return true;
    for (const auto& a : n->args) stack.push_back(a.get());
  }
  return false;
}

std::string symbol(const std::string& name) {
  static const std::string extra = "~!@$%^&*_-+=<>.?/";
  bool simple = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0]));
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && extra.find(c) == std::string::npos) simple = false;
  return simple ? name : "|" + name + "|";
}

std::string print(const Term& t) {
  std::ostringstream os;
  print_to(os, t);
  return os.str();
}

std::string emit_smtlib(const Formula& f, const std::vector<Term>& get_values) {
  std::ostringstream os;
  os << "(set-logic " << (f.nonlinear() ? "QF_UFNIA" : "QF_UFLIA") << ")\n";
  os << "(set-option :produce-models true)\n";
  os << "(declare-sort Tuple 0)\n";
  for (const auto& d : f.decls()) {
    os << "(declare-fun " << symbol(d.name) << " (";
    for (std::size_t i = 0; i < d.args.size(); ++i) os << (i ? " " : "") << sort_name(d.args[i]);
    os << ") " << sort_name(d.result) << ")\n";
  }
  const auto& as = f.assertions();
  if (as.empty()) {
    os << "(assert true)\n";
  } else if (as.size() == 1) {
    os << "(assert " << print(as[0]) << ")\n";
  } else {
    os << "(assert (and\n";
    for (const auto& a : as) os << "  " << print(a) << "\n";
    os << "))\n";
  }
  os << "(check-sat)\n";
  if (!get_values.empty()) {
    os << "(get-value (";
    for (std::size_t i = 0; i < get_values.size(); ++i) os << (i ? " " : "") << print(get_values[i]);
    os << "))\n";
  }
  os << "(exit)\n";
  return os.str();
}

std::string Interpretation::key(const std::string& fn, const std::vector<GroundValue>& args) {
  std::string k = fn;
  for (const auto& a : args) {
    k += ' ';
    k += ground_text(a);
  }
  return k;
}

void Interpretation::set_app(const std::string& fn, const std::vector<GroundValue>& args, GroundValue v) {
  apps_[key(fn, args)] = std::move(v);
}

const GroundValue* Interpretation::find_const(const std::string& name) const {
  auto f = consts_.find(name);
  return f == consts_.end() ? nullptr : &f->second;
}

const GroundValue* Interpretation::find_app(const std::string& fn, const std::vector<GroundValue>& args) const {
  auto f = apps_.find(key(fn, args));
  return f == apps_.end() ? nullptr : &f->second;
}

GroundValue evaluate(const Term& t, const Interpretation& interp) {
  auto b = [&](std::size_t i) { return as_bool(evaluate(t->args[i], interp)); };
  auto n = [&](std::size_t i) { return as_int(evaluate(t->args[i], interp)); };
  switch (t->kind) {
  case Kind::True: return true;
  case Kind::False: return false;
  case Kind::Int: return t->value;
  case Kind::Var: {
    if (const GroundValue* v = interp.find_const(t->symbol)) return *v;
    if (t->sort == Sort::Tuple) return t->symbol;
    throw InternalError("unbound symbol " + t->symbol);
  }
  case Kind::App: {
    std::vector<GroundValue> args;
    for (const auto& a : t->args) args.push_back(evaluate(a, interp));
    if (const GroundValue* v = interp.find_app(t->symbol, args)) return *v;
    throw InternalError("uninterpreted application " + print(t) + " has no value");
  }
  case Kind::Not: return !b(0);
  case Kind::And:
    for (std::size_t i = 0; i < t->args.size(); ++i)
      if (!b(i)) return false;
    return true;
  case Kind::Or:
    for (std::size_t i = 0; i < t->args.size(); ++i)
      if (b(i)) return true;
    return false;
  case Kind::Implies: return !b(0) || b(1);
  case Kind::Eq: {
    GroundValue x = evaluate(t->args[0], interp), y = evaluate(t->args[1], interp);
    return x == y;
  }
  case Kind::Ite: return b(0) ? evaluate(t->args[1], interp) : evaluate(t->args[2], interp);
  case Kind::Add: {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < t->args.size(); ++i) s += n(i);
    return s;
  }
  case Kind::Sub: return n(0) - n(1);
  case Kind::Neg: return -n(0);
  case Kind::Mul: return n(0) * n(1);
  case Kind::Div:
  case Kind::Mod: {
    std::int64_t x = n(0), y = n(1);
    if (y == 0) throw EvalError("ground division by zero");
    return t->kind == Kind::Div ? euclid_div(x, y) : euclid_mod(x, y);
  }
  case Kind::Lt: return n(0) < n(1);
  case Kind::Le: return n(0) <= n(1);
  case Kind::Gt: return n(0) > n(1);
  case Kind::Ge: return n(0) >= n(1);
  }
  throw InternalError("bad term kind");
}

} // namespace sqlbound::smt
