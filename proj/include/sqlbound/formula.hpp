#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace sqlbound::smt {

enum class Sort { Bool, Int, Tuple };

enum class Kind {
  True, False, Int, Var, App,
  Not, And, Or, Implies, Eq, Ite,
  Add, Sub, Neg, Mul, Div, Mod,
  Lt, Le, Gt, Ge,
};

struct Node;
using Term = std::shared_ptr<const Node>;

struct Node {
  Kind kind;
  Sort sort;
  std::int64_t value = 0;
  std::string symbol;
  std::vector<Term> args;
};

Term tru();
Term fls();
Term boolean(bool b);
Term integer(std::int64_t v);
Term var(const std::string& name, Sort sort);
Term app(const std::string& fn, std::vector<Term> args, Sort sort);

Term lnot(const Term& a);
Term land(std::vector<Term> args);
Term land(const Term& a, const Term& b);
Term lor(std::vector<Term> args);
Term lor(const Term& a, const Term& b);
Term implies(const Term& a, const Term& b);
Term eq(const Term& a, const Term& b);
Term ite(const Term& c, const Term& a, const Term& b);
Term add(std::vector<Term> args);
Term add(const Term& a, const Term& b);
Term sub(const Term& a, const Term& b);
Term neg(const Term& a);
Term mul(const Term& a, const Term& b);
// SMT-LIB div/mod (Euclidean).
Term div(const Term& a, const Term& b);
Term mod(const Term& a, const Term& b);
Term lt(const Term& a, const Term& b);
Term le(const Term& a, const Term& b);
Term gt(const Term& a, const Term& b);
Term ge(const Term& a, const Term& b);

bool is_true(const Term& t);
bool is_false(const Term& t);
bool is_const_int(const Term& t);

struct FunctionDecl {
  std::string name;
  std::vector<Sort> args;
  Sort result;
};

class Formula {
public:
  void declare(const std::string& name, std::vector<Sort> args, Sort result);
  bool declared(const std::string& name) const { return names_.count(name) > 0; }
  void add(const Term& t);
  const std::vector<FunctionDecl>& decls() const { return decls_; }
  const std::vector<Term>& assertions() const { return assertions_; }
  Term conjunction() const;
  bool nonlinear() const;

private:
  std::vector<FunctionDecl> decls_;
  std::set<std::string> names_;
  std::vector<Term> assertions_;
};

std::string symbol(const std::string& name);
std::string print(const Term& t);
// Full script; get_values are queried after check-sat.
std::string emit_smtlib(const Formula& f, const std::vector<Term>& get_values = {});

// Ground evaluation of a term under an interpretation of its free symbols.
using GroundValue = std::variant<bool, std::int64_t, std::string>;

class Interpretation {
public:
  void set_const(const std::string& name, GroundValue v) { consts_[name] = std::move(v); }
  void set_app(const std::string& fn, const std::vector<GroundValue>& args, GroundValue v);
  const GroundValue* find_const(const std::string& name) const;
  const GroundValue* find_app(const std::string& fn, const std::vector<GroundValue>& args) const;

private:
  static std::string key(const std::string& fn, const std::vector<GroundValue>& args);
  std::map<std::string, GroundValue> consts_;
  std::map<std::string, GroundValue> apps_;
};

// Tuple-sorted constants denote themselves unless bound. Throws on unbound symbols.
GroundValue evaluate(const Term& t, const Interpretation& interp);

} // namespace sqlbound::smt
