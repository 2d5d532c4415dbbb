#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sqlbound/formula.hpp"

namespace sqlbound {

struct SolverConfig {
  std::string binary;
  std::vector<std::string> args;

  // SOLVER_BIN / SOLVER_ARGS, falling back to the z3 found at configure time.
  static SolverConfig from_env();
};

enum class SatStatus { Sat, Unsat, Unknown };
const char* to_string(SatStatus s);

class Model {
public:
  void set(const std::string& term_text, smt::GroundValue v) { values_[term_text] = std::move(v); }
  const smt::GroundValue* find(const smt::Term& t) const;
  const smt::GroundValue* find(const std::string& term_text) const;
  std::size_t size() const { return values_.size(); }

private:
  std::map<std::string, smt::GroundValue> values_;
};

struct SatResult {
  SatStatus status = SatStatus::Unknown;
  // "timeout" or "solver-error" when Unknown.
  std::string reason;
  std::string stderr_text;
  Model model;
  double elapsed_ms = 0;
};

// Runs one solver process on the script. values are the terms whose (get-value)
// answers were requested by the script, in order.
SatResult check_sat(const std::string& script, std::int64_t timeout_ms,
                    const std::vector<smt::Term>& values = {},
                    const SolverConfig& config = SolverConfig::from_env());

// Parses "(get-value ...)" output: ((term value) ...).
std::vector<smt::GroundValue> parse_get_value(const std::string& text);

} // namespace sqlbound
