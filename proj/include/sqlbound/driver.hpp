#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqlbound/counterexample.hpp"
#include "sqlbound/frontend.hpp"
#include "sqlbound/solver.hpp"

namespace sqlbound {

enum class Status { Checked, Refuted, Unsupported, Unknown };
const char* to_string(Status s);

struct Timings {
  double encode_ms = 0;
  double solve_ms = 0;
  double total_ms = 0;
};

struct VerificationResult {
  Status status = Status::Unknown;
  // Largest verified bound (checked) or refuting bound (refuted).
  int bound = 0;
  std::optional<Counterexample> counterexample;
  std::string reason;
  std::vector<std::string> warnings;
  Timings timings;

  int exit_code() const;
  nlohmann::json to_json(const Schema& schema, const StringTable* strings = nullptr) const;
};

struct VerifyOptions {
  std::int64_t timeout_ms = 600000;
  // Directory receiving one .smt2 file per solver call; empty disables.
  std::string dump_dir;
  // File stem for dumped scripts; the bound is appended.
  std::string dump_name = "problem";
  SolverConfig solver = SolverConfig::from_env();
};

struct Encoding {
  SymbolicDatabase db;
  smt::Formula formula;
  std::vector<smt::Term> model_terms;
  bool list_semantics = false;
  std::vector<std::string> warnings;
  std::string script() const;
};

// Φ_C ∧ Φ_Q1 ∧ Φ_Q2 ∧ ¬Equal at bound n.
Encoding encode_equivalence(const Query& q1, const Query& q2, const Schema& schema,
                            const ConstraintSet& cs, int n);

VerificationResult verify_at_bound(const Query& q1, const Query& q2, const Schema& schema,
                                   const ConstraintSet& cs, int n, const VerifyOptions& opts);
VerificationResult verify_incremental(const Query& q1, const Query& q2, const Schema& schema,
                                      const ConstraintSet& cs, int max_n,
                                      const VerifyOptions& opts);

// Uses the problem's bound (single) or max_bound (incremental, default 2).
VerificationResult verify_problem(const Problem& p, VerifyOptions opts);

} // namespace sqlbound
