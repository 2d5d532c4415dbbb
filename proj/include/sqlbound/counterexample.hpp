#pragma once

#include <string>
#include <vector>

#include "sqlbound/encoder.hpp"
#include "sqlbound/eval.hpp"
#include "sqlbound/solver.hpp"

namespace sqlbound {

// Del and attribute applications of every base tuple.
std::vector<smt::Term> model_terms(const Schema& schema, const SymbolicDatabase& db);

// Del and attribute applications of an encoded relation's tuples.
std::vector<smt::Term> relation_terms(const EncodedRelation& r);

// Live tuples of r in list order, read from a model holding relation_terms(r).
std::vector<Row> read_relation(const Model& model, const EncodedRelation& r);

struct Counterexample {
  Database db;
  // Base-tuple attributes whose payload the model left unconstrained (set to 0).
  std::vector<std::string> defaulted;
};

// Validates the result against the constraints; a violation throws InternalError.
Counterexample build_counterexample(const Model& model, const SymbolicDatabase& db,
                                    const Schema& schema, const ConstraintSet& cs);

} // namespace sqlbound
