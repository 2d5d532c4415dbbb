#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sqlbound/ast.hpp"
#include "sqlbound/schema.hpp"

namespace testkit {

using namespace sqlbound;

// Random well-formed queries over a schema. Output is unresolved; pass it
// through resolve_names and check_well_formed.
class QueryGenerator {
public:
  QueryGenerator(const Schema& schema, std::uint64_t seed);

  // joins bounds the number of join/product/set-operation nodes.
  QueryPtr generate(int depth, int joins = 1, bool allow_order = true);
  // Forms used so far, e.g. "left-join", "in-query", "avg".
  const std::set<std::string>& used() const { return used_; }
  static const std::vector<std::string>& all_forms();

private:
  struct Col {
    std::string qualifier;
    std::string name;
    AttrType type;
  };
  struct Gen {
    QueryPtr q;
    std::vector<Col> cols;
  };
  struct Cte {
    std::string name;
    std::vector<Col> cols;
  };

  Gen query(int depth);
  Gen leaf();
  Gen project(int depth);
  Gen aggregate(int depth);
  Gen filter(int depth);
  Gen rename(int depth);
  Gen distinct(int depth);
  Gen join(int depth);
  Gen setop(int depth);
  Gen group_by(int depth);
  Gen with(int depth);
  Gen order_by(int depth);

  Gen normalize(Gen g);
  Gen as_ints(Gen g, std::size_t k);
  Gen renamed(Gen g);

  ExprPtr int_expr(const std::vector<Col>& cols, int depth);
  ExprPtr agg_expr(const std::vector<Col>& cols);
  PredPtr pred(const std::vector<Col>& cols, int depth, bool subqueries = true);
  PredPtr having(const std::vector<Col>& keys, const std::vector<Col>& cols);
  Value constant(bool allow_null = true);

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::string fresh(const char* prefix) { return prefix + std::to_string(++counter_); }
  void use(const std::string& form) { used_.insert(form); }

  const Schema& schema_;
  std::mt19937_64 rng_;
  int counter_ = 0;
  int joins_left_ = 0;
  std::vector<Cte> ctes_;
  std::set<std::string> used_;
};

// Random constraint strings in the problem-file syntax.
std::vector<std::string> random_constraints(const Schema& schema, std::mt19937_64& rng);

} // namespace testkit
