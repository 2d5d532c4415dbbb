#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "random_query.hpp"
#include "sqlbound/errors.hpp"
#include "testkit.hpp"

using namespace sqlbound;
using namespace testkit;

namespace {

struct EmpDept {
  Parsed p;
  Database db;
  Value A, B, C, D;

  EmpDept() {
    p.schema = schema_of("EMP(eid, ename, did); DEPT(id, dname)");
    A = I(p.strings.intern("A"));
    B = I(p.strings.intern("B"));
    C = I(p.strings.intern("C"));
    D = I(p.strings.intern("D"));
    db = {{"EMP", {{I(1), A, I(11)}, {I(2), B, I(12)}}}, {"DEPT", {{I(10), C}, {I(11), D}}}};
  }
  std::vector<Row> run(const std::string& sql) { return eval_query(db, p.schema, *p.parse(sql)); }
};

TriBool tri_of(const Value& v) {
  if (v.is_null()) return TriBool::Null;
  return v.as_int() == 1 ? TriBool::True : TriBool::False;
}

} // namespace

TEST(Eval, InnerJoinTable) {
  EmpDept t;
  EXPECT_EQ(t.run("SELECT * FROM EMP JOIN DEPT ON did = id"), (std::vector<Row>{{I(1), t.A, I(11), I(11), t.D}}));
}

TEST(Eval, LeftJoinTable) {
  EmpDept t;
  EXPECT_EQ(t.run("SELECT * FROM EMP LEFT JOIN DEPT ON did = id"),
            (std::vector<Row>{{I(1), t.A, I(11), I(11), t.D}, {I(2), t.B, I(12), N, N}}));
}

TEST(Eval, RightJoinTable) {
  EmpDept t;
  EXPECT_EQ(t.run("SELECT * FROM EMP RIGHT JOIN DEPT ON did = id"),
            (std::vector<Row>{{N, N, N, I(10), t.C}, {I(1), t.A, I(11), I(11), t.D}}));
}

TEST(Eval, FullJoinTable) {
  EmpDept t;
  EXPECT_EQ(t.run("SELECT * FROM EMP FULL JOIN DEPT ON did = id"),
            (std::vector<Row>{{I(1), t.A, I(11), I(11), t.D}, {I(2), t.B, I(12), N, N}, {N, N, N, I(10), t.C}}));
}

TEST(Eval, ProductTable) {
  EmpDept t;
  EXPECT_EQ(t.run("SELECT * FROM EMP, DEPT"),
            (std::vector<Row>{{I(1), t.A, I(11), I(10), t.C},
                              {I(1), t.A, I(11), I(11), t.D},
                              {I(2), t.B, I(12), I(10), t.C},
                              {I(2), t.B, I(12), I(11), t.D}}));
}

TEST(Eval, ProductWithEmptyIsEmpty) {
  EmpDept t;
  t.db["DEPT"].clear();
  EXPECT_TRUE(t.run("SELECT * FROM EMP, DEPT").empty());
}

TEST(Eval, ThreeValuedTruthTables) {
  // Rows encode ⊤ as 1, ⊥ as 0, Null as Null; cast(a = 1) recovers the truth value.
  Parsed p;
  p.schema = schema_of("T(a, b)");
  const Value vals[] = {I(1), I(0), N};
  const TriBool expect_and[3][3] = {{TriBool::True, TriBool::False, TriBool::Null},
                                    {TriBool::False, TriBool::False, TriBool::False},
                                    {TriBool::Null, TriBool::False, TriBool::Null}};
  const TriBool expect_or[3][3] = {{TriBool::True, TriBool::True, TriBool::True},
                                   {TriBool::True, TriBool::False, TriBool::Null},
                                   {TriBool::True, TriBool::Null, TriBool::Null}};
  QueryPtr qand = p.parse("(project (rel T) (items (cast (and (= (col a) 1) (= (col b) 1)))))");
  QueryPtr qor = p.parse("(project (rel T) (items (cast (or (= (col a) 1) (= (col b) 1)))))");
  QueryPtr qnot = p.parse("(project (rel T) (items (cast (not (= (col a) 1)))))");
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Database db{{"T", {{vals[i], vals[j]}}}};
      EXPECT_EQ(tri_of(eval_query(db, p.schema, *qand)[0][0]), expect_and[i][j]) << i << j;
      EXPECT_EQ(tri_of(eval_query(db, p.schema, *qor)[0][0]), expect_or[i][j]) << i << j;
      EXPECT_EQ(tri_and(tri_of(vals[i]), tri_of(vals[j])), expect_and[i][j]);
      EXPECT_EQ(tri_or(tri_of(vals[i]), tri_of(vals[j])), expect_or[i][j]);
    }
    Database db{{"T", {{vals[i], N}}}};
    const TriBool expect_not[] = {TriBool::False, TriBool::True, TriBool::Null};
    EXPECT_EQ(tri_of(eval_query(db, p.schema, *qnot)[0][0]), expect_not[i]);
  }
}

TEST(Eval, NullComparisonDropsRow) {
  Parsed p;
  p.schema = schema_of("R(a)");
  Database db{{"R", {{N}, {I(1)}}}};
  EXPECT_EQ(eval_query(db, p.schema, *p.parse("SELECT a FROM R WHERE a = a")), (std::vector<Row>{{I(1)}}));
  EXPECT_EQ(eval_query(db, p.schema, *p.parse("SELECT a FROM R WHERE NOT a = a")), (std::vector<Row>{}));
  EXPECT_EQ(eval_query(db, p.schema, *p.parse("SELECT a FROM R WHERE a IS NULL")), (std::vector<Row>{{N}}));
}

TEST(Eval, InFoldsDisjunctionFromFalse) {
  Parsed p;
  p.schema = schema_of("R(a); S(b)");
  Database db{{"R", {{N}, {I(1)}, {I(2)}}}, {"S", {{I(1)}, {N}}}};
  // 2 IN (1, Null) is Null, so NOT IN keeps nothing; Null NOT IN an empty set is ⊤.
  EXPECT_EQ(eval_query(db, p.schema, *p.parse("SELECT a FROM R WHERE a NOT IN (SELECT b FROM S)")),
            (std::vector<Row>{}));
  EXPECT_EQ(eval_query(db, p.schema, *p.parse("SELECT a FROM R WHERE a IN (SELECT b FROM S)")),
            (std::vector<Row>{{I(1)}}));
  EXPECT_EQ(eval_query(db, p.schema, *p.parse("SELECT a FROM R WHERE a NOT IN (SELECT b FROM S WHERE b > 5)")),
            (std::vector<Row>{{N}, {I(1)}, {I(2)}}));
}

TEST(Eval, Aggregates) {
  Parsed p;
  p.schema = schema_of("R(a)");
  auto agg = [&](const char* fn, std::vector<Row> rows) {
    Database db{{"R", rows}};
    return eval_query(db, p.schema, *p.parse(std::string("SELECT ") + fn + "(a) FROM R"))[0][0];
  };
  EXPECT_EQ(agg("COUNT", {{I(1)}, {N}, {I(2)}}), I(2));
  EXPECT_EQ(agg("SUM", {{N}, {N}}), N);
  EXPECT_EQ(agg("MIN", {{I(3)}, {N}, {I(1)}}), I(1));
  EXPECT_EQ(agg("MAX", {{I(3)}, {N}, {I(1)}}), I(3));
  EXPECT_EQ(agg("SUM", {{I(3)}, {N}, {I(-1)}}), I(2));
  EXPECT_EQ(agg("COUNT", {}), N);
  EXPECT_EQ(agg("AVG", {{I(1)}, {I(2)}}), I(1));
  EXPECT_EQ(agg("AVG", {{I(-1)}, {I(-2)}}), I(-1));
}

TEST(Eval, AvgComparesExactly) {
  Parsed p;
  p.schema = schema_of("R(g, a)");
  Database db{{"R", {{I(0), I(1)}, {I(0), I(2)}, {I(1), I(1)}}}};
  // Avg 1.5 > 1 holds for group 0 although its truncation is 1.
  EXPECT_EQ(eval_query(db, p.schema, *p.parse("SELECT g FROM R GROUP BY g HAVING AVG(a) > 1")),
            (std::vector<Row>{{I(0)}}));
}

TEST(Eval, DivisionByZeroIsAnError) {
  Parsed p;
  p.schema = schema_of("R(a)");
  Database db{{"R", {{I(0)}}}};
  EXPECT_THROW(eval_query(db, p.schema, *p.parse("SELECT 1 / a FROM R")), EvalError);
  EXPECT_THROW(eval_query(db, p.schema, *p.parse("SELECT 1 % a FROM R")), EvalError);
  Database nul{{"R", {{N}}}};
  EXPECT_EQ(eval_query(nul, p.schema, *p.parse("SELECT 1 / a FROM R")), (std::vector<Row>{{N}}));
}

TEST(Eval, TruncatingDivision) {
  Parsed p;
  p.schema = schema_of("R(a)");
  Database db{{"R", {{I(-7)}}}};
  EXPECT_EQ(eval_query(db, p.schema, *p.parse("SELECT a / 2, a % 2, 7 / -2, 7 % -2 FROM R")),
            (std::vector<Row>{{I(-3), I(-1), I(-3), I(1)}}));
}

TEST(Eval, SetOperationsUseListSemantics) {
  Parsed p;
  p.schema = schema_of("R(a); S(b)");
  Database db{{"R", {{I(1)}, {I(2)}, {I(1)}, {N}, {I(3)}}}, {"S", {{I(1)}, {N}, {I(4)}}}};
  auto run = [&](const char* op) {
    return eval_query(db, p.schema, *p.parse(std::string("SELECT a FROM R ") + op + " SELECT b FROM S"));
  };
  EXPECT_EQ(run("UNION ALL"), (std::vector<Row>{{I(1)}, {I(2)}, {I(1)}, {N}, {I(3)}, {I(1)}, {N}, {I(4)}}));
  EXPECT_EQ(run("UNION"), (std::vector<Row>{{I(1)}, {I(2)}, {N}, {I(3)}, {I(4)}}));
  EXPECT_EQ(run("INTERSECT"), (std::vector<Row>{{I(1)}, {N}}));
  EXPECT_EQ(run("EXCEPT"), (std::vector<Row>{{I(2)}, {I(3)}}));
  EXPECT_EQ(run("EXCEPT ALL"), (std::vector<Row>{{I(2)}, {I(1)}, {I(3)}}));
  EXPECT_EQ(run("INTERSECT ALL"), (std::vector<Row>{{I(1)}, {N}}));
}

TEST(Eval, DistinctKeepsFirstOccurrence) {
  Parsed p;
  p.schema = schema_of("R(a, b)");
  Database db{{"R", {{I(2), I(0)}, {I(1), N}, {I(2), I(0)}, {I(1), N}, {I(1), I(0)}}}};
  EXPECT_EQ(eval_query(db, p.schema, *p.parse("SELECT DISTINCT a, b FROM R")),
            (std::vector<Row>{{I(2), I(0)}, {I(1), N}, {I(1), I(0)}}));
}

TEST(Eval, GroupByKeepsFirstGroupOrder) {
  Parsed p;
  p.schema = schema_of("R(a, b)");
  Database db{{"R", {{I(2), I(5)}, {N, I(1)}, {I(2), I(7)}, {N, N}}}};
  EXPECT_EQ(eval_query(db, p.schema, *p.parse("SELECT a, SUM(b), COUNT(b) FROM R GROUP BY a")),
            (std::vector<Row>{{I(2), I(12), I(2)}, {N, I(1), I(1)}}));
  EXPECT_EQ(eval_query(db, p.schema, *p.parse("SELECT a FROM R GROUP BY a HAVING COUNT(b) > 1")),
            (std::vector<Row>{{I(2)}}));
}

TEST(Eval, OrderByNullIsSmallest) {
  Parsed p;
  p.schema = schema_of("R(a, b)");
  Database db{{"R", {{I(2), I(0)}, {N, I(1)}, {I(1), I(2)}, {I(2), I(3)}, {N, I(4)}}}};
  EXPECT_EQ(eval_query(db, p.schema, *p.parse("SELECT a, b FROM R ORDER BY a")),
            (std::vector<Row>{{N, I(1)}, {N, I(4)}, {I(1), I(2)}, {I(2), I(0)}, {I(2), I(3)}}));
  EXPECT_EQ(eval_query(db, p.schema, *p.parse("SELECT a, b FROM R ORDER BY a DESC")),
            (std::vector<Row>{{I(2), I(3)}, {I(2), I(0)}, {I(1), I(2)}, {N, I(4)}, {N, I(1)}}));
}

TEST(Eval, WithExtendsDatabase) {
  Parsed p;
  p.schema = schema_of("R(a)");
  Database db{{"R", {{I(1)}, {I(2)}}}};
  EXPECT_EQ(eval_query(db, p.schema, *p.parse("WITH W AS (SELECT a + 1 AS x FROM R) SELECT W.x FROM W, R WHERE W.x = R.a")),
            (std::vector<Row>{{I(2)}}));
}

TEST(Eval, PredicateAndExpressionEntryPoints) {
  Parsed p;
  p.schema = schema_of("R(a)");
  Database db;
  std::vector<Row> xs{{I(1)}, {N}, {I(4)}};
  StringTable st;
  QueryPtr q = p.parse("(filter (rel R) (and (= (col a) 1) (is-null (col a))))");
  const auto& f = std::get<Query::Filter>(q->node);
  EXPECT_EQ(eval_predicate(db, p.schema, xs, *f.pred), TriBool::False);
  QueryPtr s = p.parse("(project (rel R) (items (sum (col a))))");
  const auto& pr = std::get<Query::Project>(s->node);
  EXPECT_EQ(eval_expression(db, p.schema, xs, *pr.items[0].expr), I(5));
  const auto& agg = std::get<Expr::Agg>(pr.items[0].expr->node);
  EXPECT_EQ(eval_aggregate(db, p.schema, xs, AggFn::Max, *agg.arg), I(4));
  EXPECT_EQ(eval_aggregate(db, p.schema, {{N}}, AggFn::Count, *agg.arg), N);
}

TEST(Eval, RandomQueryProperties) {
  Schema schema = schema_of("R(a, b); S(c, d)");
  QueryGenerator gen(schema, 3);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 150; ++i) {
    QueryPtr q = resolve_names(gen.generate(2, 1, false), schema);
    check_well_formed(*q, schema);
    Database db = random_database(schema, rng, 3);
    std::vector<Row> base;
    try {
      base = eval_query(db, schema, *q);
    } catch (const EvalError&) {
      continue;
    }
    PredPtr phi = pred_or(make_pred(Pred::IsNull{col("", "", 0)}), make_pred(Pred::Cmp{CmpOp::Gt, col("", "", 0), lit(I(0))}));
    QueryPtr once = make_query(Query::Filter{q, phi});
    QueryPtr twice = make_query(Query::Filter{once, phi});
    EXPECT_TRUE(bag_equal(eval_query(db, schema, *once), eval_query(db, schema, *twice)));

    auto d = eval_query(db, schema, *make_query(Query::Distinct{q}));
    for (std::size_t x = 0; x < d.size(); ++x)
      for (std::size_t y = x + 1; y < d.size(); ++y) EXPECT_FALSE(d[x] == d[y]);
    auto support = base;
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    EXPECT_TRUE(bag_equal(d, support));

    AttrList attrs = infer_attributes(schema, *q);
    std::vector<ExprPtr> keys;
    for (std::size_t k = 0; k < attrs.size(); ++k) keys.push_back(col(attrs[k].qualifier, attrs[k].name, static_cast<int>(k)));
    QueryPtr sorted = make_query(Query::OrderBy{q, keys, true});
    auto s1 = eval_query(db, schema, *sorted);
    EXPECT_EQ(s1, eval_query(db, schema, *sorted));
    EXPECT_TRUE(std::is_sorted(s1.begin(), s1.end()));
  }
}

TEST(Eval, JoinIsFilteredProduct) {
  Parsed p;
  p.schema = schema_of("R(a, b); S(c, d)");
  std::mt19937_64 rng(9);
  QueryPtr j = p.parse("SELECT * FROM R JOIN S ON a = c OR b IS NULL");
  QueryPtr f = p.parse("SELECT * FROM R, S WHERE a = c OR b IS NULL");
  QueryPtr lj = p.parse("SELECT * FROM R LEFT JOIN S ON a < c");
  for (int i = 0; i < 100; ++i) {
    Database db = random_database(p.schema, rng, 3);
    EXPECT_TRUE(list_equal(eval_query(db, p.schema, *j), eval_query(db, p.schema, *f)));
    auto out = eval_query(db, p.schema, *lj);
    EXPECT_GE(out.size(), db["R"].size());
    for (const auto& r : db["R"]) {
      bool found = std::any_of(out.begin(), out.end(), [&](const Row& o) { return o[0] == r[0] && o[1] == r[1]; });
      EXPECT_TRUE(found);
    }
  }
}
