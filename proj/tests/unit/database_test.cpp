#include <gtest/gtest.h>

#include <set>

#include "sqlbound/errors.hpp"
#include "testkit.hpp"

using namespace sqlbound;
using namespace testkit;

TEST(Constraints, OverviewCounterexampleSatisfiesKeys) {
  Parsed p;
  p.schema = schema_of("F(uid, fid); L(id, pid)");
  ConstraintSet cs = p.constraints({"PK(F,[uid,fid])", "PK(L,[id])"});
  Database db{{"F", {{I(0), I(1)}}}, {"L", {{I(-1), I(0)}}}};
  EXPECT_TRUE(check_constraints(db, p.schema, cs));
}

TEST(Constraints, PrimaryKey) {
  Parsed p;
  p.schema = schema_of("R(a, b)");
  ConstraintSet pk = p.constraints({"PK(R,[a])"});
  EXPECT_FALSE(check_constraints({{"R", {{I(1), I(0)}, {I(1), I(2)}}}}, p.schema, pk));
  EXPECT_FALSE(check_constraints({{"R", {{N, I(0)}}}}, p.schema, pk));
  EXPECT_TRUE(check_constraints({{"R", {{I(1), N}, {I(2), N}}}}, p.schema, pk));
  ConstraintSet pk2 = p.constraints({"PK(R,[a,b])"});
  EXPECT_TRUE(check_constraints({{"R", {{I(1), I(0)}, {I(1), I(2)}}}}, p.schema, pk2));
  EXPECT_FALSE(check_constraints({{"R", {{I(1), I(0)}, {I(1), I(0)}}}}, p.schema, pk2));
}

TEST(Constraints, ForeignKeyAllowsNull) {
  Parsed p;
  p.schema = schema_of("R(a); S(b)");
  ConstraintSet fk = p.constraints({"FK(R,a,S,b)"});
  EXPECT_TRUE(check_constraints({{"R", {{I(1)}, {N}}}, {"S", {{I(1)}}}}, p.schema, fk));
  EXPECT_FALSE(check_constraints({{"R", {{I(2)}}}, {"S", {{I(1)}}}}, p.schema, fk));
  EXPECT_FALSE(check_constraints({{"R", {{I(2)}}}, {"S", {}}}, p.schema, fk));
}

TEST(Constraints, NotNullAndCheck) {
  Parsed p;
  p.schema = schema_of("R(a, b)");
  ConstraintSet nn = p.constraints({"NotNull(R,b)"});
  EXPECT_FALSE(check_constraints({{"R", {{I(1), N}}}}, p.schema, nn));
  EXPECT_TRUE(check_constraints({{"R", {{N, I(1)}}}}, p.schema, nn));
  ConstraintSet ck = p.constraints({"Check(R, a > 0 and a in [1,2,3])"});
  EXPECT_TRUE(check_constraints({{"R", {{I(2), N}}}}, p.schema, ck));
  EXPECT_FALSE(check_constraints({{"R", {{I(4), N}}}}, p.schema, ck));
  EXPECT_FALSE(check_constraints({{"R", {{N, N}}}}, p.schema, ck));
  ConstraintSet ne = p.constraints({"Check(R, a <> b)"});
  EXPECT_TRUE(check_constraints({{"R", {{I(1), I(2)}, {I(1), N}}}}, p.schema, ne));
  EXPECT_FALSE(check_constraints({{"R", {{I(1), I(1)}}}}, p.schema, ne));
  EXPECT_FALSE(check_constraints({{"R", {{N, N}}}}, p.schema, ne));
}

TEST(Constraints, AutoIncrement) {
  Parsed p;
  p.schema = schema_of("R(a)");
  ConstraintSet inc = p.constraints({"Inc(R,a,5)"});
  EXPECT_TRUE(check_constraints({{"R", {{I(5)}, {I(6)}, {I(7)}}}}, p.schema, inc));
  EXPECT_FALSE(check_constraints({{"R", {{I(5)}, {I(7)}}}}, p.schema, inc));
  EXPECT_FALSE(check_constraints({{"R", {{N}}}}, p.schema, inc));
  EXPECT_TRUE(check_constraints({{"R", {}}}, p.schema, inc));
}

TEST(Equality, BagAndList) {
  EXPECT_TRUE(bag_equal({{I(1)}, {I(2)}}, {{I(2)}, {I(1)}}));
  EXPECT_FALSE(list_equal({{I(1)}, {I(2)}}, {{I(2)}, {I(1)}}));
  EXPECT_TRUE(bag_equal({{N}}, {{N}}));
  EXPECT_TRUE(list_equal({{N}}, {{N}}));
  EXPECT_FALSE(bag_equal({{I(1)}, {I(1)}}, {{I(1)}}));
  EXPECT_FALSE(bag_equal({{N}}, {{I(0)}}));
  EXPECT_TRUE(bag_equal({}, {}));
  EXPECT_THROW(bag_equal({{I(1)}}, {{I(1), I(2)}}), EvalError);
}

TEST(Enumerator, SingleAttribute) {
  Schema s = schema_of("R(a)");
  ConstraintSet none;
  DatabaseEnumerator en(s, none, 1, {I(0), I(1)});
  std::vector<Database> out;
  while (auto db = en.next()) out.push_back(*db);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_TRUE(out[0].at("R").empty());
  EXPECT_EQ(out[1].at("R"), (std::vector<Row>{{I(0)}}));
  EXPECT_EQ(out[2].at("R"), (std::vector<Row>{{I(1)}}));
}

TEST(Enumerator, NotNullFilters) {
  Parsed p;
  p.schema = schema_of("R(a)");
  ConstraintSet nn = p.constraints({"NotNull(R,a)"});
  DatabaseEnumerator en(p.schema, nn, 1, {N, I(0)});
  int n = 0;
  while (auto db = en.next()) {
    ++n;
    for (const auto& r : db->at("R")) EXPECT_FALSE(r[0].is_null());
  }
  EXPECT_EQ(n, 2);
}

TEST(Enumerator, ForeignKeyCombinationsAbsent) {
  Parsed p;
  p.schema = schema_of("R(a); S(b)");
  ConstraintSet fk = p.constraints({"FK(R,a,S,b)"});
  ConstraintSet none;
  DatabaseEnumerator all(p.schema, none, 1);
  std::size_t expected = 0;
  while (auto db = all.next()) expected += check_constraints(*db, p.schema, fk);
  DatabaseEnumerator en(p.schema, fk, 1);
  std::size_t got = 0;
  while (auto db = en.next()) {
    EXPECT_TRUE(check_constraints(*db, p.schema, fk));
    ++got;
  }
  EXPECT_EQ(got, expected);
  EXPECT_LT(got, 25u);
}

TEST(Enumerator, CountsAndDeterminism) {
  Schema s = schema_of("R(a, b)");
  ConstraintSet none;
  auto collect = [&] {
    DatabaseEnumerator en(s, none, 2);
    std::vector<Database> out;
    while (auto db = en.next()) out.push_back(*db);
    return out;
  };
  auto a = collect();
  EXPECT_EQ(a.size(), 1u + 16u + 256u);
  EXPECT_EQ(a, collect());
  std::set<std::vector<Row>> distinct;
  for (const auto& db : a) distinct.insert(db.at("R"));
  EXPECT_EQ(distinct.size(), a.size());
}

TEST(Enumerator, BoolAttributes) {
  Schema s = schema_of("R(f:bool)");
  ConstraintSet none;
  DatabaseEnumerator en(s, none, 1);
  int n = 0;
  while (auto db = en.next()) {
    ++n;
    for (const auto& r : db->at("R")) EXPECT_TRUE(r[0].is_null() || r[0].is_bool());
  }
  EXPECT_EQ(n, 4);
}

TEST(Enumerator, CapSignalsExhaustion) {
  Schema s = schema_of("R(a, b); S(c, d)");
  ConstraintSet none;
  EXPECT_THROW(
      {
        DatabaseEnumerator en(s, none, 3, default_domain(), 1000);
        while (en.next()) {
        }
      },
      Exhausted);
}

TEST(DatabaseJson, RoundTrip) {
  Schema s = schema_of("R(a, f:bool); S(c)");
  Database db{{"R", {{I(-1), B(true)}, {N, N}}}, {"S", {}}};
  nlohmann::json j = database_to_json(db, s);
  EXPECT_EQ(j["R"][0]["a"], -1);
  EXPECT_EQ(j["R"][0]["f"], true);
  EXPECT_TRUE(j["R"][1]["a"].is_null());
  Database back = database_from_json(j, s);
  EXPECT_EQ(back, db);
}
