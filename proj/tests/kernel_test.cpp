#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "quasikernel/kernel.hpp"

using namespace quasikernel;

namespace {

Env kernel_env() { return Env(std::make_shared<const std::map<std::string, PVal>>(kernel_builtins())); }

ExprPtr call(const std::string& f, std::vector<ExprPtr> args) {
  ExprPtr e = Expr::var(f);
  for (auto& a : args) e = Expr::app(e, a);
  return e;
}

ExprPtr nat(unsigned n) { return Expr::lit(PVal::nat(n)); }

// Independent reading of existential equality on first-order values:
// "both sides are defined and equal", applied componentwise.
bool oracle_eq_existential(const PVal& a, const PVal& b) {
  if (!a.defined() || !b.defined()) return false;
  if (a.kind() != b.kind()) return false;
  if (a.is_nat()) return a.as_nat() == b.as_nat();
  if (a.is_tuple()) {
    if (a.tuple_items().size() != b.tuple_items().size()) return false;
    for (std::size_t i = 0; i < a.tuple_items().size(); ++i)
      if (!oracle_eq_existential(a.item(i), b.item(i))) return false;
    return true;
  }
  if (a.is_tag() && a.tag_index() != b.tag_index()) return false;
  return oracle_eq_existential(a.payload(), b.payload());
}

}  // namespace

TEST(Eval, IdentityOnUndefinedIsUndefined) {
  Fuel fuel;
  auto id = Expr::lam("x", Expr::var("x"));
  auto undefined = Expr::app(Expr::var("bot"), Expr::lit(PVal::unit()));
  EXPECT_FALSE(eval(Expr::app(id, undefined), kernel_env(), fuel).defined());
}

TEST(Eval, ConstantFunctionYieldsUnit) {
  Fuel fuel;
  auto k = Expr::lam("x", Expr::lit(PVal::unit()));
  EXPECT_TRUE(eval(Expr::app(k, nat(3)), kernel_env(), fuel).is_unit());
}

TEST(Eval, ConstantFunctionIsStillStrict) {
  Fuel fuel;
  auto k = Expr::lam("x", Expr::lit(PVal::unit()));
  auto undefined = Expr::app(Expr::var("bot"), Expr::lit(PVal::unit()));
  EXPECT_FALSE(eval(Expr::app(k, undefined), kernel_env(), fuel).defined());
}

TEST(Eval, RestrictToFalseIsUndefined) {
  Fuel fuel;
  EXPECT_FALSE(eval(call("restrict", {nat(5), Expr::var("false")}), kernel_env(), fuel).defined());
  auto r = eval(call("restrict", {nat(5), Expr::var("true")}), kernel_env(), fuel);
  EXPECT_EQ(r.as_nat(), 5);
}

TEST(Eval, SelfApplicationExhaustsFuel) {
  Fuel fuel(500);
  auto w = Expr::lam("x", Expr::app(Expr::var("x"), Expr::var("x")));
  try {
    eval(Expr::app(w, w), kernel_env(), fuel);
    FAIL() << "expected FuelExhausted";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::fuel_exhausted);
  }
}

TEST(Eval, UnboundNameAndTypeMismatch) {
  Fuel fuel;
  try {
    eval(Expr::var("nope"), kernel_env(), fuel);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::unbound_name);
  }
  try {
    eval(call("fst", {nat(1)}), kernel_env(), fuel);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::type_mismatch);
  }
  auto annotated = Expr::lam("x", Expr::var("x"), Ty::nat());
  try {
    eval(Expr::app(annotated, Expr::lit(PVal::unit())), kernel_env(), fuel);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::type_mismatch);
  }
}

TEST(Eval, LetAndConditional) {
  Fuel fuel;
  auto e = Expr::let("y", nat(4), Expr::ite(call("leq", {Expr::var("y"), nat(3)}), nat(0), call("suc", {Expr::var("y")})));
  EXPECT_EQ(eval(e, kernel_env(), fuel).as_nat(), 5);
  // only the taken branch is evaluated
  auto w = Expr::lam("x", Expr::app(Expr::var("x"), Expr::var("x")));
  auto lazy = Expr::ite(Expr::var("true"), nat(1), Expr::app(w, w));
  EXPECT_EQ(eval(lazy, kernel_env(), fuel).as_nat(), 1);
}

TEST(Eval, TuplesAreStrict) {
  Fuel fuel;
  auto undefined = Expr::app(Expr::var("bot"), Expr::lit(PVal::unit()));
  EXPECT_FALSE(eval(Expr::tuple({nat(1), undefined}), kernel_env(), fuel).defined());
}

TEST(Eval, NaturalsDoNotOverflow) {
  Fuel fuel;
  PVal big = PVal::nat(natural("18446744073709551615"));
  auto e = call("times", {Expr::lit(big), Expr::lit(big)});
  EXPECT_EQ(eval(e, kernel_env(), fuel).as_nat(), natural("340282366920938463426481119284349108225"));
}

TEST(Restrict, Examples) {
  EXPECT_EQ(restrict(PVal::nat(7), PVal::boolean(true)).as_nat(), 7);
  EXPECT_FALSE(restrict(PVal::nat(7), PVal::boolean(false)).defined());
  EXPECT_FALSE(restrict(PVal::undefined(), PVal::boolean(true)).defined());
  EXPECT_FALSE(restrict(PVal::nat(7), PVal::undefined()).defined());
}

TEST(Equality, ExistentialExamples) {
  Fuel fuel;
  EXPECT_FALSE(eq_existential(PVal(), PVal(), 4, fuel).as_bool());
  EXPECT_TRUE(eq_existential(PVal::nat(3), PVal::nat(3), 4, fuel).as_bool());
  auto p = PVal::pair(PVal::nat(1), PVal());
  EXPECT_FALSE(eq_existential(p, p, 4, fuel).as_bool());
  EXPECT_EQ(oracle_eq_existential(p, p), false);
}

TEST(Equality, StrongExamples) {
  Fuel fuel;
  EXPECT_TRUE(eq_strong(PVal(), PVal(), 4, fuel).as_bool());
  EXPECT_FALSE(eq_strong(PVal::nat(3), PVal(), 4, fuel).as_bool());
  EXPECT_FALSE(eq_strong(PVal::inl(PVal::unit()), PVal::inr(PVal::unit()), 4, fuel).as_bool());
}

TEST(Equality, IncomparableTypes) {
  Fuel fuel;
  try {
    eq_existential(PVal::nat(1), PVal::unit(), 4, fuel);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::incomparable_types);
  }
}

TEST(Equality, FunctionsAreComparedOnSamples) {
  Fuel fuel;
  auto env = kernel_env();
  auto f = eval(Expr::lam("x", call("plus", {Expr::var("x"), nat(1)})), env, fuel);
  auto g = eval(Expr::var("suc"), env, fuel);
  auto h = eval(Expr::lam("x", call("plus", {Expr::var("x"), nat(2)})), env, fuel);
  EXPECT_TRUE(strongly_equal(f, g, 4, fuel));
  EXPECT_FALSE(strongly_equal(f, h, 4, fuel));
  // definedness pattern matters
  EXPECT_FALSE(strongly_equal(builtin::bot(), logical(true), 4, fuel));
  EXPECT_TRUE(strongly_equal(builtin::bot(), logical(false), 4, fuel));
}

TEST(EqualityProperty, ExistentialMatchesOracleOnAllSmallValues) {
  auto values = qk_test::all_values(2);
  values.push_back(PVal());
  values.push_back(PVal::pair(PVal::nat(1), PVal()));
  Fuel fuel(100'000'000);
  for (const auto& a : values)
    for (const auto& b : values) {
      bool expected = oracle_eq_existential(a, b);
      bool actual;
      try {
        actual = existentially_equal(a, b, 4, fuel);
      } catch (const error& e) {
        ASSERT_EQ(e.code(), errc::incomparable_types);
        ASSERT_FALSE(expected) << show(a) << " vs " << show(b);
        continue;
      }
      ASSERT_EQ(actual, expected) << show(a) << " vs " << show(b);
    }
}

TEST(EqualityProperty, StrongAgreesWithExistentialOnDefinedValues) {
  std::mt19937 rng(7);
  Fuel fuel(10'000'000);
  for (int i = 0; i < 2000; ++i) {
    auto a = qk_test::random_value(rng, 3);
    auto b = (i % 3 == 0) ? a : qk_test::random_value(rng, 3);
    if (!a || !b) continue;
    for (std::size_t depth : {0u, 1u, 4u}) {
      try {
        ASSERT_EQ(strongly_equal(a, b, depth, fuel), existentially_equal(a, b, depth, fuel));
      } catch (const error& e) {
        ASSERT_EQ(e.code(), errc::incomparable_types);
      }
    }
  }
}

TEST(RestrictProperty, TrueKeepsFalseDrops) {
  std::mt19937 rng(11);
  Fuel fuel(10'000'000);
  for (int i = 0; i < 1000; ++i) {
    // well-formed values: undefinedness only at the top
    auto v = (i % 10 == 0) ? PVal() : qk_test::random_value(rng, 3, false);
    ASSERT_TRUE(strongly_equal(restrict(v, PVal::boolean(true)), v, 4, fuel));
    ASSERT_TRUE(strongly_equal(restrict(v, PVal::boolean(false)), PVal(), 4, fuel));
  }
}

TEST(StrictnessProperty, UnaryBuiltinsOnUndefined) {
  Fuel fuel;
  for (const auto& [name, f] : kernel_builtins()) {
    if (!f.is_fun() || name == "def" || name == "eqe" || name == "eqs") continue;
    EXPECT_FALSE(apply(f, PVal(), fuel).defined()) << name;
  }
  EXPECT_TRUE(apply(kernel_builtins().at("def"), PVal(), fuel).defined());
}

TEST(EvalProperty, Deterministic) {
  auto env = kernel_env();
  auto e = call("sumcase", {Expr::var("suc"), Expr::lam("x", nat(0)), call("inl", {call("times", {nat(6), nat(7)})})});
  Fuel f1(1000), f2(1000);
  auto a = eval(e, env, f1);
  auto b = eval(e, env, f2);
  EXPECT_TRUE(strongly_equal(a, b));
  EXPECT_EQ(a.as_nat(), 43);
  EXPECT_EQ(f1.remaining(), f2.remaining());
}

TEST(Logical, ConjunctionIsDefinednessOfBoth) {
  Fuel fuel;
  EXPECT_TRUE(holds(logical_and(logical(true), logical(true)), fuel));
  EXPECT_FALSE(holds(logical_and(logical(true), logical(false)), fuel));
  EXPECT_FALSE(holds(logical_and(logical(false), logical(true)), fuel));
}
