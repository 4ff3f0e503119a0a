#include <gtest/gtest.h>

#include <random>

#include "quasikernel/functors.hpp"

using namespace quasikernel;

namespace {

using F = SigFunctor;

const Ty a = Ty::named("a");

PVal table_fun(std::vector<std::pair<PVal, PVal>> table) {
  return PVal::fun(
      [table](const PVal& x, Fuel& fuel) {
        for (const auto& [k, v] : table) {
          try {
            if (strongly_equal(k, x, 2, fuel)) return v;
          } catch (const error& e) {
            if (e.code() != errc::incomparable_types) throw;
          }
        }
        throw error(errc::type_mismatch, "outside the table's domain");
      },
      "table");
}

// Direct enumeration of F X from the syntax, independent of normalization.
std::vector<PVal> syntax_values(const F& f, const std::vector<PVal>& xs) {
  switch (f.kind()) {
    case F::Kind::id: return xs;
    case F::Kind::constant: return enumerate(f.type());
    case F::Kind::sum: {
      std::vector<PVal> out;
      for (auto& v : syntax_values(f.left(), xs)) out.push_back(PVal::inl(v));
      for (auto& v : syntax_values(f.right(), xs)) out.push_back(PVal::inr(v));
      return out;
    }
    case F::Kind::prod: {
      std::vector<PVal> out;
      auto ls = syntax_values(f.left(), xs);
      auto rs = syntax_values(f.right(), xs);
      for (auto& l : ls)
        for (auto& r : rs) out.push_back(PVal::pair(l, r));
      return out;
    }
    case F::Kind::exp: {
      auto bs = enumerate(f.type());
      std::vector<std::vector<std::pair<PVal, PVal>>> tables{{}};
      for (const auto& b : bs) {
        std::vector<std::vector<std::pair<PVal, PVal>>> next;
        for (const auto& t : tables)
          for (const auto& x : xs) {
            auto u = t;
            u.emplace_back(b, x);
            next.push_back(std::move(u));
          }
        tables = std::move(next);
      }
      std::vector<PVal> out;
      for (auto& t : tables) out.push_back(table_fun(t));
      return out;
    }
  }
  return {};
}

std::vector<PVal> carrier(std::size_t n) {
  std::vector<PVal> xs;
  for (std::size_t i = 0; i < n; ++i) xs.push_back(PVal::nat(i));
  return xs;
}

F random_functor(std::mt19937& rng, int depth, bool allow_exp) {
  static const std::vector<Ty> constants{Ty::unit(), Ty::boolean(), Ty::zero(), Ty::sum(Ty::unit(), Ty::boolean())};
  int choice = std::uniform_int_distribution<int>(0, depth > 0 ? 4 : 2)(rng);
  switch (choice) {
    case 0: return F::id();
    case 1: return F::constant(constants[rng() % constants.size()]);
    case 2:
      if (allow_exp) return F::exp(constants[rng() % constants.size()]);
      return F::id();
    case 3: return F::sum(random_functor(rng, depth - 1, allow_exp), random_functor(rng, depth - 1, allow_exp));
    default: return F::prod(random_functor(rng, depth - 1, allow_exp), random_functor(rng, depth - 1, allow_exp));
  }
}

PVal suc_fn() {
  return PVal::fun([](const PVal& x, Fuel&) { return PVal::nat(x.as_nat() + 1); }, "suc");
}
PVal double_fn() {
  return PVal::fun([](const PVal& x, Fuel&) { return PVal::nat(x.as_nat() * 2); }, "double");
}
PVal id_fn() {
  return PVal::fun([](const PVal& x, Fuel&) { return x; }, "id");
}
PVal compose(PVal g, PVal f) {
  return PVal::fun([g, f](const PVal& x, Fuel& fuel) { return apply(g, apply(f, x, fuel), fuel); }, "compose");
}

}  // namespace

TEST(PolyNF, ListFunctor) {
  auto nf = to_poly_nf(F::sum(F::constant(Ty::unit()), F::prod(F::constant(a), F::id())));
  EXPECT_EQ(nf.summands, (std::vector<PolySummand>{{Ty::unit(), 0}, {a, 1}}));
}

TEST(PolyNF, IdentityHasEmptyConstants) {
  EXPECT_EQ(to_poly_nf(F::id()).summands, (std::vector<PolySummand>{{Ty::zero(), 0}, {Ty::unit(), 1}}));
}

TEST(PolyNF, ProcFunctor) {
  auto nf = to_poly_nf(F::sum(F::prod(F::constant(a), F::id()), F::prod(F::id(), F::id())));
  EXPECT_EQ(nf.summands, (std::vector<PolySummand>{{Ty::zero(), 0}, {a, 1}, {Ty::unit(), 2}}));
}

TEST(PolyNF, ConstantsAreCollectedIntoFirstSummand) {
  auto f = F::sum(F::constant(Ty::boolean()), F::sum(F::id(), F::constant(Ty::unit())));
  auto nf = to_poly_nf(f);
  EXPECT_EQ(nf.summands, (std::vector<PolySummand>{{Ty::sum(Ty::boolean(), Ty::unit()), 0}, {Ty::unit(), 1}}));
}

TEST(PolyNF, RejectsExponentials) {
  try {
    to_poly_nf(F::sum(F::constant(Ty::unit()), F::exp(Ty::nat())));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::not_polynomial);
  }
}

TEST(ExtPolyNF, Examples) {
  Ty b = Ty::named("b"), b2 = Ty::named("b'");
  EXPECT_EQ(to_extpoly_nf(F::prod(F::exp(b), F::exp(b2))).summands,
            (std::vector<ExtSummand>{{Ty::unit(), Ty::sum(b, b2)}}));
  EXPECT_EQ(to_extpoly_nf(F::id()).summands, (std::vector<ExtSummand>{{Ty::unit(), Ty::unit()}}));
  EXPECT_EQ(to_extpoly_nf(F::sum(F::prod(F::constant(a), F::id()), F::prod(F::id(), F::id()))).summands,
            (std::vector<ExtSummand>{{a, Ty::unit()}, {Ty::unit(), Ty::sum(Ty::unit(), Ty::unit())}}));
}

TEST(ExtPolyNF, RejectsNonIdentityBodies) {
  try {
    to_extpoly_nf(F::exp(Ty::nat(), F::prod(F::id(), F::id())));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::not_extended_polynomial);
  }
}

TEST(ExtPolyNF, ProcExampleCardinalityOracle) {
  // a instantiated with Bool; X has two elements
  auto f = F::sum(F::prod(F::constant(Ty::boolean()), F::id()), F::prod(F::id(), F::id()));
  auto nf = to_extpoly_nf(f);
  auto xs = carrier(2);
  std::size_t expected = syntax_values(f, xs).size();
  EXPECT_EQ(expected, 8u);
  EXPECT_EQ(*functor_cardinality(nf, 2), expected);
}

TEST(Fmap, ListFunctorTouchesOnlyRecursivePositions) {
  auto nf = to_poly_nf(F::sum(F::constant(Ty::unit()), F::prod(F::constant(Ty::nat()), F::id())));
  Fuel fuel;
  PVal v = nf.make(1, PVal::nat(3), {PVal::nat(10)});
  PVal r = fmap(nf, suc_fn(), v, fuel);
  EXPECT_TRUE(strongly_equal(r, nf.make(1, PVal::nat(3), {PVal::nat(11)})));
  EXPECT_FALSE(fmap(nf, suc_fn(), PVal(), fuel).defined());
  try {
    fmap(nf, suc_fn(), PVal::tag(5, PVal::pair(PVal::unit(), PVal::unit())), fuel);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::tag_out_of_range);
  }
}

TEST(Sumcase, Examples) {
  Fuel fuel;
  EXPECT_EQ(sumcase(suc_fn(), id_fn(), PVal::inl(PVal::nat(2)), fuel).as_nat(), 3);
  EXPECT_FALSE(sumcase(suc_fn(), id_fn(), PVal(), fuel).defined());
  auto inl = PVal::fun([](const PVal& x, Fuel&) { return PVal::inl(x); }, "inl");
  auto inr = PVal::fun([](const PVal& x, Fuel&) { return PVal::inr(x); }, "inr");
  Ty small = Ty::sum(Ty::boolean(), Ty::sum(Ty::unit(), Ty::prod(Ty::boolean(), Ty::boolean())));
  for (const auto& v : enumerate(small)) EXPECT_TRUE(strongly_equal(sumcase(inl, inr, v, fuel), v)) << show(v);
}

TEST(Triple, Examples) {
  Fuel fuel;
  PVal t = encode_sum_as_triple(PVal::inl(PVal::nat(4)));
  EXPECT_EQ(apply(t.item(0), PVal::unit(), fuel).as_nat(), 4);
  EXPECT_FALSE(apply(t.item(1), PVal::unit(), fuel).defined());
  EXPECT_TRUE(t.item(2).as_bool());
  PVal u = encode_sum_as_triple(PVal::inr(PVal::unit()));
  EXPECT_FALSE(apply(u.item(0), PVal::unit(), fuel).defined());
  EXPECT_TRUE(apply(u.item(1), PVal::unit(), fuel).is_unit());
  EXPECT_FALSE(u.item(2).as_bool());
  for (const auto& v : enumerate(Ty::boolean())) EXPECT_TRUE(strongly_equal(decode_triple(encode_sum_as_triple(v), fuel), v));
}

TEST(Bot, UndefinedEverywhere) {
  Fuel fuel;
  EXPECT_FALSE(apply(bot(Ty::nat()), PVal::unit(), fuel).defined());
  EXPECT_TRUE(strongly_equal(restrict(PVal::nat(1), PVal::boolean(false)), apply(bot(Ty::nat()), PVal::unit(), fuel)));
  EXPECT_FALSE(outl(PVal::inr(PVal::nat(1)), fuel).defined());
  EXPECT_EQ(outl(PVal::inl(PVal::nat(1)), fuel).as_nat(), 1);
  EXPECT_FALSE(outr(PVal::inl(PVal::nat(1)), fuel).defined());
}

TEST(FunctorText, PrintsAndParses) {
  auto f = F::sum(F::prod(F::constant(a), F::id()), F::prod(F::id(), F::id()));
  EXPECT_EQ(f.show(), "a × X + X × X");
  EXPECT_EQ(parse_functor("a * X + X * X"), f);
  EXPECT_EQ(parse_functor("(Nat → X) × X").show(), "(Nat → X) × X");
  EXPECT_EQ(parse_functor("Unit + a * Unit"), F::constant(Ty::sum(Ty::unit(), Ty::prod(a, Ty::unit()))));
}

// ---------------------------------------------------------------------------
// Properties

TEST(FunctorProperty, PolyNormalizationPreservesCardinality) {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    F f = random_functor(rng, 3, false);
    auto nf = to_poly_nf(f);
    ASSERT_EQ(nf.summands.front().arity, 0u);
    for (std::size_t i = 1; i < nf.summands.size(); ++i) ASSERT_GT(nf.summands[i].arity, 0u);
    for (std::size_t n = 0; n <= 3; ++n) {
      std::size_t direct = syntax_values(f, carrier(n)).size();
      ASSERT_EQ(*functor_cardinality(f, n), direct) << f.show();
      ASSERT_EQ(*functor_cardinality(nf, n), direct) << f.show() << " ~ " << nf.show();
    }
  }
}

TEST(FunctorProperty, PolyValueIsomorphismRoundTrips) {
  std::mt19937 rng(2);
  Fuel fuel(100'000'000);
  for (int trial = 0; trial < 100; ++trial) {
    F f = random_functor(rng, 3, false);
    auto nf = to_poly_nf(f);
    auto values = syntax_values(f, carrier(2));
    std::vector<PVal> images;
    for (const auto& v : values) {
      PVal e = nf.from_syntax(v);
      ASSERT_TRUE(strongly_equal(nf.to_syntax(e), v, 2, fuel)) << f.show() << " at " << show(v);
      for (const auto& other : images) ASSERT_FALSE(strongly_equal(other, e, 2, fuel)) << "not injective";
      images.push_back(e);
    }
  }
}

TEST(FunctorProperty, ExtNormalizationPreservesCardinality) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    F f = random_functor(rng, 3, true);
    auto nf = to_extpoly_nf(f);
    for (std::size_t n = 0; n <= 3; ++n) {
      auto direct = *functor_cardinality(f, n);
      ASSERT_EQ(*functor_cardinality(nf, n), direct) << f.show() << " ~ " << nf.show();
      if (direct < 200) {
        ASSERT_EQ(syntax_values(f, carrier(n)).size(), direct) << f.show();
      }
    }
  }
}

TEST(FunctorProperty, ExtValueIsomorphismRoundTrips) {
  std::mt19937 rng(4);
  Fuel fuel(100'000'000);
  for (int trial = 0; trial < 60; ++trial) {
    F f = random_functor(rng, 2, true);
    auto nf = to_extpoly_nf(f);
    auto values = syntax_values(f, carrier(2));
    if (values.size() > 200) continue;
    for (const auto& v : values) {
      PVal e = nf.from_syntax(v);
      ASSERT_TRUE(strongly_equal(nf.to_syntax(e, fuel), v, 3, fuel)) << f.show() << " at " << show(v);
    }
  }
}

TEST(FunctorProperty, FmapLawsOnPolyNF) {
  std::mt19937 rng(5);
  Fuel fuel(100'000'000);
  for (int trial = 0; trial < 100; ++trial) {
    F f = random_functor(rng, 3, false);
    auto nf = to_poly_nf(f);
    for (const auto& v : syntax_values(f, carrier(2))) {
      PVal e = nf.from_syntax(v);
      ASSERT_TRUE(strongly_equal(fmap(nf, id_fn(), e, fuel), e, 2, fuel));
      PVal lhs = fmap(nf, compose(double_fn(), suc_fn()), e, fuel);
      PVal rhs = fmap(nf, double_fn(), fmap(nf, suc_fn(), e, fuel), fuel);
      ASSERT_TRUE(strongly_equal(lhs, rhs, 2, fuel)) << f.show();
    }
  }
}

TEST(FunctorProperty, FmapLawsOnExtPolyNF) {
  std::mt19937 rng(6);
  Fuel fuel(100'000'000);
  for (int trial = 0; trial < 60; ++trial) {
    F f = random_functor(rng, 2, true);
    auto nf = to_extpoly_nf(f);
    auto values = syntax_values(f, carrier(2));
    if (values.size() > 200) continue;
    for (const auto& v : values) {
      PVal e = nf.from_syntax(v);
      ASSERT_TRUE(strongly_equal(fmap(nf, id_fn(), e, fuel), e, 3, fuel));
      PVal lhs = fmap(nf, compose(double_fn(), suc_fn()), e, fuel);
      PVal rhs = fmap(nf, double_fn(), fmap(nf, suc_fn(), e, fuel), fuel);
      ASSERT_TRUE(strongly_equal(lhs, rhs, 3, fuel)) << f.show();
    }
  }
}

TEST(FunctorProperty, FmapCommutesWithIsomorphism) {
  // F g on syntax values, computed directly, agrees with fmap on the normal form.
  std::mt19937 rng(7);
  Fuel fuel(100'000'000);
  std::function<PVal(const F&, const PVal&)> direct = [&](const F& f, const PVal& v) -> PVal {
    switch (f.kind()) {
      case F::Kind::id: return apply(suc_fn(), v, fuel);
      case F::Kind::constant: return v;
      case F::Kind::sum: return v.is_inl() ? PVal::inl(direct(f.left(), v.payload())) : PVal::inr(direct(f.right(), v.payload()));
      case F::Kind::prod: return PVal::pair(direct(f.left(), v.item(0)), direct(f.right(), v.item(1)));
      default: return PVal();
    }
  };
  for (int trial = 0; trial < 100; ++trial) {
    F f = random_functor(rng, 3, false);
    auto nf = to_poly_nf(f);
    for (const auto& v : syntax_values(f, carrier(2)))
      ASSERT_TRUE(strongly_equal(nf.to_syntax(fmap(nf, suc_fn(), nf.from_syntax(v), fuel)), direct(f, v), 2, fuel));
  }
}

TEST(CoproductProperty, CopairingIsUnique) {
  Fuel fuel;
  Ty t = Ty::sum(Ty::boolean(), Ty::sum(Ty::unit(), Ty::boolean()));
  auto f = PVal::fun([](const PVal& x, Fuel&) { return PVal::boolean(!x.as_bool()); }, "not");
  auto g = PVal::fun([](const PVal& x, Fuel&) { return x.is_inl() ? PVal::boolean(true) : PVal(); }, "g");
  // every h : t → Bool ⊥ given by a table; those agreeing with f and g on
  // the injections are exactly sumcase f g
  auto dom = enumerate(t);
  std::vector<PVal> codomain{PVal::boolean(true), PVal::boolean(false), PVal()};
  std::size_t combos = 1;
  for (std::size_t i = 0; i < dom.size(); ++i) combos *= codomain.size();
  std::size_t agreeing = 0;
  for (std::size_t code = 0; code < combos; ++code) {
    std::vector<PVal> outs;
    std::size_t c = code;
    for (std::size_t i = 0; i < dom.size(); ++i, c /= codomain.size()) outs.push_back(codomain[c % codomain.size()]);
    bool agrees = true;
    for (std::size_t i = 0; i < dom.size() && agrees; ++i) {
      PVal expected = dom[i].is_inl() ? apply(f, dom[i].payload(), fuel) : apply(g, dom[i].payload(), fuel);
      agrees = strongly_equal(outs[i], expected, 2, fuel);
    }
    if (!agrees) continue;
    ++agreeing;
    for (std::size_t i = 0; i < dom.size(); ++i) ASSERT_TRUE(strongly_equal(outs[i], sumcase(f, g, dom[i], fuel), 2, fuel));
  }
  EXPECT_EQ(agreeing, 1u);
}

TEST(CoproductProperty, TripleEncodingPatternAndCopair) {
  Fuel fuel;
  Ty t = Ty::sum(Ty::prod(Ty::boolean(), Ty::boolean()), Ty::sum(Ty::unit(), Ty::boolean()));
  auto f = PVal::fun([](const PVal& x, Fuel&) { return PVal::nat(x.item(0).as_bool() ? 1 : 2); }, "f");
  auto g = PVal::fun([](const PVal& x, Fuel&) { return x.is_inl() ? PVal() : PVal::nat(3); }, "g");
  for (const auto& v : enumerate(t)) {
    PVal triple = encode_sum_as_triple(v);
    ASSERT_TRUE(triple_pattern_holds(triple, fuel));
    ASSERT_TRUE(strongly_equal(decode_triple(triple, fuel), v));
    ASSERT_TRUE(strongly_equal(triple_copair(f, g, triple, fuel), sumcase(f, g, v, fuel)));
  }
}

TEST(FunctorTextProperty, RoundTrip) {
  // X-free subterms are read back as a single constant
  std::function<std::optional<Ty>(const F&)> closed = [&](const F& f) -> std::optional<Ty> {
    switch (f.kind()) {
      case F::Kind::constant: return f.type();
      case F::Kind::sum:
      case F::Kind::prod: {
        auto l = closed(f.left()), r = closed(f.right());
        if (!l || !r) return std::nullopt;
        return f.kind() == F::Kind::sum ? Ty::sum(*l, *r) : Ty::prod(*l, *r);
      }
      default: return std::nullopt;
    }
  };
  std::function<F(const F&)> merged = [&](const F& f) -> F {
    if (auto t = closed(f)) return F::constant(*t);
    if (f.kind() == F::Kind::sum) return F::sum(merged(f.left()), merged(f.right()));
    if (f.kind() == F::Kind::prod) return F::prod(merged(f.left()), merged(f.right()));
    return f;
  };
  std::mt19937 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    F f = random_functor(rng, 4, true);
    ASSERT_EQ(parse_functor(f.show()), merged(f)) << f.show();
  }
}

TEST(NormalFormProperty, ToFunctorIsAFixpoint) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    F f = random_functor(rng, 3, false);
    auto nf = to_poly_nf(f);
    ASSERT_EQ(to_poly_nf(nf.to_functor()), nf) << f.show() << " ~ " << nf.to_functor().show();
    F e = random_functor(rng, 3, true);
    auto enf = to_extpoly_nf(e);
    ASSERT_EQ(*functor_cardinality(enf.to_functor(), 2), *functor_cardinality(enf, 2)) << e.show();
  }
}
