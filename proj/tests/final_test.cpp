#include <gtest/gtest.h>

#include <random>

#include "quasikernel/final.hpp"

using namespace quasikernel;

namespace {

using F = SigFunctor;

std::shared_ptr<FinalCoalgebra> coalgebra(const F& f) { return FinalCoalgebra::build(to_extpoly_nf(f)); }

// Nat × X
F stream_functor() { return F::prod(F::constant(Ty::nat()), F::id()); }
// Nat × X + X × X
F proc_functor() {
  return F::sum(F::prod(F::constant(Ty::nat()), F::id()), F::prod(F::id(), F::id()));
}
// Bool × (Bool → X)
F bool_tree_functor() { return F::prod(F::constant(Ty::boolean()), F::exp(Ty::boolean())); }
// Unit + Nat × X: possibly finite streams
F colist_functor() { return F::sum(F::constant(Ty::unit()), F::prod(F::constant(Ty::nat()), F::id())); }

// The stream k ↦ s(k) as a path map: a path of length k is answered by s(k).
PVal stream_tree(const FinalCoalgebra& c, std::function<std::size_t(std::size_t)> s) {
  return c.make([s](const BPath& p, Fuel&) -> PVal {
    for (const auto& step : p)
      if (step.tag_index() != 0) return PVal::undefined();
    return PVal::tag(0, PVal::nat(s(p.size())));
  });
}

BPath unit_path(std::size_t k) { return BPath(k, PVal::tag(0, PVal::unit())); }

// A coalgebra on seeds {0..n-1}: tag, parameter and one successor per
// exponent value, all drawn from a table.
struct TableCoalgebra {
  struct Row {
    std::size_t tag;
    PVal param;
    std::vector<std::size_t> next;
  };
  std::vector<Row> rows;

  PVal as_pval(const ExtPolyNF& nf) const {
    auto rs = rows;
    return PVal::fun(
        [rs, nf](const PVal& z, Fuel&) {
          const auto& row = rs.at(static_cast<std::size_t>(z.as_nat()));
          auto ys = enumerate(nf.summands[row.tag].exponent);
          auto next = row.next;
          PVal g = PVal::fun(
              [ys, next](const PVal& y, Fuel& fl) {
                for (std::size_t k = 0; k < ys.size(); ++k)
                  if (strongly_equal(ys[k], y, 2, fl)) return PVal::nat(next[k]);
                throw error(errc::type_mismatch, "outside the exponent");
              },
              "succ");
          return nf.make(row.tag, row.param, g);
        },
        "d");
  }
};

TableCoalgebra random_table(const ExtPolyNF& nf, std::size_t seeds, std::mt19937& rng) {
  TableCoalgebra t;
  for (std::size_t z = 0; z < seeds; ++z) {
    std::size_t i = std::uniform_int_distribution<std::size_t>(0, nf.size() - 1)(rng);
    auto params = enumerate(nf.summands[i].param, 4);
    PVal a = params[std::uniform_int_distribution<std::size_t>(0, params.size() - 1)(rng)];
    std::vector<std::size_t> next;
    for (std::size_t k = 0; k < enumerate(nf.summands[i].exponent).size(); ++k)
      next.push_back(std::uniform_int_distribution<std::size_t>(0, seeds - 1)(rng));
    t.rows.push_back({i, a, next});
  }
  return t;
}

// Iteration oracle: walk the table along the path.
PVal table_observe(const ExtPolyNF& nf, const TableCoalgebra& t, std::size_t z, const BPath& p) {
  for (const auto& step : p) {
    const auto& row = t.rows[z];
    if (step.tag_index() != row.tag) return PVal::undefined();
    auto ys = enumerate(nf.summands[row.tag].exponent);
    std::size_t k = 0;
    while (!strongly_equal(ys[k], step.payload(), 2)) ++k;
    z = row.next[k];
  }
  return PVal::tag(t.rows[z].tag, t.rows[z].param);
}

std::vector<F> finite_exponent_functors() {
  return {stream_functor(), proc_functor(), bool_tree_functor(), colist_functor()};
}

}  // namespace

TEST(Final, RejectsInfiniteExponent) {
  auto f = F::exp(Ty::nat());
  try {
    coalgebra(f);
    FAIL() << "expected NonEnumerableExponent";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::non_enumerable_exponent);
  }
}

TEST(Final, ProcNormalFormBuilds) {
  auto c = coalgebra(proc_functor());
  ASSERT_EQ(c->nf().size(), 2u);
  EXPECT_EQ(c->nf().summands[0].param, Ty::nat());
  EXPECT_EQ(c->nf().summands[0].exponent, Ty::unit());
  EXPECT_EQ(c->nf().summands[1].param, Ty::unit());
  EXPECT_EQ(c->nf().summands[1].exponent, Ty::sum(Ty::unit(), Ty::unit()));
}

TEST(Final, StreamStructureMapShiftsByOne) {
  auto c = coalgebra(stream_functor());
  Fuel fuel(100000);
  auto s = [](std::size_t k) { return 3 * k + 1; };
  PVal t = stream_tree(*c, s);
  PVal v = c->c(t, fuel);
  auto [i, head, g] = c->nf().split(v);
  EXPECT_EQ(i, 0u);
  EXPECT_EQ(head.as_nat(), 1);
  PVal tail = apply(g, PVal::unit(), fuel);
  for (std::size_t k = 0; k < 6; ++k)
    EXPECT_EQ(c->observe(tail, unit_path(k), fuel).payload().as_nat(), s(k + 1)) << k;
  EXPECT_TRUE(c->bisimilar(tail, stream_tree(*c, [s](std::size_t k) { return s(k + 1); }), 5, fuel));
}

TEST(Final, CounterStreamObservesPathLength) {
  auto c = coalgebra(stream_functor());
  const auto& nf = c->nf();
  PVal d = PVal::fun(
      [nf](const PVal& n, Fuel&) {
        PVal next = PVal::nat(natural(n.as_nat() + 1));
        return nf.make(0, n, PVal::fun([next](const PVal&, Fuel&) { return next; }, "succ"));
      },
      "counter");
  PVal t = c->unfold(d, PVal::nat(0));
  Fuel fuel(100000);
  for (std::size_t k = 0; k <= 8; ++k) {
    PVal o = c->observe(t, unit_path(k), fuel);
    ASSERT_TRUE(o.defined());
    EXPECT_EQ(o.tag_index(), 0u);
    EXPECT_EQ(o.payload().as_nat(), k);
  }
  EXPECT_TRUE(c->membership(t, 8, fuel).ok());
}

TEST(Final, MismatchedSummandIsUndefined) {
  auto c = coalgebra(proc_functor());
  const auto& nf = c->nf();
  // every seed outputs in0 (n, λ_. n + 1)
  PVal d = PVal::fun(
      [nf](const PVal& n, Fuel&) {
        PVal next = PVal::nat(natural(n.as_nat() + 1));
        return nf.make(0, n, PVal::fun([next](const PVal&, Fuel&) { return next; }, "succ"));
      },
      "d");
  PVal t = c->unfold(d, PVal::nat(0));
  Fuel fuel(100000);
  BPath p = unit_path(2);
  EXPECT_TRUE(c->observe(t, p, fuel).defined());
  p.push_back(PVal::tag(1, PVal::boolean(true)));
  EXPECT_FALSE(c->observe(t, p, fuel).defined());
  p.push_back(PVal::tag(0, PVal::unit()));
  EXPECT_FALSE(c->observe(t, p, fuel).defined());
}

TEST(Final, RootDefinedForConstructedTrees) {
  auto c = coalgebra(proc_functor());
  Fuel fuel(100000);
  PVal leafish = stream_tree(*c, [](std::size_t k) { return k; });
  PVal pair = c->construct(1, PVal::unit(), PVal::fun([leafish](const PVal&, Fuel&) { return leafish; }, "kids"));
  PVal out = c->construct(0, PVal::nat(7), PVal::fun([pair](const PVal&, Fuel&) { return pair; }, "next"));
  for (const auto& t : {leafish, pair, out}) {
    EXPECT_TRUE(c->observe(t, {}, fuel).defined());
    EXPECT_TRUE(c->membership(t, 4, fuel).ok());
  }
}

TEST(Final, UnfoldOfStructureMapIsIdentity) {
  auto c = coalgebra(proc_functor());
  Fuel fuel(1'000'000);
  PVal s = stream_tree(*c, [](std::size_t k) { return k * k; });
  PVal split = c->construct(1, PVal::unit(), PVal::fun(
                                                 [s, c](const PVal& b, Fuel&) {
                                                   if (b.as_bool()) return s;
                                                   return c->construct(0, PVal::nat(5), PVal::fun(
                                                                                           [s](const PVal&, Fuel&) {
                                                                                             return s;
                                                                                           },
                                                                                           "n"));
                                                 },
                                                 "kids"));
  for (const auto& t : {s, split}) {
    PVal u = c->unfold(c->c_fun(), t);
    EXPECT_TRUE(c->bisimilar(u, t, 4, fuel));
    EXPECT_TRUE(strongly_equal(u, t, 4, fuel));
  }
}

TEST(Final, LambekRoundTrip) {
  auto c = coalgebra(bool_tree_functor());
  Fuel fuel(1'000'000);
  PVal t = c->make([](const BPath& p, Fuel&) {
    std::size_t ones = 0;
    for (const auto& s : p) ones += s.payload().as_bool() ? 1 : 0;
    return PVal::tag(0, PVal::boolean(ones % 2 == 0));
  });
  EXPECT_TRUE(c->bisimilar(c->alpha(c->c(t, fuel), fuel), t, 4, fuel));
  PVal v = c->nf().make(0, PVal::boolean(false), PVal::fun([t](const PVal&, Fuel&) { return t; }, "g"));
  EXPECT_TRUE(c->fc_equal(c->c(c->alpha(v, fuel), fuel), v, 4, fuel));
}

TEST(Final, MembershipDetectsViolations) {
  auto c = coalgebra(proc_functor());
  Fuel fuel(100000);
  PVal root_missing = c->make([](const BPath&, Fuel&) { return PVal::undefined(); });
  EXPECT_FALSE(c->membership(root_missing, 4, fuel).ok());
  // defined everywhere, including under the wrong summand
  PVal too_defined = c->make([](const BPath&, Fuel&) { return PVal::tag(0, PVal::nat(0)); });
  auto r = c->membership(too_defined, 4, fuel);
  EXPECT_FALSE(r.ok());
  ASSERT_TRUE(r.counterexample.has_value());
  EXPECT_EQ(r.counterexample->size(), 1u);
  EXPECT_EQ(r.counterexample->back().tag_index(), 1u);
  // stops too early
  PVal too_short = c->make([](const BPath& p, Fuel&) {
    if (p.size() >= 2) return PVal::undefined();
    for (const auto& s : p)
      if (s.tag_index() != 0) return PVal::undefined();
    return PVal::tag(0, PVal::nat(1));
  });
  EXPECT_FALSE(c->membership(too_short, 4, fuel).ok());
  EXPECT_TRUE(c->membership(too_short, 1, fuel).ok());
}

TEST(Final, UnfoldExhaustsFuel) {
  auto c = coalgebra(stream_functor());
  const auto& nf = c->nf();
  PVal d = PVal::fun(
      [nf](const PVal& n, Fuel&) { return nf.make(0, n, PVal::fun([n](const PVal&, Fuel&) { return n; }, "g")); },
      "d");
  PVal t = c->unfold(d, PVal::nat(0));
  Fuel fuel(50);
  try {
    c->observe(t, unit_path(100), fuel);
    FAIL() << "expected FuelExhausted";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::fuel_exhausted);
  }
}

TEST(Final, CaseOfSelectorsReconstructsStructureMap) {
  auto c = coalgebra(proc_functor());
  Fuel fuel(1'000'000);
  std::mt19937 rng(7);
  std::vector<PVal> samples;
  for (int k = 0; k < 6; ++k) {
    auto table = random_table(c->nf(), 4, rng);
    samples.push_back(c->unfold(table.as_pval(c->nf()), PVal::nat(0)));
  }
  std::vector<PVal> branches;
  for (std::size_t i = 0; i < c->nf().size(); ++i) {
    auto self = c;
    branches.push_back(PVal::fun(
        [self, i](const PVal& t, Fuel& fl) {
          PVal v = self->c(t, fl);
          return v.tag_index() == i ? v : PVal::undefined();
        },
        "sel"));
  }
  PVal h = c->cotype_case(branches, samples, fuel);
  for (const auto& t : samples) EXPECT_TRUE(c->fc_equal(apply(h, t, fuel), c->c(t, fuel), 4, fuel));
  // the param selectors are defined on exactly one summand each
  PVal out = c->param_selector(0);
  PVal spawnl = c->branch_selector(1, PVal::boolean(true));
  for (const auto& t : samples) {
    bool is_out = c->observe(t, {}, fuel).tag_index() == 0;
    EXPECT_EQ(apply(out, t, fuel).defined(), is_out);
    EXPECT_EQ(apply(spawnl, t, fuel).defined(), !is_out);
  }
}

TEST(Final, CaseRejectsBranchOnWrongTag) {
  auto c = coalgebra(proc_functor());
  Fuel fuel(100000);
  PVal s = stream_tree(*c, [](std::size_t k) { return k; });
  PVal everywhere = PVal::fun([](const PVal&, Fuel&) { return PVal::nat(1); }, "k");
  PVal never = PVal::fun([](const PVal&, Fuel&) { return PVal::undefined(); }, "bot");
  try {
    c->cotype_case({everywhere, everywhere}, {s}, fuel);
    FAIL() << "expected DomainMismatch";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::domain_mismatch);
  }
  try {
    c->cotype_case({never, never}, {s}, fuel);
    FAIL() << "expected DomainMismatch";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::domain_mismatch);
  }
}

TEST(Final, TwoConstantBranchesAreTagDirected) {
  auto c = coalgebra(proc_functor());
  Fuel fuel(1'000'000);
  auto on_tag = [c](std::size_t i, std::size_t value) {
    return PVal::fun(
        [c, i, value](const PVal& t, Fuel& fl) {
          return c->observe(t, {}, fl).tag_index() == i ? PVal::nat(value) : PVal::undefined();
        },
        "k");
  };
  std::mt19937 rng(3);
  std::vector<PVal> samples;
  for (int k = 0; k < 10; ++k)
    samples.push_back(c->unfold(random_table(c->nf(), 3, rng).as_pval(c->nf()), PVal::nat(0)));
  PVal h = c->cotype_case({on_tag(0, 10), on_tag(1, 20)}, samples, fuel);
  for (const auto& t : samples) {
    std::size_t tag = c->observe(t, {}, fuel).tag_index();
    EXPECT_EQ(apply(h, t, fuel).as_nat(), tag == 0 ? 10 : 20);
  }
}

// Unfold against the iteration oracle, the unfold equation, membership,
// uniqueness and the snoc/cons duality on random finite coalgebras.
class FinalProperty : public ::testing::TestWithParam<int> {};

TEST_P(FinalProperty, UnfoldMatchesIterationOracle) {
  auto f = finite_exponent_functors()[static_cast<std::size_t>(GetParam())];
  auto c = coalgebra(f);
  const auto& nf = c->nf();
  std::mt19937 rng(100 + static_cast<unsigned>(GetParam()));
  Fuel fuel(10'000'000);
  for (int trial = 0; trial < 8; ++trial) {
    auto table = random_table(nf, 1 + trial % 4, rng);
    PVal d = table.as_pval(nf);
    for (std::size_t z = 0; z < table.rows.size(); ++z) {
      PVal t = c->unfold(d, PVal::nat(z));
      for (const auto& p : c->paths(4))
        ASSERT_TRUE(strongly_equal(c->observe(t, p, fuel), table_observe(nf, table, z, p), 4, fuel))
            << show_bpath(p);
      EXPECT_TRUE(c->membership(t, 4, fuel).ok());
      EXPECT_TRUE(c->unfold_equation_holds(d, PVal::nat(z), 3, fuel));
    }
  }
}

TEST_P(FinalProperty, UnfoldIsUniqueAmongSolutions) {
  // u' is any family of trees satisfying u' z = α (F u' (d z)); building it
  // by recursion on path length from the clauses gives the same observations.
  auto f = finite_exponent_functors()[static_cast<std::size_t>(GetParam())];
  auto c = coalgebra(f);
  const auto& nf = c->nf();
  std::mt19937 rng(200 + static_cast<unsigned>(GetParam()));
  Fuel fuel(10'000'000);
  for (int trial = 0; trial < 5; ++trial) {
    auto table = random_table(nf, 3, rng);
    PVal d = table.as_pval(nf);
    std::function<PVal(std::size_t, std::size_t)> u_prime = [&](std::size_t z, std::size_t depth) -> PVal {
      const auto& row = table.rows[z];
      std::vector<PVal> kids;
      for (auto n : row.next) kids.push_back(depth == 0 ? stream_tree(*c, [](std::size_t) { return 0; })
                                                        : u_prime(n, depth - 1));
      auto ys = enumerate(nf.summands[row.tag].exponent);
      PVal g = PVal::fun(
          [ys, kids](const PVal& y, Fuel& fl) {
            for (std::size_t k = 0; k < ys.size(); ++k)
              if (strongly_equal(ys[k], y, 2, fl)) return kids[k];
            return PVal::undefined();
          },
          "g");
      return c->alpha(nf.make(row.tag, row.param, g), fuel);
    };
    for (std::size_t z = 0; z < table.rows.size(); ++z) {
      // u' is pinned down by the clauses only to the unrolled depth
      PVal approx = u_prime(z, 4);
      PVal u = c->unfold(d, PVal::nat(z));
      EXPECT_TRUE(c->bisimilar(u, approx, 4, fuel));
    }
  }
}

TEST_P(FinalProperty, SnocAndConsViewsAgree) {
  auto f = finite_exponent_functors()[static_cast<std::size_t>(GetParam())];
  auto c = coalgebra(f);
  const auto& nf = c->nf();
  std::mt19937 rng(300 + static_cast<unsigned>(GetParam()));
  Fuel fuel(10'000'000);
  for (int trial = 0; trial < 5; ++trial) {
    auto table = random_table(nf, 3, rng);
    PVal t = c->unfold(table.as_pval(nf), PVal::nat(0));
    for (const auto& p : c->paths(3)) {
      // cons view: descend with c along p
      PVal cur = t;
      bool defined = true;
      for (const auto& step : p) {
        PVal v = c->c(cur, fuel);
        if (!v || v.tag_index() != step.tag_index()) {
          defined = false;
          break;
        }
        cur = apply(v.payload().item(1), step.payload(), fuel);
      }
      PVal direct = c->observe(t, p, fuel);
      EXPECT_EQ(direct.defined(), defined) << show_bpath(p);
      if (defined) {
        EXPECT_TRUE(strongly_equal(direct, c->observe(cur, {}, fuel), 4, fuel));
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Functors, FinalProperty, ::testing::Range(0, 4));

TEST(MType, BinaryTreeEveryPathDefined) {
  auto m = MType::build({{"a"}, {{"l", "r"}}});
  MTree t = m.unfold([](const PVal&, Fuel&) {
    return std::make_pair(std::size_t{0}, std::function<std::optional<PVal>(std::size_t)>(
                                              [](std::size_t) -> std::optional<PVal> { return PVal::unit(); }));
  },
                     PVal::unit());
  Fuel fuel(100000);
  std::vector<Path> layer{{}};
  for (std::size_t k = 0; k <= 4; ++k) {
    std::vector<Path> next;
    for (const auto& p : layer) {
      EXPECT_EQ(t.f(p, fuel), std::optional<std::size_t>(0));
      for (std::size_t b = 0; b < 2; ++b) {
        auto q = p;
        q.push_back(b);
        next.push_back(q);
      }
    }
    layer = next;
  }
  EXPECT_TRUE(m.membership(t, 4, fuel).ok());
}

TEST(MType, CountToThreeThenStop) {
  auto m = MType::build({{"stop", "go"}, {{}, {"*"}}});
  MCoalgebra d = [](const PVal& n, Fuel&) {
    std::size_t k = static_cast<std::size_t>(n.as_nat());
    if (k < 3)
      return std::make_pair(std::size_t{1}, std::function<std::optional<PVal>(std::size_t)>(
                                                [k](std::size_t) -> std::optional<PVal> { return PVal::nat(k + 1); }));
    return std::make_pair(std::size_t{0}, std::function<std::optional<PVal>(std::size_t)>(
                                              [](std::size_t) -> std::optional<PVal> { return std::nullopt; }));
  };
  MTree t = m.unfold(d, PVal::nat(0));
  Fuel fuel(100000);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(t.f(Path(k, 0), fuel), std::optional<std::size_t>(1)) << k;
  EXPECT_EQ(t.f(Path(3, 0), fuel), std::optional<std::size_t>(0));
  EXPECT_FALSE(t.f(Path(4, 0), fuel).has_value());
  EXPECT_TRUE(m.membership(t, 5, fuel).ok());
  auto [a, sub] = m.c(t, fuel);
  EXPECT_EQ(a, 1u);
  EXPECT_EQ(sub(0).f(Path(2, 0), fuel), std::optional<std::size_t>(0));
}

TEST(MType, RejectsOverlappingFibers) {
  try {
    MType::build({{"a", "b"}, {{"x"}, {"x", "y"}}});
    FAIL() << "expected NonDisjointFibers";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::non_disjoint_fibers);
  }
}

TEST(MType, RandomUnfoldsSatisfyMembership) {
  std::mt19937 rng(11);
  Fuel fuel(10'000'000);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t shapes = 1 + rng() % 3;
    MSignature sig;
    std::size_t next_pos = 0;
    for (std::size_t a = 0; a < shapes; ++a) {
      sig.shapes.push_back("a" + std::to_string(a));
      std::vector<std::string> fiber;
      for (std::size_t k = rng() % 3; k > 0; --k) fiber.push_back("b" + std::to_string(next_pos++));
      sig.fibers.push_back(fiber);
    }
    auto m = MType::build(sig);
    std::size_t seeds = 1 + rng() % 4;
    std::vector<std::size_t> shape_of(seeds);
    std::vector<std::vector<std::size_t>> succ(seeds, std::vector<std::size_t>(m.positions()));
    for (std::size_t z = 0; z < seeds; ++z) {
      shape_of[z] = rng() % shapes;
      for (auto& s : succ[z]) s = rng() % seeds;
    }
    MCoalgebra d = [&, shape_of, succ](const PVal& z, Fuel&) {
      std::size_t k = static_cast<std::size_t>(z.as_nat());
      std::size_t a = shape_of[k];
      return std::make_pair(a, std::function<std::optional<PVal>(std::size_t)>(
                                   [&m, a, row = succ[k]](std::size_t b) -> std::optional<PVal> {
                                     if (m.q(b) != a) return std::nullopt;
                                     return PVal::nat(row[b]);
                                   }));
    };
    for (std::size_t z = 0; z < seeds; ++z) EXPECT_TRUE(m.membership(m.unfold(d, PVal::nat(z)), 4, fuel).ok());
  }
}

TEST(MType, AmbientComparisonIsBijective) {
  for (std::size_t bl = 0; bl <= 2; ++bl)
    for (std::size_t br = 0; br <= 2; ++br)
      for (std::size_t x = 0; x <= 3; ++x) {
        auto r = ambient_mtype_comparison(bl, br, x);
        EXPECT_TRUE(r.isomorphic()) << bl << " " << br << " " << x;
        // x^bl + x^br on both sides
        std::size_t expected = 1, e2 = 1;
        for (std::size_t k = 0; k < bl; ++k) expected *= x;
        for (std::size_t k = 0; k < br; ++k) e2 *= x;
        EXPECT_EQ(r.f_size, expected + e2);
        EXPECT_EQ(r.pq_size, expected + e2);
      }
}
