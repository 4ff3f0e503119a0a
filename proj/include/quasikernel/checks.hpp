#ifndef QUASIKERNEL_CHECKS_HPP
#define QUASIKERNEL_CHECKS_HPP

// Property suites shared by the command-line tool and the acceptance runner.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "quasikernel/cpo.hpp"
#include "quasikernel/final.hpp"
#include "quasikernel/initial.hpp"
#include "quasikernel/lab.hpp"
#include "quasikernel/surface.hpp"

namespace quasikernel::checks {

enum class Status { pass, fail, skip };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    default: return "skip";
  }
}

struct Check {
  std::string name;
  Status status = Status::pass;
  std::string detail;
};

struct Config {
  std::uint64_t fuel = 10000;
  std::size_t obs_depth = 4;
  std::size_t chain_bound = 32;
  std::uint64_t seed = 0;
};

using Report = std::vector<Check>;

inline void sort_checks(Report& r) {
  std::stable_sort(r.begin(), r.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
}

inline bool all_pass(const Report& r) {
  return std::none_of(r.begin(), r.end(), [](const Check& c) { return c.status == Status::fail; });
}

/// Outcome of one property: empty on success, else the first counterexample.
using Outcome = std::optional<std::string>;

inline Check run(std::string name, const std::function<std::string(Outcome&)>& body) {
  Check c{std::move(name), Status::pass, ""};
  try {
    Outcome failure;
    std::string summary = body(failure);
    if (failure) {
      c.status = Status::fail;
      c.detail = *failure;
    } else {
      c.detail = summary;
    }
  } catch (const error& e) {
    c.status = Status::fail;
    c.detail = e.what();
  }
  return c;
}

inline Check skipped(std::string name, std::string why) { return Check{std::move(name), Status::skip, std::move(why)}; }

namespace detail {

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ull ^ seed;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::mt19937_64 rng_for(const Config& cfg, const std::string& what) {
  return std::mt19937_64(fnv1a(what, cfg.seed));
}

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline TypeEnv bool_instance(const surface::TypeInfo& info) {
  TypeEnv env;
  for (const auto& v : info.variables) env.insert_or_assign(v, Ty::boolean());
  return env;
}

inline std::size_t index_of(const std::vector<PVal>& xs, const PVal& v) {
  for (std::size_t k = 0; k < xs.size(); ++k)
    if (strongly_equal(xs[k], v, 2)) return k;
  throw error(errc::type_mismatch, "value outside the enumerated sample: " + show(v));
}

// ---------------------------------------------------------------------------
// Trees of bounded depth with their structure kept alongside

struct TreeSet {
  struct Node {
    std::size_t summand;
    std::size_t param;  // index into params[summand]
    std::vector<std::size_t> kids;
    std::size_t depth;
  };
  std::vector<std::vector<PVal>> params;
  std::vector<Node> nodes;
  std::vector<PVal> trees;
  bool capped = false;

  /// Every tree of depth ≤ max_depth, children before parents.
  static TreeSet build(const InitialAlgebra& h, std::size_t max_depth, std::size_t cap = 20000) {
    TreeSet s;
    const PolyNF& nf = h.nf();
    for (const auto& sm : nf.summands) s.params.push_back(enumerate(sm.param, 2));
    for (std::size_t n = 1; n <= max_depth && !s.capped; ++n) {
      std::size_t older = s.nodes.size();
      std::vector<Node> fresh;
      for (std::size_t i = 0; i < nf.size() && !s.capped; ++i) {
        std::size_t k = nf.summands[i].arity;
        if (k == 0) {
          if (n == 1)
            for (std::size_t y = 0; y < s.params[i].size(); ++y) fresh.push_back({i, y, {}, 1});
          continue;
        }
        if (older == 0) continue;
        std::vector<std::size_t> idx(k, 0);
        while (true) {
          bool reaches = false;
          for (auto j : idx) reaches |= s.nodes[j].depth == n - 1;
          if (reaches)
            for (std::size_t y = 0; y < s.params[i].size(); ++y) fresh.push_back({i, y, idx, n});
          if (older + fresh.size() > cap) {
            s.capped = true;
            break;
          }
          std::size_t pos = k;
          while (pos > 0 && ++idx[pos - 1] == older) idx[--pos] = 0;
          if (pos == 0) break;
        }
      }
      for (auto& f : fresh) {
        if (s.nodes.size() >= cap) break;
        std::vector<PVal> kids;
        for (auto j : f.kids) kids.push_back(s.trees[j]);
        s.trees.push_back(h.construct(f.summand, s.params[f.summand][f.param], kids));
        s.nodes.push_back(std::move(f));
      }
    }
    return s;
  }

  /// F-value at node k with the children replaced by xs.
  PVal f_value(const PolyNF& nf, std::size_t k, const std::vector<PVal>& xs) const {
    const Node& n = nodes[k];
    return nf.make(n.summand, params[n.summand][n.param], xs);
  }

  std::vector<PVal> kid_trees(std::size_t k) const {
    std::vector<PVal> out;
    for (auto j : nodes[k].kids) out.push_back(trees[j]);
    return out;
  }

  std::string size_note() const {
    return std::to_string(trees.size()) + " trees" + (capped ? " (capped)" : "");
  }
};

// Algebra on {0..m-1} read from a table indexed by summand, parameter and
// the children's values.
struct TableAlgebra {
  std::size_t m = 1;
  std::vector<std::size_t> offset;  // per summand
  std::vector<std::size_t> table;

  static TableAlgebra random(const PolyNF& nf, const std::vector<std::vector<PVal>>& params, std::size_t m,
                             std::mt19937_64& rng) {
    TableAlgebra a;
    a.m = m;
    std::size_t total = 0;
    for (std::size_t i = 0; i < nf.size(); ++i) {
      a.offset.push_back(total);
      std::size_t c = params[i].size();
      for (std::size_t k = 0; k < nf.summands[i].arity; ++k) c *= m;
      total += c;
    }
    for (std::size_t k = 0; k < total; ++k) a.table.push_back(pick(rng, m));
    return a;
  }

  std::size_t at(std::size_t i, std::size_t y, const std::vector<std::size_t>& xs) const {
    std::size_t code = y;
    for (auto x : xs) code = code * m + x;
    return table.at(offset[i] + code);
  }

  PVal as_pval(const std::vector<std::vector<PVal>>& params) const {
    auto self = *this;
    return PVal::fun(
        [self, params](const PVal& v, Fuel&) {
          std::size_t i = v.tag_index();
          std::size_t y = index_of(params[i], v.payload().item(0));
          std::vector<std::size_t> xs;
          for (const auto& x : v.payload().item(1).tuple_items()) xs.push_back(static_cast<std::size_t>(x.as_nat()));
          return PVal::nat(self.at(i, y, xs));
        },
        "table");
  }
};

// An injective-ish code of the F-value: separates constructors and arguments.
inline natural value_code(const PVal& v) {
  switch (v.kind()) {
    case PVal::Kind::nat: return v.as_nat();
    case PVal::Kind::inl: return 2 * value_code(v.payload()) + 2;
    case PVal::Kind::inr: return 2 * value_code(v.payload()) + 3;
    case PVal::Kind::tag: return 7 * value_code(v.payload()) + v.tag_index();
    case PVal::Kind::tuple: {
      natural s = 5;
      for (const auto& x : v.tuple_items()) s = s * 13 + value_code(x);
      return s;
    }
    default: return 1;
  }
}

inline PVal hash_algebra() {
  return PVal::fun([](const PVal& v, Fuel&) { return PVal::nat(natural(value_code(v) % 1000003)); }, "hash");
}

inline bool list_shaped(const PolyNF& nf) {
  if (nf.size() != 2 || nf.summands[0].arity != 0 || nf.summands[1].arity != 1) return false;
  auto c = cardinality(nf.summands[0].param);
  return c && *c == 1;
}

// ---------------------------------------------------------------------------
// Coalgebras on finite seed sets

struct TableCoalgebra {
  struct Row {
    std::size_t tag;
    PVal param;
    std::vector<std::size_t> next;
  };
  std::vector<Row> rows;

  static TableCoalgebra random(const ExtPolyNF& nf, std::size_t seeds, std::mt19937_64& rng) {
    TableCoalgebra t;
    std::vector<std::size_t> inhabited;
    for (std::size_t i = 0; i < nf.size(); ++i)
      if (!enumerate(nf.summands[i].param, 4).empty()) inhabited.push_back(i);
    if (inhabited.empty()) return t;
    for (std::size_t z = 0; z < seeds; ++z) {
      std::size_t i = inhabited[pick(rng, inhabited.size())];
      auto ps = enumerate(nf.summands[i].param, 4);
      PVal a = ps[pick(rng, ps.size())];
      std::vector<std::size_t> next;
      for (std::size_t k = 0; k < enumerate(nf.summands[i].exponent).size(); ++k) next.push_back(pick(rng, seeds));
      t.rows.push_back({i, a, next});
    }
    return t;
  }

  PVal as_pval(const ExtPolyNF& nf) const {
    auto rs = rows;
    return PVal::fun(
        [rs, nf](const PVal& z, Fuel&) {
          const auto& row = rs.at(static_cast<std::size_t>(z.as_nat()));
          auto ys = enumerate(nf.summands[row.tag].exponent);
          auto next = row.next;
          PVal g = PVal::fun(
              [ys, next](const PVal& y, Fuel&) { return PVal::nat(next[index_of(ys, y)]); }, "succ");
          return nf.make(row.tag, row.param, g);
        },
        "d");
  }

  /// Iteration oracle: walk the table along the path.
  PVal observe(const ExtPolyNF& nf, std::size_t z, const BPath& p) const {
    for (const auto& step : p) {
      const auto& row = rows[z];
      if (step.tag_index() != row.tag) return PVal::undefined();
      z = row.next[index_of(enumerate(nf.summands[row.tag].exponent), step.payload())];
    }
    return PVal::tag(rows[z].tag, rows[z].param);
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Initial algebras of the declared free types

inline Report initial_type_suite(const surface::TypeInfo& generic, const Config& cfg) {
  Report out;
  const std::string prefix = "initial." + generic.decl.name + ".";
  surface::TypeInfo info = surface::instantiate(generic, detail::bool_instance(generic));
  auto h = info.initial;
  const PolyNF& nf = h->nf();
  auto ts = detail::TreeSet::build(*h, cfg.obs_depth);
  const std::size_t n = ts.trees.size();
  const std::string note = ts.size_note() + " of depth <= " + std::to_string(cfg.obs_depth) + (n == 0 ? " (empty carrier)" : "");

  out.push_back(run(prefix + "fold_equation", [&](Outcome& fail) {
    auto rng = detail::rng_for(cfg, prefix + "fold_equation");
    std::vector<PVal> algebras{detail::hash_algebra()};
    for (std::size_t m = 1; m <= 3; ++m)
      algebras.push_back(detail::TableAlgebra::random(nf, ts.params, m, rng).as_pval(ts.params));
    for (const auto& alg : algebras) {
      std::vector<PVal> folded(n);
      for (std::size_t k = 0; k < n && !fail; ++k) {
        Fuel fuel(cfg.fuel);
        folded[k] = h->fold(alg, ts.trees[k], fuel);
        std::vector<PVal> rs;
        for (auto j : ts.nodes[k].kids) rs.push_back(folded[j]);
        PVal rhs = apply(alg, ts.f_value(nf, k, rs), fuel);
        if (!strongly_equal(folded[k], rhs, cfg.obs_depth, fuel))
          fail = "fold " + show(ts.trees[k]) + " = " + show(folded[k]) + " but d (F fold) gives " + show(rhs);
      }
      if (fail) break;
    }
    return note + ", " + std::to_string(algebras.size()) + " algebras";
  }));

  out.push_back(run(prefix + "fold_uniqueness", [&](Outcome& fail) {
    auto rng = detail::rng_for(cfg, prefix + "fold_uniqueness");
    std::size_t searches = 0;
    for (std::size_t m = 1; m <= 3 && !fail; ++m)
      for (int trial = 0; trial < 3 && !fail; ++trial) {
        auto alg = detail::TableAlgebra::random(nf, ts.params, m, rng);
        // Depth-first search over all maps trees → {0..m-1}, pruned by the
        // fold equation at each tree once its children are assigned.
        std::vector<std::size_t> value(n, 0), solution;
        std::size_t solutions = 0;
        std::vector<std::size_t> next_try(n + 1, 0);
        std::size_t k = 0;
        while (true) {
          if (k == n) {
            if (++solutions == 1) solution = value;
            if (solutions > 1 || n == 0) break;
            if (k == 0) break;
            --k;
            continue;
          }
          bool placed = false;
          while (next_try[k] < m) {
            std::size_t b = next_try[k]++;
            std::vector<std::size_t> xs;
            for (auto j : ts.nodes[k].kids) xs.push_back(value[j]);
            if (alg.at(ts.nodes[k].summand, ts.nodes[k].param, xs) == b) {
              value[k] = b;
              placed = true;
              break;
            }
          }
          if (placed) {
            ++k;
            if (k < n) next_try[k] = 0;
          } else {
            if (k == 0) break;
            --k;
          }
        }
        ++searches;
        if (solutions != 1) {
          fail = std::to_string(solutions) + " solutions of the fold equation into a carrier of size " +
                 std::to_string(m);
          break;
        }
        PVal d = alg.as_pval(ts.params);
        for (std::size_t t = 0; t < n; ++t) {
          Fuel fuel(cfg.fuel);
          PVal f = h->fold(d, ts.trees[t], fuel);
          if (!f || f.as_nat() != solution[t]) {
            fail = "the unique solution differs from fold at " + show(ts.trees[t]);
            break;
          }
        }
      }
    return note + ", " + std::to_string(searches) + " exhaustive searches, one solution each";
  }));

  out.push_back(run(prefix + "lambek", [&](Outcome& fail) {
    for (std::size_t k = 0; k < n && !fail; ++k) {
      Fuel fuel(cfg.fuel);
      PVal inv = h->lambek_inverse(ts.trees[k], fuel);
      if (!strongly_equal(h->alpha(inv), ts.trees[k], cfg.obs_depth, fuel)) {
        fail = "alpha (fold (F alpha)) differs from the identity at " + show(ts.trees[k]);
        break;
      }
      PVal v = ts.f_value(nf, k, ts.kid_trees(k));
      if (!strongly_equal(h->lambek_inverse(h->alpha(v), fuel), v, cfg.obs_depth, fuel))
        fail = "fold (F alpha) . alpha differs from the identity at " + show(v);
    }
    return note + ", both composites";
  }));

  out.push_back(run(prefix + "primrec_projection", [&](Outcome& fail) {
    PVal tags = PVal::fun([](const PVal& y, Fuel&) { return PVal::nat(y.tag_index()); }, "tag");
    for (std::size_t k = 0; k < n && !fail; ++k) {
      Fuel fuel(cfg.fuel);
      PVal g = h->primrec_pair(tags, ts.trees[k], fuel);
      if (!g || !strongly_equal(g.item(0), ts.trees[k], cfg.obs_depth, fuel))
        fail = "first component of g differs from the tree at " + show(ts.trees[k]);
      else if (g.item(1).as_nat() != ts.nodes[k].summand)
        fail = "second component of g is wrong at " + show(ts.trees[k]);
    }
    return note;
  }));

  if (!detail::list_shaped(nf)) {
    out.push_back(skipped(prefix + "primrec_length", "no nil/cons shape"));
    out.push_back(skipped(prefix + "primrec_predecessor", "no nil/cons shape"));
    return out;
  }
  out.push_back(run(prefix + "primrec_predecessor", [&](Outcome& fail) {
    std::optional<PVal> nil;
    for (std::size_t k = 0; k < n && !nil; ++k)
      if (ts.nodes[k].summand == 0) nil = ts.trees[k];
    PVal zero = nil.value_or(PVal());
    PVal pred = PVal::fun(
        [zero](const PVal& y, Fuel&) { return y.tag_index() == 0 ? zero : y.payload().item(1).item(0).item(0); },
        "pred");
    for (std::size_t k = 0; k < n && !fail; ++k) {
      Fuel fuel(cfg.fuel);
      PVal got = h->primrec(pred, ts.trees[k], fuel);
      PVal oracle = ts.nodes[k].kids.empty() ? zero : ts.trees[ts.nodes[k].kids[0]];
      if (!strongly_equal(got, oracle, cfg.obs_depth, fuel))
        fail = "pred " + show(ts.trees[k]) + " = " + show(got) + ", expected " + show(oracle);
    }
    return note;
  }));
  out.push_back(run(prefix + "primrec_length", [&](Outcome& fail) {
    PVal length = PVal::fun(
        [](const PVal& y, Fuel&) {
          if (y.tag_index() == 0) return PVal::nat(0);
          return PVal::nat(natural(y.payload().item(1).item(0).item(1).as_nat() + 1));
        },
        "length");
    for (std::size_t k = 0; k < n && !fail; ++k) {
      Fuel fuel(cfg.fuel);
      PVal got = h->primrec(length, ts.trees[k], fuel);
      std::size_t oracle = ts.nodes[k].depth - 1;
      if (!got || got.as_nat() != oracle)
        fail = "length " + show(ts.trees[k]) + " = " + show(got) + ", expected " + std::to_string(oracle);
    }
    return note;
  }));
  return out;
}

/// List object, coproduct encoding and induction: independent of any file.
inline Report initial_global_suite(const Config& cfg) {
  Report out;
  out.push_back(run("initial.enclist", [&](Outcome& fail) {
    auto plus = kernel_builtins().at("plus");
    // f x acc = 2·acc + x + 1: order-sensitive
    PVal step = PVal::fun(
        [](const PVal& x, Fuel&) {
          return PVal::fun(
              [x](const PVal& acc, Fuel&) { return PVal::nat(natural(2 * acc.as_nat() + x.as_nat() + 1)); }, "step");
        },
        "step");
    std::vector<std::vector<unsigned>> seqs{{}};
    for (std::size_t begin = 0, len = 0; len < 6; ++len) {
      std::size_t end = seqs.size();
      for (std::size_t s = begin; s < end; ++s)
        for (unsigned v = 0; v < 2; ++v) {
          auto t = seqs[s];
          t.push_back(v);
          seqs.push_back(t);
        }
      begin = end;
    }
    for (const auto& s : seqs) {
      Fuel fuel(cfg.fuel);
      PVal l = enclist::nil();
      if (!enclist::invariant_holds(l, fuel)) fail = "invariant fails on nil";
      for (auto it = s.rbegin(); it != s.rend() && !fail; ++it) {
        l = enclist::cons(PVal::nat(*it), l);
        if (!enclist::invariant_holds(l, fuel)) fail = "invariant fails after a cons";
      }
      natural sum = 0, acc = 0;
      for (auto v : s) sum += v;
      for (auto it = s.rbegin(); it != s.rend(); ++it) acc = 2 * acc + *it + 1;
      std::string shown = "[";
      for (std::size_t i = 0; i < s.size(); ++i) shown += (i ? "," : "") + std::to_string(s[i]);
      shown += "]";
      if (!fail && enclist::fold(PVal::nat(0), plus, l, fuel).as_nat() != sum) fail = "fold 0 plus " + shown;
      if (!fail && enclist::fold(PVal::nat(0), step, l, fuel).as_nat() != acc) fail = "fold 0 step " + shown;
      if (fail) {
        *fail += " on " + shown;
        break;
      }
    }
    return std::to_string(seqs.size()) + " lists of length <= 6 over {0,1}";
  }));

  out.push_back(run("initial.coproduct_triple", [&](Outcome& fail) {
    std::vector<PVal> sums;
    for (const auto& v : enumerate(Ty::sum(Ty::boolean(), Ty::unit()))) sums.push_back(v);
    for (const auto& v : enumerate(Ty::sum(Ty::nat(), Ty::boolean()), 3)) sums.push_back(v);
    std::vector<PVal> maps{
        PVal::fun([](const PVal& x, Fuel&) { return PVal::pair(PVal::nat(0), x); }, "tag0"),
        PVal::fun([](const PVal& x, Fuel&) { return PVal::pair(PVal::nat(1), x); }, "tag1"),
        PVal::fun([](const PVal&, Fuel&) { return PVal::undefined(); }, "nowhere")};
    std::size_t cases = 0;
    for (const auto& v : sums) {
      Fuel fuel(cfg.fuel);
      PVal t = encode_sum_as_triple(v);
      if (!strongly_equal(decode_triple(t, fuel), v, 4, fuel)) fail = "round trip fails at " + show(v);
      else if (!triple_pattern_holds(t, fuel)) fail = "definedness pattern fails at " + show(v);
      for (const auto& f : maps)
        for (const auto& g : maps) {
          ++cases;
          if (!fail && !strongly_equal(triple_copair(f, g, t, fuel), sumcase(f, g, v, fuel), 4, fuel))
            fail = "copairing differs from sumcase at " + show(v);
        }
      if (fail) break;
    }
    return std::to_string(sums.size()) + " sum values, " + std::to_string(cases) + " copairings";
  }));

  out.push_back(run("initial.induction_via_fold", [&](Outcome& fail) {
    std::vector<std::pair<std::string, std::function<bool(unsigned)>>> preds{
        {"true", [](unsigned) { return true; }},
        {"n<7", [](unsigned n) { return n < 7; }},
        {"n mod 5 /= 4", [](unsigned n) { return n % 5 != 4; }},
        {"n /= 0", [](unsigned n) { return n != 0; }},
        {"n*n<200", [](unsigned n) { return n * n < 200; }}};
    for (const auto& [name, p] : preds) {
      Fuel fuel(cfg.fuel * 100);
      auto P = PVal::fun([p](const PVal& n, Fuel&) { return PVal::boolean(p(static_cast<unsigned>(n.as_nat()))); },
                         "P");
      auto r = induction_via_fold(P, 20, fuel);
      bool all = true;
      for (unsigned k = 0; k <= 20; ++k) {
        all = all && p(k);
        if (r.q[k] != all) {
          fail = "Q(" + std::to_string(k) + ") wrong for P = " + name;
          break;
        }
      }
      if (!fail && !r.matches_prefix_conjunction) fail = "prefix conjunction report wrong for P = " + name;
      if (fail) break;
    }
    return "5 predicates, n <= 20";
  }));
  return out;
}

inline Report initial_suite(const surface::ElabEnv& env, const Config& cfg) {
  Report out = initial_global_suite(cfg);
  for (const auto& name : env.order) {
    const auto& info = env.type(name);
    if (!info.is_free()) continue;
    auto r = initial_type_suite(info, cfg);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Final coalgebras of the declared cotypes

inline Report final_type_suite(const surface::TypeInfo& generic, const Config& cfg) {
  Report out;
  const std::string prefix = "final." + generic.decl.name + ".";
  surface::TypeInfo info = surface::instantiate(generic, detail::bool_instance(generic));
  auto c = info.final;
  const ExtPolyNF& nf = c->nf();
  const std::size_t depth = cfg.obs_depth;
  auto rng = detail::rng_for(cfg, prefix);
  std::vector<detail::TableCoalgebra> tables;
  for (std::size_t trial = 0; trial < 6; ++trial) {
    auto t = detail::TableCoalgebra::random(nf, 1 + trial % 3, rng);
    if (!t.rows.empty()) tables.push_back(std::move(t));
  }
  const auto paths = c->paths(depth);
  const std::string note = std::to_string(tables.size()) + " table coalgebras, " + std::to_string(paths.size()) +
                           " paths of length <= " + std::to_string(depth);
  auto each_seed = [&](const std::function<void(const detail::TableCoalgebra&, const PVal&, std::size_t, Fuel&,
                                                Outcome&)>& f) {
    Outcome fail;
    for (const auto& t : tables) {
      PVal d = t.as_pval(nf);
      for (std::size_t z = 0; z < t.rows.size() && !fail; ++z) {
        Fuel fuel(cfg.fuel);
        f(t, d, z, fuel, fail);
      }
      if (fail) break;
    }
    return fail;
  };

  out.push_back(run(prefix + "membership", [&](Outcome& fail) {
    fail = each_seed([&](const auto&, const PVal& d, std::size_t z, Fuel& fuel, Outcome& f) {
      auto m = c->membership(c->unfold(d, PVal::nat(z)), depth, fuel);
      if (!m.ok()) f = "unfold output from seed " + std::to_string(z) + " violates membership";
    });
    return note;
  }));
  out.push_back(run(prefix + "unfold_equation", [&](Outcome& fail) {
    fail = each_seed([&](const auto&, const PVal& d, std::size_t z, Fuel& fuel, Outcome& f) {
      if (!c->unfold_equation_holds(d, PVal::nat(z), depth, fuel))
        f = "c (unfold d z) differs from F (unfold d) (d z) at seed " + std::to_string(z);
    });
    return note;
  }));
  out.push_back(run(prefix + "unfold_matches_iteration", [&](Outcome& fail) {
    fail = each_seed([&](const detail::TableCoalgebra& t, const PVal& d, std::size_t z, Fuel& fuel, Outcome& f) {
      PVal u = c->unfold(d, PVal::nat(z));
      for (const auto& p : paths) {
        PVal o = c->observe(u, p, fuel);
        if (!strongly_equal(o, t.observe(nf, z, p), 4, fuel)) {
          f = "observation at " + show_bpath(p) + " from seed " + std::to_string(z) + " is " + show(o);
          return;
        }
      }
    });
    return note;
  }));
  out.push_back(run(prefix + "unfold_uniqueness", [&](Outcome& fail) {
    PVal blank = c->make([](const BPath&, Fuel&) { return PVal::undefined(); });
    fail = each_seed([&](const detail::TableCoalgebra& t, const PVal& d, std::size_t z, Fuel& fuel, Outcome& f) {
      // any solution of u z = alpha (F u (d z)) unrolled to the observation depth
      std::function<PVal(std::size_t, std::size_t)> solution = [&](std::size_t s, std::size_t k) -> PVal {
        const auto& row = t.rows[s];
        std::vector<PVal> kids;
        for (auto nx : row.next) kids.push_back(k == 0 ? blank : solution(nx, k - 1));
        auto ys = enumerate(nf.summands[row.tag].exponent);
        PVal g = PVal::fun([ys, kids](const PVal& y, Fuel&) { return kids[detail::index_of(ys, y)]; }, "g");
        return c->alpha(nf.make(row.tag, row.param, g), fuel);
      };
      if (!c->bisimilar(c->unfold(d, PVal::nat(z)), solution(z, depth), depth, fuel))
        f = "a second solution differs from unfold at seed " + std::to_string(z);
    });
    return note;
  }));
  out.push_back(run(prefix + "lambek", [&](Outcome& fail) {
    fail = each_seed([&](const auto&, const PVal& d, std::size_t z, Fuel& fuel, Outcome& f) {
      PVal u = c->unfold(d, PVal::nat(z));
      if (!c->bisimilar(c->alpha(c->c(u, fuel), fuel), u, depth, fuel)) {
        f = "alpha . c differs from the identity at seed " + std::to_string(z);
        return;
      }
      PVal w = fmap(nf, c->unfold_fun(d), apply(d, PVal::nat(z), fuel), fuel);
      if (!c->fc_equal(c->c(c->alpha(w, fuel), fuel), w, depth, fuel))
        f = "c . alpha differs from the identity at seed " + std::to_string(z);
    });
    return note;
  }));
  return out;
}

/// The counter stream n, n+1, … observed along the unique path of length k.
inline Check counter_stream_check(const Config& cfg) {
  return run("final.counter_stream", [&](Outcome& fail) {
    auto c = FinalCoalgebra::build(to_extpoly_nf(SigFunctor::prod(SigFunctor::constant(Ty::nat()), SigFunctor::id())),
                                   "Stream");
    const auto& nf = c->nf();
    PVal d = PVal::fun(
        [nf](const PVal& n, Fuel&) {
          PVal next = PVal::nat(natural(n.as_nat() + 1));
          return nf.make(0, n, PVal::fun([next](const PVal&, Fuel&) { return next; }, "succ"));
        },
        "counter");
    PVal t = c->unfold(d, PVal::nat(0));
    for (std::size_t k = 0; k <= 8; ++k) {
      Fuel fuel(cfg.fuel);
      PVal o = c->observe(t, BPath(k, PVal::tag(0, PVal::unit())), fuel);
      if (!o || o.tag_index() != 0 || o.payload().as_nat() != k) {
        fail = "observation at length " + std::to_string(k) + " is " + show(o);
        break;
      }
    }
    return std::string("k <= 8");
  });
}

inline Report final_suite(const surface::ElabEnv& env, const Config& cfg) {
  Report out{counter_stream_check(cfg)};
  for (const auto& name : env.order) {
    const auto& info = env.type(name);
    if (info.is_free()) continue;
    auto r = final_type_suite(info, cfg);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cpos, least fixed points and datatypes over cpos

namespace detail {

inline PVal nat_val(std::size_t n) { return PVal::nat(n); }

inline std::vector<PVal> nat_domain(std::size_t n) {
  std::vector<PVal> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(nat_val(k));
  return out;
}

inline PVal factorial_functional() {
  return PVal::fun(
      [](const PVal& p, Fuel&) {
        return PVal::fun(
            [p](const PVal& n, Fuel& fuel) {
              if (n.as_nat() == 0) return nat_val(1);
              PVal r = apply(p, PVal::nat(natural(n.as_nat() - 1)), fuel);
              if (!r) return PVal::undefined();
              return PVal::nat(natural(n.as_nat() * r.as_nat()));
            },
            "fact step");
      },
      "F");
}

// F p 0 = 0, F p n = p (n + 1): many pre-fixed points.
inline PVal shift_functional() {
  return PVal::fun(
      [](const PVal& p, Fuel&) {
        return PVal::fun(
            [p](const PVal& n, Fuel& fuel) {
              if (n.as_nat() == 0) return nat_val(0);
              return apply(p, PVal::nat(natural(n.as_nat() + 1)), fuel);
            },
            "shift step");
      },
      "G");
}

// All partial maps {0..d-1} ⇀ {0..v-1}.
inline std::vector<PVal> all_tables(std::size_t d, std::size_t v) {
  std::vector<std::vector<PVal>> tables{{}};
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<std::vector<PVal>> next;
    for (const auto& t : tables)
      for (std::size_t x = 0; x <= v; ++x) {
        auto w = t;
        w.push_back(x == v ? PVal::undefined() : nat_val(x));
        next.push_back(std::move(w));
      }
    tables = std::move(next);
  }
  std::vector<PVal> out;
  for (const auto& t : tables) out.push_back(quasikernel::detail::table_fun(nat_domain(d), t));
  return out;
}

inline Chain chain_of(std::vector<PVal> xs) {
  return [xs](std::size_t i) { return xs[std::min(i, xs.size() - 1)]; };
}

inline PVal capped_bump(std::size_t k, std::size_t top) {
  return PVal::fun([k, top](const PVal& y, Fuel&) { return PVal::nat(natural(std::min<natural>(y.as_nat() + k, top))); },
                   "bump");
}

}  // namespace detail

inline Report cpo_global_suite(const Config& cfg) {
  Report out;
  const std::size_t bound = cfg.chain_bound;

  out.push_back(run("cpo.partial_chain_sup", [&](Outcome& fail) {
    auto ord = total_order_cpo(3);
    std::vector<PVal> values{PVal(), detail::nat_val(0), detail::nat_val(1), detail::nat_val(2)};
    std::size_t chains = 0;
    std::vector<std::size_t> idx(5, 0);
    while (!fail) {
      Fuel fuel(cfg.fuel);
      std::vector<PVal> xs;
      for (auto i : idx) xs.push_back(values[i]);
      bool monotone = true;
      for (std::size_t i = 0; i + 1 < xs.size(); ++i) monotone = monotone && ord->lifted_leq(xs[i], xs[i + 1], fuel);
      if (monotone) {
        ++chains;
        bool any = std::any_of(xs.begin(), xs.end(), [](const PVal& x) { return x.defined(); });
        auto r = chain_sup(*ord, detail::chain_of(xs), bound, fuel);
        if (r.value.defined() != any || (any && r.value.as_nat() != xs.back().as_nat())) {
          std::string s;
          for (const auto& x : xs) s += (s.empty() ? "" : ",") + show(x);
          fail = "sup of chain [" + s + "] is " + show(r.value);
        }
      }
      std::size_t pos = idx.size();
      while (pos > 0 && ++idx[pos - 1] == values.size()) idx[--pos] = 0;
      if (pos == 0) break;
    }
    return std::to_string(chains) + " monotone chains of length 5 in 1 -?> {0<1<2}";
  }));

  out.push_back(run("cpo.factorial_lfp", [&](Outcome& fail) {
    Fuel fuel(cfg.fuel * 100);
    auto c = pfun_cpo(detail::nat_domain(8), flat_cpo(Ty::nat()));
    PVal f = detail::factorial_functional();
    auto r = lfp(*c, f, bound, fuel);
    PVal five = apply(r.value, detail::nat_val(5), fuel);
    if (!five || five.as_nat() != 120) fail = "lfp F 5 = " + show(five);
    else if (!is_fixed_point(*c, f, r.value, fuel)) fail = "lfp F is not a fixed point";
    return "lfp F 5 = 120";
  }));

  out.push_back(run("cpo.lfp_minimality", [&](Outcome& fail) {
    Fuel fuel(cfg.fuel * 10000);
    auto c = pfun_cpo(detail::nat_domain(4), flat_cpo(Ty::nat()));
    PVal g = detail::shift_functional();
    auto r = lfp(*c, g, bound, fuel);
    std::vector<PVal> pre;
    for (const auto& p : detail::all_tables(4, 3))
      if (is_pre_fixed_point(*c, g, p, fuel)) pre.push_back(p);
    auto rng = detail::rng_for(cfg, "cpo.lfp_minimality");
    std::shuffle(pre.begin(), pre.end(), rng);
    if (pre.size() > 10) pre.resize(10);
    auto m = check_minimality(*c, g, r.value, pre, fuel);
    if (m.pre_fixed_points < 10) fail = "only " + std::to_string(m.pre_fixed_points) + " pre-fixed points sampled";
    else if (!m.ok()) fail = "lfp is not below every sampled pre-fixed point";
    return "lfp below 10 sampled pre-fixed points";
  }));

  out.push_back(run("cpo.sum_stability", [&](Outcome& fail) {
    Fuel fuel(cfg.fuel);
    auto flat = flat_cpo(Ty::boolean());
    auto sum = sum_cpo(unit_cpo(), unit_cpo());
    for (const auto& x : enumerate(Ty::boolean()))
      for (const auto& y : enumerate(Ty::boolean()))
        if (flat->leq(x, y, fuel) != sum->leq(x, y, fuel)) fail = "Bool order differs from 1 + 1 at " + show(x);
    if (!sum->flat) fail = "1 + 1 is not flat";
    // chains in a sum keep the tag of their first defined element
    auto ord = total_order_cpo(4);
    auto s = sum_cpo(ord, ord);
    auto r = chain_sup(*s, detail::chain_of({PVal(), PVal::inl(detail::nat_val(0)), PVal::inl(detail::nat_val(2))}),
                       bound, fuel);
    if (!r.value.is_inl() || r.value.payload().as_nat() != 2) fail = "sum chain sup is " + show(r.value);
    try {
      chain_sup(*s, detail::chain_of({PVal::inl(detail::nat_val(0)), PVal::inr(detail::nat_val(0))}), bound, fuel);
      fail = "a chain changing summand was accepted";
    } catch (const error& e) {
      if (e.code() != errc::non_monotone) throw;
    }
    return "Bool flat and equal to 1 + 1; sum chains stay in one summand";
  }));

  auto ord_list = InitialAlgebra::build(
      to_poly_nf(SigFunctor::sum(SigFunctor::constant(Ty::unit()),
                                 SigFunctor::prod(SigFunctor::constant(Ty::nat()), SigFunctor::id()))),
      "OrdList");
  std::vector<CpoPtr> ord_params{unit_cpo(), total_order_cpo(3)};

  out.push_back(run("cpo.domain_constructors", [&](Outcome& fail) {
    Fuel fuel(cfg.fuel * 10000);
    DomainInitial dom(ord_list, ord_params);
    auto trees = dom.trees(2, 50);
    for (std::size_t i = 0; i < 2 && !fail; ++i)
      if (!dom.constructor_monotone(i, trees, fuel)) fail = "constructor " + std::to_string(i) + " not monotone";
    for (const auto& t : dom.trees(3, 40)) {
      if (fail) break;
      auto bump = [&](std::size_t k) {
        return dom.map_params(t, [k](std::size_t i, const PVal& y) {
          return i == 0 ? y : PVal::nat(natural(std::min<natural>(y.as_nat() + k, 2)));
        });
      };
      std::vector<PVal> ts{bump(0), bump(1), bump(2)};
      using detail::nat_val;
      if (!dom.constructor_continuous(1, {nat_val(0), nat_val(1), nat_val(1)}, ts, fuel) ||
          !dom.constructor_continuous(1, {nat_val(1), nat_val(2)}, {ts[0], ts[2]}, fuel))
        fail = "cons does not preserve the sup of a chain through " + show(t);
    }
    return std::string("monotone on comparable pairs, continuous on 2- and 3-element chains");
  }));

  out.push_back(run("cpo.domain_fold", [&](Outcome& fail) {
    Fuel fuel(cfg.fuel * 10000);
    DomainInitial dom(ord_list, ord_params);
    auto tcpo = dom.as_cpo();
    PVal sum = algebra_from_components(
        {PVal::fun([](const PVal&, Fuel&) { return detail::nat_val(0); }, "nil"),
         PVal::fun(
             [](const PVal& p, Fuel&) {
               return PVal::nat(natural(p.item(0).as_nat() + p.item(1).item(0).as_nat()));
             },
             "cons")});
    PVal fold = ord_list->fold_fun(sum);
    auto target = nat_order_cpo(20);
    auto trees = dom.trees(3, 60);
    if (!is_monotone(*tcpo, *target, fold, trees, fuel)) fail = "fold is not monotone";
    for (const auto& t : trees) {
      if (fail) break;
      std::vector<PVal> chain;
      for (std::size_t k = 0; k < 3; ++k)
        chain.push_back(dom.map_params(t, [k](std::size_t i, const PVal& y) {
          return i == 0 ? y : PVal::nat(natural(std::min<natural>(y.as_nat() + k, 2)));
        }));
      if (!preserves_sup(*tcpo, *target, fold, chain, fuel) ||
          !preserves_sup(*tcpo, *target, fold, {chain[0], chain[1]}, fuel))
        fail = "fold does not preserve the sup of a chain through " + show(t);
    }
    return std::to_string(trees.size()) + " trees";
  }));

  out.push_back(run("cpo.domain_final_sups", [&](Outcome& fail) {
    Fuel fuel(cfg.fuel * 10000);
    auto c = FinalCoalgebra::build(to_extpoly_nf(SigFunctor::sum(
        SigFunctor::constant(Ty::unit()), SigFunctor::prod(SigFunctor::constant(Ty::nat()), SigFunctor::id()))));
    DomainFinal dom(c, {unit_cpo(), total_order_cpo(4)}, cfg.obs_depth);
    const auto& nf = c->nf();
    auto coalg = [nf](std::size_t k) {
      return PVal::fun(
          [nf, k](const PVal& z, Fuel&) {
            std::size_t n = static_cast<std::size_t>(z.as_nat());
            if (n >= 3) return nf.make(0, PVal::unit(), PVal::fun([](const PVal&, Fuel&) { return PVal(); }, "none"));
            PVal next = PVal::nat(n + 1);
            return nf.make(1, PVal::nat(std::min<std::size_t>(n + k, 3)),
                           PVal::fun([next](const PVal&, Fuel&) { return next; }, "next"));
          },
          "d");
    };
    std::vector<PVal> chain;
    for (std::size_t k = 0; k < 3; ++k) chain.push_back(c->unfold(coalg(k), detail::nat_val(0)));
    for (std::size_t len : {2, 3}) {
      std::vector<PVal> part(chain.begin(), chain.begin() + static_cast<std::ptrdiff_t>(len));
      for (std::size_t k = 0; k + 1 < part.size(); ++k)
        if (!dom.leq(part[k], part[k + 1], fuel)) fail = "sampled chain is not increasing";
      PVal s = dom.sup(part);
      if (!c->membership(s, cfg.obs_depth, fuel).ok()) fail = "chain sup leaves the carrier";
      else if (!dom.equal(s, part.back(), fuel)) fail = "chain sup differs from its last element";
    }
    // unfold in the seed
    auto sc = FinalCoalgebra::build(to_extpoly_nf(SigFunctor::prod(SigFunctor::constant(Ty::nat()), SigFunctor::id())));
    auto ord = total_order_cpo(4);
    DomainFinal sdom(sc, {ord}, cfg.obs_depth);
    const auto& snf = sc->nf();
    PVal d = PVal::fun(
        [snf](const PVal& z, Fuel&) {
          PVal next = PVal::nat(natural(std::min<natural>(z.as_nat() + 1, 3)));
          return snf.make(0, z, PVal::fun([next](const PVal&, Fuel&) { return next; }, "next"));
        },
        "d");
    using detail::nat_val;
    if (!sdom.unfold_monotone(*ord, d, ord->samples(), fuel)) fail = "unfold is not monotone in the seed";
    if (!sdom.unfold_continuous(*ord, d, {nat_val(0), nat_val(1), nat_val(2)}, fuel) ||
        !sdom.unfold_continuous(*ord, d, {nat_val(2), nat_val(3)}, fuel))
      fail = "unfold does not preserve a chain sup of seeds";
    return std::string("sups of 2- and 3-element chains stay in the carrier");
  }));
  return out;
}

/// Declared types over flat parameter cpos: constructors monotone.
inline Report cpo_suite(const surface::ElabEnv& env, const Config& cfg) {
  Report out = cpo_global_suite(cfg);
  for (const auto& name : env.order) {
    const auto& generic = env.type(name);
    if (!generic.is_free()) continue;
    surface::TypeInfo info = surface::instantiate(generic, detail::bool_instance(generic));
    out.push_back(run("cpo." + name + ".constructors_monotone", [&](Outcome& fail) {
      Fuel fuel(cfg.fuel * 10000);
      std::vector<CpoPtr> ps;
      for (const auto& s : info.initial->nf().summands) ps.push_back(flat_cpo(s.param, 2));
      DomainInitial dom(info.initial, ps);
      auto trees = dom.trees(2, 30);
      for (std::size_t i = 0; i < info.initial->nf().size() && !fail; ++i)
        if (!dom.constructor_monotone(i, trees, fuel)) fail = "constructor " + std::to_string(i) + " not monotone";
      return std::to_string(trees.size()) + " trees over flat parameters";
    }));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finite quasitopos laboratories

namespace detail {

inline lab::FinObj random_object(lab::Cat c, std::size_t n, std::mt19937_64& rng) {
  if (c == lab::Cat::rere) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (x != y && rng() % 2) pairs.emplace_back(x, y);
    return lab::FinObj::rere(n, pairs);
  }
  std::set<lab::Mask> family;
  for (lab::Mask m = 0; m <= lab::full_mask(n); ++m)
    if (rng() % 2) family.insert(m);
  return lab::FinObj::spap(n, family);
}

inline Report lab_common(lab::Cat cat, const std::string& prefix, const Config& cfg) {
  using namespace lab;
  Report out;
  auto tests = all_objects(cat, 2);
  out.push_back(run(prefix + "initial_terminal", [&](Outcome& fail) {
    if (!is_initial(initial(cat), tests)) fail = "initial object fails: " + initial(cat).show();
    else if (!is_terminal(terminal(cat), tests)) fail = "terminal object fails: " + terminal(cat).show();
    return "0 = " + initial(cat).show() + ", 1 = " + terminal(cat).show();
  }));
  out.push_back(run(prefix + "products", [&](Outcome& fail) {
    auto rng = rng_for(cfg, prefix + "products");
    for (int trial = 0; trial < 12 && !fail; ++trial) {
      auto a = random_object(cat, pick(rng, 3), rng);
      auto b = random_object(cat, 1 + pick(rng, 2), rng);
      if (!product_universal(product(a, b), tests)) fail = a.show() + " x " + b.show();
    }
    return std::string("12 random products universal against all objects of size <= 2");
  }));
  out.push_back(run(prefix + "coproducts", [&](Outcome& fail) {
    auto rng = rng_for(cfg, prefix + "coproducts");
    for (int trial = 0; trial < 12 && !fail; ++trial) {
      auto a = random_object(cat, pick(rng, 3), rng);
      auto b = random_object(cat, pick(rng, 3), rng);
      if (!coproduct_universal(coproduct(a, b), tests)) fail = a.show() + " + " + b.show();
    }
    return std::string("12 random coproducts universal against all objects of size <= 2");
  }));
  out.push_back(run(prefix + "equalizers", [&](Outcome& fail) {
    auto rng = rng_for(cfg, prefix + "equalizers");
    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 15 && !fail; ++trial) {
      auto x = random_object(cat, 1 + pick(rng, 4), rng);
      auto y = random_object(cat, 1 + pick(rng, 3), rng);
      auto hs = hom_set(x, y);
      if (hs.size() < 2) continue;
      const auto& f = hs[pick(rng, hs.size())];
      const auto& g = hs[pick(rng, hs.size())];
      if (!equalizer_universal(equalizer(f, g), f, g, tests)) fail = x.show() + " => " + y.show();
      ++checked;
    }
    return std::to_string(checked) + " random equalizers universal";
  }));
  out.push_back(run(prefix + "regularity_matches_equalizer_search", [&](Outcome& fail) {
    auto objs = all_objects(cat, 2);
    std::size_t monos = 0;
    for (const auto& a : objs)
      for (const auto& x : objs)
        for (const auto& m : hom_set(a, x)) {
          if (!m.injective() || fail) continue;
          ++monos;
          if (is_regular_mono(m).regular != is_equalizer_of_some_pair(m, objs))
            fail = a.show() + " -> " + x.show();
        }
    return std::to_string(monos) + " monos between objects of size <= 2";
  }));
  return out;
}

}  // namespace detail

inline Report lab_rere_suite(const Config& cfg) {
  using namespace lab;
  Report out = detail::lab_common(Cat::rere, "rere.", cfg);
  out.push_back(run("rere.regular(0→1)", [&](Outcome& fail) {
    FinMor m{initial(Cat::rere), terminal(Cat::rere), {}};
    bool r = is_regular_mono(m).regular;
    if (!r) fail = "regular(0→1)=false";
    return std::string("regular(0→1)=true");
  }));
  out.push_back(run("rere.coarse_iff_indiscrete", [&](Outcome& fail) {
    std::size_t objects = 0, coarse = 0;
    for (const auto& a : all_objects(Cat::rere, 4)) {
      ++objects;
      bool c = is_coarse(a);
      coarse += c;
      if (c != a.is_indiscrete()) {
        fail = a.show() + (c ? " coarse but not indiscrete" : " indiscrete but not coarse");
        break;
      }
    }
    return std::to_string(objects) + " objects of size <= 4, " + std::to_string(coarse) + " coarse";
  }));
  out.push_back(run("rere.coproducts_disjoint", [&](Outcome& fail) {
    auto one = terminal(Cat::rere);
    auto s = coproduct(one, one);
    auto pb = pullback(s.i1, s.i2);
    if (!is_initial(pb.obj, all_objects(Cat::rere, 2))) fail = "pullback of the injections is " + pb.obj.show();
    return "pullback of the injections 1 -> 1+1 is " + pb.obj.show();
  }));
  out.push_back(run("rere.nno_fragment", [&](Outcome& fail) {
    auto r = nno_fragment_check(6, 3);
    if (!r.discrete_initial()) fail = "discrete truncation is not initial against every algebra";
    else if (r.indiscrete_initial()) fail = "indiscrete truncation has unique morphisms";
    else if (!r.discrete_not_coarse) fail = "discrete truncation is coarse";
    else if (!r.one_point_unique) fail = "one-point algebra has no unique morphism";
    return std::to_string(r.algebras) + " algebras; discrete unique in " + std::to_string(r.unique_discrete) +
           ", indiscrete in " + std::to_string(r.unique_indiscrete) + "; discrete not coarse";
  }));
  return out;
}

inline Report lab_spap_suite(const Config& cfg) {
  using namespace lab;
  Report out = detail::lab_common(Cat::spap, "spap.", cfg);
  out.push_back(run("spap.initial_terminal_shape", [&](Outcome& fail) {
    if (!(initial(Cat::spap) == FinObj::spap(0, {}))) fail = "0 = " + initial(Cat::spap).show();
    if (!(terminal(Cat::spap) == FinObj::spap(1, {0, 1}))) fail = "1 = " + terminal(Cat::spap).show();
    return std::string("0 = (∅,∅), 1 = ({*},𝒫({*}))");
  }));
  out.push_back(run("spap.regular(0→1)", [&](Outcome& fail) {
    FinMor m{initial(Cat::spap), terminal(Cat::spap), {}};
    auto r = is_regular_mono(m);
    bool eq = is_equalizer_of_some_pair(m, all_objects(Cat::spap, 2));
    if (r.regular || eq) fail = "regular(0→1)=true";
    else if (!(r.closure == FinObj::spap(0, {0}))) fail = "regular subobject is " + r.closure.show();
    return std::string("regular(0→1)=false; regular subobject (∅,{∅}), not (∅,∅)");
  }));
  out.push_back(run("spap.coarse_iff_all_subsets", [&](Outcome& fail) {
    std::size_t objects = 0;
    for (const auto& a : all_objects(Cat::spap, 2)) {
      ++objects;
      if (is_coarse(a) != (a.family.size() == (std::size_t{1} << a.n))) {
        fail = a.show();
        break;
      }
    }
    return std::to_string(objects) + " objects of size <= 2";
  }));
  out.push_back(run("spap.coproducts_not_disjoint", [&](Outcome& fail) {
    auto one = terminal(Cat::spap);
    auto s = coproduct(one, one);
    auto pb = pullback(s.i1, s.i2);
    if (is_initial(pb.obj, all_objects(Cat::spap, 2))) fail = "pullback of the injections is initial";
    return "pullback of the injections 1 -> 1+1 is " + pb.obj.show() + ", not initial";
  }));
  return out;
}

inline Report lab_mtypes_suite(const Config&) {
  using namespace lab;
  Report out;
  out.push_back(run("mtypes.extpoly_vs_mtype_at_1_empty", [&](Outcome& fail) {
    auto r = mtype_vs_extpoly(terminal(Cat::spap), spap_one_empty(), spap_one_empty());
    if (r.f_size == 0 || r.pq_size != 0)
      fail = "|F(1_∅)| = " + std::to_string(r.f_size) + ", |P_q(1_∅)| = " + std::to_string(r.pq_size);
    return "|F(1_∅)| = " + std::to_string(r.f_size) + ", |P_q(1_∅)| = " + std::to_string(r.pq_size);
  }));
  out.push_back(run("mtypes.agree_for_total_fibers", [&](Outcome& fail) {
    std::size_t n = 0;
    for (const auto& x : all_objects(Cat::spap, 2)) {
      ++n;
      auto r = mtype_vs_extpoly(terminal(Cat::spap), terminal(Cat::spap), x);
      if (r.f_size != r.pq_size) {
        fail = "sizes differ at X = " + x.show();
        break;
      }
    }
    return std::to_string(n) + " objects X of size <= 2";
  }));
  out.push_back(run("mtypes.ambient_comparison", [&](Outcome& fail) {
    for (std::size_t bl = 0; bl <= 2; ++bl)
      for (std::size_t br = 0; br <= 2; ++br)
        for (std::size_t x = 0; x <= 3; ++x)
          if (!fail && !ambient_mtype_comparison(bl, br, x).isomorphic())
            fail = "not a bijection at |B_l|=" + std::to_string(bl) + ", |B_r|=" + std::to_string(br) +
                   ", |X|=" + std::to_string(x);
    return std::string("F X and P_q X in bijection for |B_l|,|B_r| <= 2, |X| <= 3");
  }));
  return out;
}

inline Report lab_suite(const std::string& which, const Config& cfg) {
  if (which == "rere") return lab_rere_suite(cfg);
  if (which == "spap") return lab_spap_suite(cfg);
  if (which == "mtypes") return lab_mtypes_suite(cfg);
  throw error(errc::invalid_argument, "unknown lab " + which);
}

}  // namespace quasikernel::checks

#endif
