#ifndef QUASIKERNEL_CPO_HPP
#define QUASIKERNEL_CPO_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quasikernel/error.hpp"
#include "quasikernel/final.hpp"
#include "quasikernel/initial.hpp"
#include "quasikernel/kernel.hpp"
#include "quasikernel/pval.hpp"
#include "quasikernel/types.hpp"

namespace quasikernel {

/// A partial chain, given by the values x_i () (possibly undefined).
using Chain = std::function<PVal(std::size_t)>;

class Cpo;
using CpoPtr = std::shared_ptr<const Cpo>;

/// A partial order with suprema of partial chains. `leq` compares defined
/// values; `sup_total` receives a monotone chain of defined values.
class Cpo {
 public:
  std::string name;
  std::function<bool(const PVal&, const PVal&, Fuel&)> leq;
  std::function<PVal(const Chain&, std::size_t bound, Fuel&)> sup_total;
  std::function<std::vector<PVal>()> samples;
  std::optional<PVal> bottom;
  bool flat = false;

  /// The order on 1 ⇀ A: x ⊑ y ⇔ (def x () ⇒ x () ⊑ y ()).
  bool lifted_leq(const PVal& x, const PVal& y, Fuel& fuel) const {
    if (!x) return true;
    return y.defined() && leq(x, y, fuel);
  }

  bool equal(const PVal& x, const PVal& y, Fuel& fuel) const {
    return lifted_leq(x, y, fuel) && lifted_leq(y, x, fuel);
  }
};

struct ChainSup {
  PVal value;
  std::optional<std::size_t> first_defined;
  std::optional<std::size_t> stabilized_at;
};

/// ⊔ᵢ xᵢ over i ≤ bound: undefined iff no xᵢ is defined, otherwise the
/// supremum of the defined tail. Non-monotone chains are rejected.
inline ChainSup chain_sup(const Cpo& cpo, const Chain& chain, std::size_t bound, Fuel& fuel) {
  std::vector<PVal> xs;
  for (std::size_t i = 0; i <= bound; ++i) xs.push_back(chain(i));
  for (std::size_t i = 0; i < bound; ++i)
    if (!cpo.lifted_leq(xs[i], xs[i + 1], fuel))
      throw error(errc::non_monotone, cpo.name + " chain decreases or jumps at index " + std::to_string(i));
  ChainSup r;
  for (std::size_t i = 0; i <= bound; ++i)
    if (xs[i]) {
      r.first_defined = i;
      break;
    }
  if (!r.first_defined) return r;
  std::size_t n = *r.first_defined;
  r.value = cpo.sup_total([&xs, n](std::size_t i) { return xs[std::min(n + i, xs.size() - 1)]; }, bound - n, fuel);
  for (std::size_t i = n; i <= bound; ++i)
    if (cpo.equal(xs[i], r.value, fuel)) {
      r.stabilized_at = i;
      break;
    }
  return r;
}

namespace detail {

/// Sup of an eventually constant chain under decidable equality; a chain
/// still changing at the bound is NotStabilized.
inline PVal stabilizing_sup(const std::string& name, const Chain& chain, std::size_t bound,
                            const std::function<bool(const PVal&, const PVal&)>& same) {
  PVal last = chain(bound);
  if (bound > 0 && !same(chain(bound - 1), last))
    throw error(errc::not_stabilized, name + " chain still increasing at bound " + std::to_string(bound));
  return last;
}

inline std::vector<PVal> nats(std::size_t n) {
  std::vector<PVal> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(PVal::nat(k));
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Base cpos

inline CpoPtr unit_cpo() {
  auto c = std::make_shared<Cpo>();
  c->name = "Unit";
  c->leq = [](const PVal&, const PVal&, Fuel&) { return true; };
  c->sup_total = [](const Chain& ch, std::size_t, Fuel&) { return ch(0); };
  c->samples = [] { return std::vector<PVal>{PVal::unit()}; };
  c->bottom = PVal::unit();
  c->flat = true;
  return c;
}

/// Discrete order on `carrier`; chains are constant once defined.
inline CpoPtr flat_cpo(const Ty& carrier, std::size_t nat_sample = 6) {
  auto c = std::make_shared<Cpo>();
  c->name = "flat " + carrier.show();
  c->leq = [](const PVal& a, const PVal& b, Fuel& fuel) { return strongly_equal(a, b, 4, fuel); };
  c->sup_total = [name = c->name](const Chain& ch, std::size_t bound, Fuel& fuel) {
    PVal v = ch(0);
    for (std::size_t i = 1; i <= bound; ++i)
      if (!strongly_equal(v, ch(i), 4, fuel))
        throw error(errc::non_monotone, name + " chain takes two distinct values");
    return v;
  };
  c->samples = [carrier, nat_sample] { return enumerate(carrier, nat_sample); };
  c->flat = true;
  return c;
}

/// The naturals 0 < 1 < … < n-1.
inline CpoPtr total_order_cpo(std::size_t n) {
  auto c = std::make_shared<Cpo>();
  c->name = "order " + std::to_string(n);
  c->leq = [](const PVal& a, const PVal& b, Fuel&) { return a.as_nat() <= b.as_nat(); };
  c->sup_total = [name = c->name](const Chain& ch, std::size_t bound, Fuel&) {
    return detail::stabilizing_sup(name, ch, bound, [](const PVal& a, const PVal& b) { return a.as_nat() == b.as_nat(); });
  };
  c->samples = [n] { return detail::nats(n); };
  if (n > 0) c->bottom = PVal::nat(0);
  return c;
}

/// The naturals under ≤; infinite height, so increasing chains fail to stabilize.
inline CpoPtr nat_order_cpo(std::size_t sample = 6) {
  auto c = std::make_shared<Cpo>(*total_order_cpo(sample));
  c->name = "Nat ≤";
  return c;
}

/// Finite lists of naturals (tuples) under the prefix order.
inline CpoPtr prefix_cpo() {
  auto c = std::make_shared<Cpo>();
  c->name = "prefix";
  auto items = [](const PVal& v) { return v.is_unit() ? std::vector<PVal>{} : v.tuple_items(); };
  c->leq = [items](const PVal& a, const PVal& b, Fuel&) {
    auto xs = items(a), ys = items(b);
    if (xs.size() > ys.size()) return false;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (xs[i].as_nat() != ys[i].as_nat()) return false;
    return true;
  };
  c->sup_total = [items](const Chain& ch, std::size_t bound, Fuel&) {
    return detail::stabilizing_sup("prefix", ch, bound,
                                   [items](const PVal& a, const PVal& b) { return items(a).size() == items(b).size(); });
  };
  c->samples = [] {
    return std::vector<PVal>{PVal::unit(), PVal::tuple({PVal::nat(0)}), PVal::tuple({PVal::nat(1)}),
                             PVal::tuple({PVal::nat(0), PVal::nat(1)})};
  };
  c->bottom = PVal::unit();
  return c;
}

// ---------------------------------------------------------------------------
// Constructions

inline CpoPtr product_cpo(CpoPtr a, CpoPtr b) {
  auto c = std::make_shared<Cpo>();
  c->name = a->name + " × " + b->name;
  c->leq = [a, b](const PVal& x, const PVal& y, Fuel& fuel) {
    return a->leq(x.item(0), y.item(0), fuel) && b->leq(x.item(1), y.item(1), fuel);
  };
  c->sup_total = [a, b](const Chain& ch, std::size_t bound, Fuel& fuel) {
    PVal l = a->sup_total([&ch](std::size_t i) { return ch(i).item(0); }, bound, fuel);
    PVal r = b->sup_total([&ch](std::size_t i) { return ch(i).item(1); }, bound, fuel);
    return PVal::pair(l, r);
  };
  c->samples = [a, b] {
    std::vector<PVal> out;
    for (const auto& x : a->samples())
      for (const auto& y : b->samples()) out.push_back(PVal::pair(x, y));
    return out;
  };
  if (a->bottom && b->bottom) c->bottom = PVal::pair(*a->bottom, *b->bottom);
  c->flat = a->flat && b->flat;
  return c;
}

/// Sum order: tags incomparable, componentwise within a tag.
inline CpoPtr sum_cpo(CpoPtr a, CpoPtr b) {
  auto c = std::make_shared<Cpo>();
  c->name = a->name + " + " + b->name;
  c->leq = [a, b](const PVal& x, const PVal& y, Fuel& fuel) {
    if (x.is_inl() && y.is_inl()) return a->leq(x.payload(), y.payload(), fuel);
    if (x.is_inr() && y.is_inr()) return b->leq(x.payload(), y.payload(), fuel);
    return false;
  };
  c->sup_total = [a, b, name = c->name](const Chain& ch, std::size_t bound, Fuel& fuel) {
    bool left = ch(0).is_inl();
    for (std::size_t i = 1; i <= bound; ++i)
      if (ch(i).is_inl() != left) throw error(errc::non_monotone, name + " chain changes summand");
    Chain inner = [&ch](std::size_t i) { return ch(i).payload(); };
    return left ? PVal::inl(a->sup_total(inner, bound, fuel)) : PVal::inr(b->sup_total(inner, bound, fuel));
  };
  c->samples = [a, b] {
    std::vector<PVal> out;
    for (const auto& x : a->samples()) out.push_back(PVal::inl(x));
    for (const auto& y : b->samples()) out.push_back(PVal::inr(y));
    return out;
  };
  c->flat = a->flat && b->flat;
  return c;
}

/// Σᵢ Aᵢ with values in<i> x, ordered within each tag.
inline CpoPtr tagged_sum_cpo(std::vector<CpoPtr> parts) {
  auto c = std::make_shared<Cpo>();
  c->name = "tagged sum";
  c->leq = [parts](const PVal& x, const PVal& y, Fuel& fuel) {
    if (x.tag_index() != y.tag_index()) return false;
    return parts.at(x.tag_index())->leq(x.payload(), y.payload(), fuel);
  };
  c->sup_total = [parts](const Chain& ch, std::size_t bound, Fuel& fuel) {
    std::size_t i = ch(0).tag_index();
    for (std::size_t k = 1; k <= bound; ++k)
      if (ch(k).tag_index() != i) throw error(errc::non_monotone, "tagged chain changes summand");
    return PVal::tag(i, parts.at(i)->sup_total([&ch](std::size_t k) { return ch(k).payload(); }, bound, fuel));
  };
  c->samples = [parts] {
    std::vector<PVal> out;
    for (std::size_t i = 0; i < parts.size(); ++i)
      for (const auto& x : parts[i]->samples()) out.push_back(PVal::tag(i, x));
    return out;
  };
  return c;
}

namespace detail {

/// A partial table on `domain`: entry k is the value at domain[k], or
/// undefined. Arguments outside the domain are undefined.
inline PVal table_fun(std::vector<PVal> domain, std::vector<PVal> values) {
  return PVal::fun(
      [domain = std::move(domain), values = std::move(values)](const PVal& x, Fuel& fuel) {
        for (std::size_t k = 0; k < domain.size(); ++k) {
          bool hit = false;
          try {
            hit = strongly_equal(domain[k], x, 4, fuel);
          } catch (const error& e) {
            if (e.code() != errc::incomparable_types) throw;
          }
          if (hit) return values[k];
        }
        return PVal::undefined();
      },
      "table");
}

}  // namespace detail

/// C ⇀ B, ordered pointwise on the sampled arguments `domain`; pointed by
/// the everywhere undefined map. Sups are taken pointwise as partial chains.
inline CpoPtr pfun_cpo(std::vector<PVal> domain, CpoPtr b, std::size_t sample_count = 12) {
  auto c = std::make_shared<Cpo>();
  c->name = "⇀ " + b->name;
  c->leq = [domain, b](const PVal& f, const PVal& g, Fuel& fuel) {
    for (const auto& x : domain)
      if (!b->lifted_leq(apply(f, x, fuel), apply(g, x, fuel), fuel)) return false;
    return true;
  };
  c->sup_total = [b](const Chain& ch, std::size_t bound, Fuel& fuel) {
    std::vector<PVal> fs;
    for (std::size_t i = 0; i <= bound; ++i) fs.push_back(ch(i));
    (void)fuel;
    return PVal::fun(
        [fs, b, bound](const PVal& x, Fuel& fl) {
          return chain_sup(*b, [&](std::size_t i) { return apply(fs[i], x, fl); }, bound, fl).value;
        },
        "sup");
  };
  c->samples = [domain, b, sample_count] {
    // tables whose k-th sample leaves the first (k mod |dom|+1) points defined
    std::vector<PVal> out{bot(Ty::unit())};
    auto values = b->samples();
    if (values.empty() || domain.empty()) return out;
    for (std::size_t k = 0; out.size() < sample_count && k < 4 * sample_count; ++k) {
      std::vector<PVal> table;
      std::size_t defined = 1 + k % domain.size();
      for (std::size_t j = 0; j < domain.size(); ++j)
        table.push_back(j < defined ? values[(j * 7 + k * 3) % values.size()] : PVal::undefined());
      out.push_back(detail::table_fun(domain, table));
    }
    return out;
  };
  c->bottom = bot(Ty::unit());
  return c;
}

/// A →c B, total continuous maps ordered pointwise on the samples of A.
inline CpoPtr cfun_cpo(CpoPtr a, CpoPtr b) {
  auto c = std::make_shared<Cpo>();
  c->name = a->name + " →c " + b->name;
  c->leq = [a, b](const PVal& f, const PVal& g, Fuel& fuel) {
    for (const auto& x : a->samples())
      if (!b->leq(apply(f, x, fuel), apply(g, x, fuel), fuel)) return false;
    return true;
  };
  c->sup_total = [b](const Chain& ch, std::size_t bound, Fuel&) {
    std::vector<PVal> fs;
    for (std::size_t i = 0; i <= bound; ++i) fs.push_back(ch(i));
    return PVal::fun(
        [fs, b, bound](const PVal& x, Fuel& fl) {
          return b->sup_total([&](std::size_t i) { return apply(fs[i], x, fl); }, bound, fl);
        },
        "sup");
  };
  c->samples = [b] {
    std::vector<PVal> out;
    for (const auto& y : b->samples()) out.push_back(PVal::fun([y](const PVal&, Fuel&) { return y; }, "const"));
    return out;
  };
  if (b->bottom) c->bottom = PVal::fun([v = *b->bottom](const PVal&, Fuel&) { return v; }, "const");
  return c;
}

/// 1 ⇀ A as a cppo.
inline CpoPtr lift_cpo(CpoPtr a) { return pfun_cpo({PVal::unit()}, std::move(a)); }

// ---------------------------------------------------------------------------
// Least fixed points and hypothesis checks

struct LfpResult {
  PVal value;
  std::vector<PVal> iterates;  // f⁰ ⊥ … f^bound ⊥
};

/// ⊔ₙ fⁿ ⊥ over n ≤ bound.
inline LfpResult lfp(const Cpo& cppo, const PVal& f, std::size_t bound, Fuel& fuel) {
  if (!cppo.bottom) throw error(errc::invalid_argument, cppo.name + " has no bottom element");
  LfpResult r;
  r.iterates.push_back(*cppo.bottom);
  for (std::size_t n = 0; n < bound; ++n) r.iterates.push_back(apply(f, r.iterates.back(), fuel));
  const auto& it = r.iterates;
  r.value = chain_sup(cppo, [&it](std::size_t i) { return it[i]; }, bound, fuel).value;
  return r;
}

inline bool is_fixed_point(const Cpo& cpo, const PVal& f, const PVal& x, Fuel& fuel) {
  return cpo.equal(apply(f, x, fuel), x, fuel);
}

inline bool is_pre_fixed_point(const Cpo& cpo, const PVal& f, const PVal& p, Fuel& fuel) {
  return cpo.lifted_leq(apply(f, p, fuel), p, fuel);
}

struct MinimalityReport {
  std::size_t pre_fixed_points = 0;
  std::size_t below = 0;
  bool ok() const { return pre_fixed_points == below; }
};

inline MinimalityReport check_minimality(const Cpo& cpo, const PVal& f, const PVal& least,
                                         const std::vector<PVal>& candidates, Fuel& fuel) {
  MinimalityReport r;
  for (const auto& p : candidates) {
    if (!is_pre_fixed_point(cpo, f, p, fuel)) continue;
    ++r.pre_fixed_points;
    if (cpo.lifted_leq(least, p, fuel)) ++r.below;
  }
  return r;
}

/// Reflexivity, transitivity and antisymmetry on sampled values; returns a
/// description of the first failure.
inline std::optional<std::string> check_order_axioms(const Cpo& cpo, const std::vector<PVal>& xs, Fuel& fuel) {
  for (const auto& x : xs)
    if (!cpo.leq(x, x, fuel)) return "not reflexive at " + show(x);
  for (const auto& x : xs)
    for (const auto& y : xs) {
      bool xy = cpo.leq(x, y, fuel), yx = cpo.leq(y, x, fuel);
      if (xy && yx && !strongly_equal(x, y, 4, fuel)) return "not antisymmetric at " + show(x) + ", " + show(y);
      if (!xy) continue;
      for (const auto& z : xs)
        if (cpo.leq(y, z, fuel) && !cpo.leq(x, z, fuel))
          return "not transitive at " + show(x) + ", " + show(y) + ", " + show(z);
    }
  return std::nullopt;
}

inline bool is_monotone(const Cpo& a, const Cpo& b, const PVal& f, const std::vector<PVal>& xs, Fuel& fuel) {
  for (const auto& x : xs)
    for (const auto& y : xs)
      if (a.leq(x, y, fuel) && !b.lifted_leq(apply(f, x, fuel), apply(f, y, fuel), fuel)) return false;
  return true;
}

/// f (⊔ xs) = ⊔ (f xs) for a finite chain xs (extended by its last element).
inline bool preserves_sup(const Cpo& a, const Cpo& b, const PVal& f, const std::vector<PVal>& xs, Fuel& fuel) {
  if (xs.empty()) return true;
  std::size_t bound = xs.size();
  Chain in = [&xs](std::size_t i) { return xs[std::min(i, xs.size() - 1)]; };
  PVal lhs = apply(f, chain_sup(a, in, bound, fuel).value, fuel);
  std::vector<PVal> ys;
  for (const auto& x : xs) ys.push_back(apply(f, x, fuel));
  PVal rhs = chain_sup(b, [&ys](std::size_t i) { return ys[std::min(i, ys.size() - 1)]; }, bound, fuel).value;
  return b.equal(lhs, rhs, fuel);
}

// ---------------------------------------------------------------------------
// Datatypes over cpo parameters

/// T ordered as a subtype of DTree: labels pointwise in Σᵢ (Aᵢ + 1), depths
/// flat, anchor in A₁.
class DomainInitial {
 public:
  DomainInitial(std::shared_ptr<InitialAlgebra> alg, std::vector<CpoPtr> params)
      : alg_(std::move(alg)), params_(std::move(params)) {
    if (params_.size() != alg_->nf().size())
      throw error(errc::invalid_argument, "one parameter cpo per summand expected");
  }

  const InitialAlgebra& algebra() const { return *alg_; }
  const std::vector<CpoPtr>& params() const { return params_; }

  bool leq(const PVal& t, const PVal& u, Fuel& fuel) const {
    const DTree& a = as_tree(t);
    const DTree& b = as_tree(u);
    for (const auto& p : PathMap<natural>::witnesses(a.d, b.d)) {
      auto x = a.d.get(p);
      if (!x) continue;
      auto y = b.d.get(p);
      if (!y || *x != *y) return false;
    }
    for (const auto& p : PathMap<PVal>::witnesses(a.l, b.l)) {
      auto x = a.l.get(p);
      if (!x || !*x) continue;
      auto y = b.l.get(p);
      if (!y || !*y || !label_leq(*x, *y, fuel)) return false;
    }
    return params_[0]->lifted_leq(a.x, b.x, fuel);
  }

  /// Sup of a chain of trees: the shape settles at once (depth is flat), the
  /// parameters take their sups.
  PVal sup(const Chain& ch, std::size_t bound, Fuel& fuel, std::size_t max_depth = 64) const {
    if (max_depth == 0) throw error(errc::not_stabilized, "tree chain deeper than the bound");
    auto node = alg_->root(ch(0));
    if (!node) throw error(errc::not_in_carrier, "chain element is not a constructed tree");
    std::vector<PVal> ys;
    for (std::size_t m = 0; m <= bound; ++m) {
      auto n = alg_->root(ch(m));
      if (!n || n->index != node->index) throw error(errc::non_monotone, "tree chain changes constructor");
      ys.push_back(n->param);
    }
    PVal y = params_[node->index]->sup_total([&ys](std::size_t m) { return ys[m]; }, bound, fuel);
    std::vector<PVal> kids;
    for (std::size_t j = 1; j <= alg_->nf().summands[node->index].arity; ++j)
      kids.push_back(sup([&, j](std::size_t m) { return alg_->sel(j, ch(m)); }, bound, fuel, max_depth - 1));
    return alg_->construct(node->index, y, kids);
  }

  CpoPtr as_cpo(std::size_t tree_depth = 3) const {
    auto c = std::make_shared<Cpo>();
    auto self = std::make_shared<DomainInitial>(*this);
    c->name = alg_->name();
    c->leq = [self](const PVal& t, const PVal& u, Fuel& fuel) { return self->leq(t, u, fuel); };
    c->sup_total = [self](const Chain& ch, std::size_t bound, Fuel& fuel) { return self->sup(ch, bound, fuel); };
    c->samples = [self, tree_depth] { return self->trees(tree_depth, 200); };
    return c;
  }

  std::vector<PVal> trees(std::size_t depth, std::size_t cap) const {
    std::vector<std::vector<PVal>> ps;
    for (const auto& p : params_) ps.push_back(p->samples());
    return alg_->enumerate_trees(depth, ps, cap);
  }

  /// The same tree with every parameter of summand i replaced by f(i, y).
  PVal map_params(const PVal& t, const std::function<PVal(std::size_t, const PVal&)>& f) const {
    auto node = alg_->root(t);
    if (!node) return PVal::undefined();
    std::vector<PVal> kids;
    for (std::size_t j = 1; j <= alg_->nf().summands[node->index].arity; ++j)
      kids.push_back(map_params(alg_->sel(j, t), f));
    return alg_->construct(node->index, f(node->index, node->param), kids);
  }

  /// Constructor i is monotone on the sampled comparable argument tuples.
  bool constructor_monotone(std::size_t i, const std::vector<PVal>& trees, Fuel& fuel) const {
    auto ys = params_[i]->samples();
    std::size_t k = alg_->nf().summands[i].arity;
    for (const auto& y : ys)
      for (const auto& y2 : ys) {
        if (!params_[i]->leq(y, y2, fuel)) continue;
        for (const auto& t : trees)
          for (const auto& u : trees) {
            if (!leq(t, u, fuel)) continue;
            std::vector<PVal> a(k, t), b(k, u);
            if (!leq(alg_->construct(i, y, a), alg_->construct(i, y2, b), fuel)) return false;
          }
      }
    return true;
  }

  /// cᵢ (⊔ yₘ, ⊔ tₘ, …) = ⊔ cᵢ (yₘ, tₘ, …) for the given chains.
  bool constructor_continuous(std::size_t i, const std::vector<PVal>& ys, const std::vector<PVal>& ts,
                              Fuel& fuel) const {
    // a finite chain continues with its last element
    std::size_t bound = ys.size();
    auto at = [](const std::vector<PVal>& v, std::size_t m) { return v[std::min(m, v.size() - 1)]; };
    std::size_t k = alg_->nf().summands[i].arity;
    PVal y = params_[i]->sup_total([&](std::size_t m) { return at(ys, m); }, bound, fuel);
    std::vector<PVal> kids;
    if (k > 0) kids.assign(k, sup([&](std::size_t m) { return at(ts, m); }, bound, fuel));
    PVal lhs = alg_->construct(i, y, kids);
    std::vector<PVal> built;
    for (std::size_t m = 0; m < ys.size(); ++m)
      built.push_back(alg_->construct(i, ys[m], std::vector<PVal>(k, k > 0 ? at(ts, m) : PVal())));
    PVal rhs = sup([&](std::size_t m) { return at(built, m); }, bound, fuel);
    return leq(lhs, rhs, fuel) && leq(rhs, lhs, fuel);
  }

 private:
  bool label_leq(const PVal& a, const PVal& b, Fuel& fuel) const {
    if (!a.is_tag() || !b.is_tag() || a.tag_index() != b.tag_index()) return false;
    const PVal& x = a.payload();
    const PVal& y = b.payload();
    if (x.is_inr() && y.is_inr()) return true;
    if (x.is_inl() && y.is_inl()) return params_.at(a.tag_index())->leq(x.payload(), y.payload(), fuel);
    return false;
  }

  std::shared_ptr<InitialAlgebra> alg_;
  std::vector<CpoPtr> params_;
};

/// CPTree: process trees ordered pointwise on paths of length ≤ depth, with
/// labels in the tagged sum of the parameter cpos.
class DomainFinal {
 public:
  DomainFinal(std::shared_ptr<FinalCoalgebra> coalg, std::vector<CpoPtr> params, std::size_t depth = 4)
      : coalg_(std::move(coalg)), labels_(tagged_sum_cpo(params)), params_(std::move(params)), depth_(depth) {
    if (params_.size() != coalg_->nf().size())
      throw error(errc::invalid_argument, "one parameter cpo per summand expected");
  }

  const FinalCoalgebra& coalgebra() const { return *coalg_; }

  bool leq(const PVal& t, const PVal& u, Fuel& fuel) const {
    for (const auto& p : coalg_->paths(depth_))
      if (!labels_->lifted_leq(coalg_->observe(t, p, fuel), coalg_->observe(u, p, fuel), fuel)) return false;
    return true;
  }

  bool equal(const PVal& t, const PVal& u, Fuel& fuel) const { return leq(t, u, fuel) && leq(u, t, fuel); }

  /// Pathwise sup: p ↦ ⊔ₘ tₘ p, a partial chain at every path. The chain
  /// continues with its last element.
  PVal sup(const std::vector<PVal>& chain) const {
    std::size_t bound = chain.size();
    auto labels = labels_;
    auto coalg = coalg_;
    auto ts = chain;
    return coalg_->make([labels, coalg, ts, bound](const BPath& p, Fuel& fuel) {
      return chain_sup(*labels, [&](std::size_t m) { return coalg->observe(ts[std::min(m, ts.size() - 1)], p, fuel); },
                       bound, fuel)
          .value;
    });
  }

  /// z ⊑ z' ⇒ unfold d z ⊑ unfold d z' on the sampled seeds.
  bool unfold_monotone(const Cpo& seeds, const PVal& d, const std::vector<PVal>& zs, Fuel& fuel) const {
    for (const auto& z : zs)
      for (const auto& z2 : zs)
        if (seeds.leq(z, z2, fuel) && !leq(coalg_->unfold(d, z), coalg_->unfold(d, z2), fuel)) return false;
    return true;
  }

  /// unfold d (⊔ zₘ) = ⊔ unfold d zₘ.
  bool unfold_continuous(const Cpo& seeds, const PVal& d, const std::vector<PVal>& zs, Fuel& fuel) const {
    std::size_t bound = zs.size();
    PVal z = chain_sup(seeds, [&zs](std::size_t m) { return zs[std::min(m, zs.size() - 1)]; }, bound, fuel).value;
    std::vector<PVal> us;
    for (const auto& s : zs) us.push_back(coalg_->unfold(d, s));
    return equal(coalg_->unfold(d, z), sup(us), fuel);
  }

 private:
  std::shared_ptr<FinalCoalgebra> coalg_;
  CpoPtr labels_;
  std::vector<CpoPtr> params_;
  std::size_t depth_;
};

}  // namespace quasikernel

#endif
