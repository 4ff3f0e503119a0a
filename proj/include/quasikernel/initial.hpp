#ifndef QUASIKERNEL_INITIAL_HPP
#define QUASIKERNEL_INITIAL_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quasikernel/error.hpp"
#include "quasikernel/functors.hpp"
#include "quasikernel/kernel.hpp"
#include "quasikernel/path_map.hpp"
#include "quasikernel/pval.hpp"
#include "quasikernel/types.hpp"

namespace quasikernel {

// ---------------------------------------------------------------------------
// Lists as 1 + (l : Nat ⇀ A, n : Nat) with def (l m) ⇔ m ≤ n

namespace enclist {

inline PVal nil() { return PVal::inl(PVal::unit()); }

/// cons x l, following the two clauses of the construction: the singleton
/// case gets its undefined tail from x↾⊥, otherwise the old map is shifted.
inline PVal cons(const PVal& x, const PVal& l) {
  if (!x || !l) return PVal::undefined();
  if (l.is_inl()) {
    PVal body = PVal::fun(
        [x](const PVal& k, Fuel&) { return k.as_nat() == 0 ? x : restrict(x, PVal::boolean(false)); }, "list");
    return PVal::inr(PVal::pair(body, PVal::nat(0)));
  }
  if (!l.is_inr()) throw error(errc::type_mismatch, "cons expects a list, got " + l.describe_kind());
  PVal old = l.payload().item(0);
  const natural& n = l.payload().item(1).as_nat();
  PVal body = PVal::fun(
      [x, old](const PVal& k, Fuel& fuel) {
        if (k.as_nat() == 0) return x;
        return apply(old, PVal::nat(natural(k.as_nat() - 1)), fuel);
      },
      "list");
  return PVal::inr(PVal::pair(body, PVal::nat(natural(n + 1))));
}

inline PVal from_values(const std::vector<PVal>& xs) {
  PVal l = nil();
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) l = cons(*it, l);
  return l;
}

/// Checks def (l m) ⇔ m ≤ n for m up to n + extra.
inline bool invariant_holds(const PVal& list, Fuel& fuel, std::size_t extra = 3) {
  if (!list) return false;
  if (list.is_inl()) return list.payload().is_unit();
  PVal l = list.payload().item(0);
  const natural& n = list.payload().item(1).as_nat();
  for (natural m = 0; m <= n + extra; ++m)
    if (apply(l, PVal::nat(m), fuel).defined() != (m <= n)) return false;
  return true;
}

inline std::vector<PVal> to_values(const PVal& list, Fuel& fuel) {
  if (!invariant_holds(list, fuel)) throw error(errc::invariant_violation, "list definedness pattern");
  std::vector<PVal> out;
  if (list.is_inl()) return out;
  PVal l = list.payload().item(0);
  const natural& n = list.payload().item(1).as_nat();
  for (natural m = 0; m <= n; ++m) out.push_back(apply(l, PVal::nat(m), fuel));
  return out;
}

namespace detail {

// h l 0 = f (l 0) c ;  h l (suc n) = f (l 0) (h (λk. l (suc k)) n)
inline PVal h(const PVal& c, const PVal& f, const PVal& l, const natural& n, Fuel& fuel) {
  fuel.tick();
  PVal head = apply(l, PVal::nat(0), fuel);
  if (n == 0) return apply(apply(f, head, fuel), c, fuel);
  PVal tail = PVal::fun([l](const PVal& k, Fuel& fl) { return apply(l, PVal::nat(natural(k.as_nat() + 1)), fl); },
                        "tail");
  return apply(apply(f, head, fuel), h(c, f, tail, natural(n - 1), fuel), fuel);
}

}  // namespace detail

/// fold c f with f curried: f x acc.
inline PVal fold(const PVal& c, const PVal& f, const PVal& list, Fuel& fuel) {
  if (!list) return PVal::undefined();
  if (!invariant_holds(list, fuel)) throw error(errc::invariant_violation, "list definedness pattern");
  if (list.is_inl()) return c;
  return detail::h(c, f, list.payload().item(0), list.payload().item(1).as_nat(), fuel);
}

}  // namespace enclist

// ---------------------------------------------------------------------------
// Universal trees DTree = (l : Path ⇀ A, d : Path ⇀ Nat, x : A₁)

class InitialAlgebra;

/// Renders a decomposed node: summand index, parameter value, rendered
/// children.
using TreePrinter = std::function<std::string(std::size_t, const PVal&, const std::vector<std::string>&)>;

class DTree final : public Opaque {
 public:
  PathMap<PVal> l;     // labels in A = Σᵢ (Aᵢ + 1), encoded in<i> (inl y | inr ())
  PathMap<natural> d;  // depths
  PVal x;              // anchor in A₁
  std::shared_ptr<const InitialAlgebra> owner;

  std::string kind() const override { return "tree"; }
  bool equals(const Opaque& other, std::size_t depth, Fuel& fuel) const override;
  std::string show() const override;
};

inline const DTree& as_tree(const PVal& v) {
  if (const auto* t = v.opaque_as<DTree>()) return *t;
  throw error(errc::type_mismatch, "expected a tree, got " + v.describe_kind());
}

inline bool DTree::equals(const Opaque& other, std::size_t depth, Fuel& fuel) const {
  const auto* o = dynamic_cast<const DTree*>(&other);
  if (!o) throw error(errc::incomparable_types, "tree vs " + other.kind());
  if (!path_maps_equal<natural>(d, o->d, [](const natural& a, const natural& b) { return a == b; })) return false;
  if (!path_maps_equal<PVal>(l, o->l, [&](const PVal& a, const PVal& b) { return strongly_equal(a, b, depth, fuel); }))
    return false;
  return strongly_equal(x, o->x, depth, fuel);
}

/// Initial algebra for a polynomial normal form, carved out of DTree.
class InitialAlgebra : public std::enable_shared_from_this<InitialAlgebra> {
 public:
  static std::shared_ptr<InitialAlgebra> build(PolyNF nf, std::string name = "T") {
    return std::shared_ptr<InitialAlgebra>(new InitialAlgebra(std::move(nf), std::move(name)));
  }

  const PolyNF& nf() const { return nf_; }
  const std::string& name() const { return name_; }

  /// All constant types empty: the carrier has no elements.
  bool empty_constant_type() const {
    auto c = cardinality(nf_.summands[0].param);
    return nf_.summands[0].param.kind() == Ty::Kind::zero || (c && *c == 0);
  }

  void set_printer(TreePrinter p) { printer_ = std::move(p); }

  // -- constructors and selectors ------------------------------------------

  /// cᵢ (y, t₁, …, t_k).
  PVal construct(std::size_t i, const PVal& y, const std::vector<PVal>& kids) const {
    if (i >= nf_.size()) throw error(errc::tag_out_of_range, "constructor " + std::to_string(i));
    if (kids.size() != nf_.summands[i].arity)
      throw error(errc::type_mismatch, "constructor " + std::to_string(i) + " expects " +
                                           std::to_string(nf_.summands[i].arity) + " subtrees");
    if (!y) return PVal::undefined();
    for (const auto& k : kids)
      if (!k) return PVal::undefined();
    auto t = std::make_shared<DTree>();
    t->owner = shared_from_this();
    t->l.set({}, PVal::tag(i, PVal::inr(PVal::unit())));
    t->l.set_prefix({0}, PVal::tag(i, PVal::inl(y)));
    natural deepest = 0;
    for (std::size_t j = 0; j < kids.size(); ++j) {
      const DTree& kid = as_tree(kids[j]);
      t->l.graft(j + 1, kid.l);
      t->d.graft(j + 1, kid.d);
      if (auto dj = kid.d.get({})) deepest = std::max(deepest, *dj);
      else return PVal::undefined();  // max is strict in its arguments
    }
    t->d.set({}, natural(1 + deepest));
    t->d.set_prefix({0}, natural(0));
    t->x = kids.empty() ? y : as_tree(kids[0]).x;
    return PVal::opaque(t);
  }

  /// α : F T → T on normal-form values.
  PVal alpha(const PVal& v) const {
    if (!v) return PVal::undefined();
    auto [i, y, xs] = nf_.split(v);
    return construct(i, y, xs);
  }

  PVal alpha_fun() const {
    auto self = shared_from_this();
    return PVal::fun([self](const PVal& v, Fuel&) { return self->alpha(v); }, "α");
  }

  /// depth (l, d, x) = d nil.
  PVal depth(const PVal& t) const {
    if (!t) return PVal::undefined();
    auto n = as_tree(t).d.get({});
    return n ? PVal::nat(*n) : PVal::undefined();
  }

  /// selⱼ (l, d, x) = (l ∘ cons j, d ∘ cons j, x), for j > 0.
  PVal sel(std::size_t j, const PVal& t) const {
    if (!t) return PVal::undefined();
    const DTree& tree = as_tree(t);
    auto s = std::make_shared<DTree>();
    s->owner = tree.owner;
    s->l = tree.l.shifted_down(j);
    s->d = tree.d.shifted_down(j);
    s->x = tree.x;
    return PVal::opaque(s);
  }

  // -- membership -----------------------------------------------------------

  struct Node {
    std::size_t index;
    PVal param;
  };

  /// Reads the root constructor the way the fold's case ladder does.
  std::optional<Node> root(const PVal& t) const {
    if (!t) return std::nullopt;
    const DTree& tree = as_tree(t);
    auto top = tree.l.get({});
    if (!top || !*top || !top->is_tag()) return std::nullopt;
    std::size_t i = top->tag_index();
    if (i >= nf_.size() || !top->payload().is_inr()) return std::nullopt;
    auto leaf = tree.l.get({0});
    if (!leaf || !*leaf || !leaf->is_tag() || leaf->tag_index() != i || !leaf->payload().is_inl()) return std::nullopt;
    return Node{i, leaf->payload().payload()};
  }

  /// Rebuilds t from the constructors by recursive decomposition; the
  /// result's anchor is the one the constructors force.
  PVal rebuild(const PVal& t, std::size_t bound) const {
    if (bound == 0) return PVal::undefined();
    auto node = root(t);
    if (!node) return PVal::undefined();
    std::vector<PVal> kids;
    for (std::size_t j = 1; j <= nf_.summands[node->index].arity; ++j) {
      PVal k = rebuild(sel(j, t), bound - 1);
      if (!k) return PVal::undefined();
      kids.push_back(k);
    }
    return construct(node->index, node->param, kids);
  }

  /// Membership in T, the least subtype closed under the constructors,
  /// for trees of depth at most max_depth.
  bool is_in_T(const PVal& t, std::size_t max_depth = 64) const {
    if (!t || !t.opaque_as<DTree>()) return false;
    PVal r = rebuild(t, max_depth);
    if (!r) return false;
    Fuel fuel(10'000'000);
    try {
      return as_tree(r).equals(as_tree(t), 4, fuel);
    } catch (const error& e) {
      if (e.code() == errc::incomparable_types) return false;  // ill-typed labels
      throw;
    }
  }

  // -- recursion --------------------------------------------------------------

  /// fold d z = f (depth z) z, d : F B → B on normal-form values. Running
  /// into one of the proof's bot_B branches raises NotInCarrier.
  PVal fold(const PVal& algebra, const PVal& t, Fuel& fuel) const {
    if (!t) return PVal::undefined();
    auto n = as_tree(t).d.get({});
    if (!n) throw error(errc::not_in_carrier, "depth undefined");
    return f(*n, algebra, t, fuel);
  }

  PVal fold_fun(const PVal& algebra) const {
    auto self = shared_from_this();
    return PVal::fun([self, algebra](const PVal& t, Fuel& fuel) { return self->fold(algebra, t, fuel); },
                     "fold");
  }

  /// g = fold of (α (F π₁ y), body y); primrec body = π₂ ∘ g.
  PVal primrec_pair(const PVal& body, const PVal& t, Fuel& fuel) const {
    auto self = shared_from_this();
    PVal fst = PVal::fun([](const PVal& p, Fuel&) { return p.item(0); }, "π₁");
    PVal pairing = PVal::fun(
        [self, body, fst](const PVal& y, Fuel& fl) {
          PVal tree = self->alpha(fmap(self->nf_, fst, y, fl));
          PVal value = apply(body, y, fl);
          if (!tree || !value) return PVal::undefined();
          return PVal::pair(tree, value);
        },
        "pairing");
    return fold(pairing, t, fuel);
  }

  PVal primrec(const PVal& body, const PVal& t, Fuel& fuel) const {
    PVal g = primrec_pair(body, t, fuel);
    return g ? g.item(1) : PVal::undefined();
  }

  /// fold (F α) : T → F T.
  PVal lambek_inverse(const PVal& t, Fuel& fuel) const {
    auto self = shared_from_this();
    PVal step = PVal::fun([self](const PVal& v, Fuel& fl) { return fmap(self->nf_, self->alpha_fun(), v, fl); },
                          "Fα");
    return fold(step, t, fuel);
  }

  /// Branch i receives (w, (t₁, …, t_k)).
  PVal case_op(const std::vector<PVal>& branches, const PVal& t, Fuel& fuel) const {
    if (branches.size() != nf_.size()) throw error(errc::type_mismatch, "one branch per summand expected");
    PVal v = lambek_inverse(t, fuel);
    if (!v) return PVal::undefined();
    auto [i, w, xs] = nf_.split(v);
    return apply(branches[i], PVal::pair(w, PVal::tuple(xs)), fuel);
  }

  // -- enumeration ------------------------------------------------------------

  /// All trees of depth ≤ max_depth whose parameters range over params[i]
  /// for summand i, ordered by depth. Stops after `cap` trees.
  std::vector<PVal> enumerate_trees(std::size_t max_depth, const std::vector<std::vector<PVal>>& params,
                                    std::size_t cap = 1'000'000) const {
    if (params.size() != nf_.size()) throw error(errc::invalid_argument, "one parameter list per summand expected");
    std::vector<PVal> all;
    std::vector<std::size_t> depth_of;
    for (std::size_t n = 1; n <= max_depth && all.size() < cap; ++n) {
      const std::size_t older = all.size();
      std::vector<PVal> fresh;
      for (std::size_t i = 0; i < nf_.size() && fresh.size() + older < cap; ++i) {
        std::size_t k = nf_.summands[i].arity;
        if (k == 0) {
          if (n != 1) continue;
          for (const auto& y : params[i]) fresh.push_back(construct(i, y, {}));
          continue;
        }
        // tuples over trees of depth < n with at least one of depth n-1
        if (older == 0) continue;
        std::vector<std::size_t> idx(k, 0);
        bool done = false;
        while (!done && fresh.size() + older < cap) {
          bool has_max = false;
          for (auto j : idx) has_max |= depth_of[j] == n - 1;
          if (has_max) {
            std::vector<PVal> kids;
            for (auto j : idx) kids.push_back(all[j]);
            for (const auto& y : params[i]) fresh.push_back(construct(i, y, kids));
          }
          std::size_t pos = k;
          while (true) {
            if (pos == 0) {
              done = true;
              break;
            }
            --pos;
            if (++idx[pos] < older) break;
            idx[pos] = 0;
          }
        }
      }
      for (auto& t : fresh) {
        all.push_back(std::move(t));
        depth_of.push_back(n);
      }
    }
    if (all.size() > cap) all.resize(cap);
    return all;
  }

  /// Renders a member of T as a constructor term.
  std::optional<std::string> describe(const PVal& t, std::size_t bound = 64) const {
    if (bound == 0) return std::nullopt;
    auto node = root(t);
    if (!node) return std::nullopt;
    std::vector<std::string> kids;
    for (std::size_t j = 1; j <= nf_.summands[node->index].arity; ++j) {
      auto k = describe(sel(j, t), bound - 1);
      if (!k) return std::nullopt;
      kids.push_back(*k);
    }
    if (printer_) return printer_(node->index, node->param, kids);
    std::string s = "in" + std::to_string(node->index) + "(" + show(node->param);
    for (const auto& k : kids) s += "; " + k;
    return s + ")";
  }

 private:
  InitialAlgebra(PolyNF nf, std::string name) : nf_(std::move(nf)), name_(std::move(name)) {
    if (nf_.summands.empty() || nf_.summands[0].arity != 0)
      throw error(errc::invalid_argument, "normal form must start with the constants summand");
  }

  // f 0 z = bot ; f (suc n) z = case ladder on l nil and l [0]
  PVal f(const natural& n, const PVal& algebra, const PVal& t, Fuel& fuel) const {
    fuel.tick();
    if (n == 0) throw error(errc::not_in_carrier, "recursion bound exhausted before a leaf");
    const DTree& tree = as_tree(t);
    auto top = tree.l.get({});
    if (!top || !*top) throw error(errc::not_in_carrier, "label at the root is undefined");
    if (!top->is_tag() || top->tag_index() >= nf_.size())
      throw error(errc::not_in_carrier, "root label outside A");
    std::size_t i = top->tag_index();
    if (top->payload().is_inl()) throw error(errc::not_in_carrier, "root is labelled as a leaf");
    auto leaf = tree.l.get({0});
    if (!leaf || !*leaf) throw error(errc::not_in_carrier, "label at [0] is undefined");
    if (!leaf->is_tag() || leaf->tag_index() != i)
      throw error(errc::not_in_carrier, "label at [0] belongs to another summand");
    if (leaf->payload().is_inr()) throw error(errc::not_in_carrier, "label at [0] is a node");
    PVal w = leaf->payload().payload();
    std::vector<PVal> results;
    for (std::size_t j = 1; j <= nf_.summands[i].arity; ++j)
      results.push_back(f(natural(n - 1), algebra, sel(j, t), fuel));
    PVal v = nf_.make(i, w, std::move(results));
    return apply(algebra, v, fuel);
  }

  PolyNF nf_;
  std::string name_;
  TreePrinter printer_;
};

inline std::string DTree::show() const {
  if (owner) {
    auto copy = std::make_shared<DTree>(*this);
    if (auto s = owner->describe(PVal::opaque(copy))) return *s;
  }
  auto depth = d.get({});
  return "<tree depth " + (depth ? depth->str() : std::string("undefined")) + ">";
}

/// Builds a fold algebra F B → B from one function per summand, each
/// receiving (w, (r₁, …, r_k)).
inline PVal algebra_from_components(std::vector<PVal> components) {
  return PVal::fun(
      [components](const PVal& v, Fuel& fuel) {
        if (!v) return PVal::undefined();
        std::size_t i = v.tag_index();
        if (i >= components.size()) throw error(errc::tag_out_of_range, "tag " + std::to_string(i));
        return apply(components[i], v.payload(), fuel);
      },
      "algebra");
}

// ---------------------------------------------------------------------------
// Natural numbers as the initial algebra of 1 + X

inline std::shared_ptr<InitialAlgebra> nat_algebra() {
  auto h = InitialAlgebra::build(to_poly_nf(SigFunctor::sum(SigFunctor::constant(Ty::unit()), SigFunctor::id())),
                                 "Nat");
  h->set_printer([](std::size_t i, const PVal&, const std::vector<std::string>& kids) {
    return i == 0 ? std::string("0") : "suc(" + kids[0] + ")";
  });
  return h;
}

inline PVal nat_tree(const InitialAlgebra& nat, const natural& n) {
  PVal t = nat.construct(0, PVal::unit(), {});
  for (natural k = 0; k < n; ++k) t = nat.construct(1, PVal::unit(), {t});
  return t;
}

inline natural tree_to_nat(const InitialAlgebra& nat, const PVal& t, Fuel& fuel) {
  PVal alg = PVal::fun(
      [](const PVal& v, Fuel&) {
        if (v.tag_index() == 0) return PVal::nat(0);
        return PVal::nat(natural(v.payload().item(1).item(0).as_nat() + 1));
      },
      "count");
  return nat.fold(alg, t, fuel).as_nat();
}

// ---------------------------------------------------------------------------
// Induction from fold at Logical

struct InductionReport {
  std::vector<bool> q;                   // Q n for n ≤ bound
  bool matches_prefix_conjunction;       // Q n ⇔ ∀ m ≤ n. P m
  bool satisfies_fold_equation_of_g;     // Q 0 = ⊤ and Q (suc n) = Q n
  bool agrees_with_fold_g;               // Q = fold g (which is constantly ⊤)
};

/// Q 0 = P 0 ; Q (suc n) = Q n ∧ P (suc n), computed by primitive recursion
/// over the constructed naturals. P maps naturals to Bool or Logical.
inline InductionReport induction_via_fold(const PVal& P, std::size_t bound, Fuel& fuel) {
  auto nat = nat_algebra();
  auto as_logical = [&](const PVal& v) {
    if (v.is_fun()) return v;
    return logical(v && v.as_bool());
  };
  auto p_at = [&](const natural& n) { return holds(as_logical(apply(P, PVal::nat(n), fuel)), fuel); };

  PVal body = PVal::fun(
      [&, nat](const PVal& y, Fuel& fl) {
        if (y.tag_index() == 0) return as_logical(apply(P, PVal::nat(0), fl));
        const PVal& pair = y.payload().item(1).item(0);
        natural n = tree_to_nat(*nat, pair.item(0), fl);
        return logical_and(pair.item(1), as_logical(apply(P, PVal::nat(natural(n + 1)), fl)));
      },
      "Q");
  // g : Logical + 1 → Logical, the copairing of ⊤ (zero) and the identity (suc)
  PVal g = PVal::fun(
      [](const PVal& v, Fuel&) {
        if (v.tag_index() == 0) return logical(true);
        return v.payload().item(1).item(0);
      },
      "g");

  InductionReport r{{}, true, true, true};
  bool prefix = true;
  for (std::size_t n = 0; n <= bound; ++n) {
    PVal t = nat_tree(*nat, n);
    bool qn = holds(nat->primrec(body, t, fuel), fuel);
    r.q.push_back(qn);
    prefix = prefix && p_at(n);
    if (qn != prefix) r.matches_prefix_conjunction = false;
    bool folded = holds(nat->fold(g, t, fuel), fuel);
    if (qn != folded) r.agrees_with_fold_g = false;
    if (n == 0 ? !qn : qn != r.q[n - 1]) r.satisfies_fold_equation_of_g = false;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Fold into a subtype (x : a. φ) through 1 ⇀ a

/// d : F a → a is meant to preserve φ. The lifted algebra works on 1 ⇀ a;
/// the result is certified defined and φ-satisfying.
inline PVal subtype_fold(const InitialAlgebra& h, const PVal& d, const PVal& phi, const PVal& t, Fuel& fuel) {
  const PolyNF& nf = h.nf();
  PVal lifted = PVal::fun(
      [&nf, d, phi](const PVal& v, Fuel&) {
        return PVal::fun(
            [&nf, d, phi, v](const PVal&, Fuel& fl) {
              auto [i, w, gs] = nf.split(v);
              std::vector<PVal> xs;
              for (const auto& g : gs) {
                PVal x = apply(g, PVal::unit(), fl);
                x = restrict(x, apply(phi, x, fl));
                if (!x) return PVal::undefined();
                xs.push_back(x);
              }
              return apply(d, nf.make(i, w, std::move(xs)), fl);
            },
            "d?");
      },
      "lift");
  PVal thunk = h.fold(lifted, t, fuel);
  PVal r = apply(thunk, PVal::unit(), fuel);
  if (!r) throw error(errc::subtype_escape, "result undefined");
  PVal ok = apply(phi, r, fuel);
  if (!ok || !ok.as_bool()) throw error(errc::subtype_escape, "result " + show(r) + " violates the predicate");
  return r;
}

// ---------------------------------------------------------------------------
// Parameterised map

/// Applies f at the positions of `param` inside a value of type t.
inline PVal map_param(const Ty& t, const std::string& param, const PVal& f, const PVal& v, Fuel& fuel) {
  if (!v) return PVal::undefined();
  switch (t.kind()) {
    case Ty::Kind::named:
      if (t.name() == param && t.args().empty()) return apply(f, v, fuel);
      return v;
    case Ty::Kind::sum:
      if (v.is_inl()) return PVal::inl(map_param(t.left(), param, f, v.payload(), fuel));
      return PVal::inr(map_param(t.right(), param, f, v.payload(), fuel));
    case Ty::Kind::prod: {
      PVal a = map_param(t.left(), param, f, v.item(0), fuel);
      PVal b = map_param(t.right(), param, f, v.item(1), fuel);
      if (!a || !b) return PVal::undefined();
      return PVal::pair(a, b);
    }
    default: return v;
  }
}

/// map f = fold (α_b ∘ parmap f), relabelling every parameter position.
inline PVal param_map(const InitialAlgebra& src, const InitialAlgebra& dst, const std::string& param, const PVal& f,
                      const PVal& t, Fuel& fuel) {
  const PolyNF& nf = src.nf();
  PVal alg = PVal::fun(
      [&nf, &dst, param, f](const PVal& v, Fuel& fl) {
        auto [i, w, xs] = nf.split(v);
        return dst.alpha(dst.nf().make(i, map_param(nf.summands[i].param, param, f, w, fl), std::move(xs)));
      },
      "parmap");
  return src.fold(alg, t, fuel);
}

}  // namespace quasikernel

#endif
