#ifndef QUASIKERNEL_FINAL_HPP
#define QUASIKERNEL_FINAL_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <set>
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

/// A path over B = Σᵢ Bᵢ; every step is in<i> y.
using BPath = std::vector<PVal>;

inline std::string show_bpath(const BPath& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + show(p[i]);
  return s + "]";
}

using PathFun = std::function<PVal(const BPath&, Fuel&)>;

class FinalCoalgebra;

/// Element of the final coalgebra: a suspended partial map Path ⇀ A.
class PTree final : public Opaque {
 public:
  PathFun f;
  std::shared_ptr<const FinalCoalgebra> owner;
  /// Coalgebra and seed, when the tree was produced by unfold.
  std::optional<std::pair<PVal, PVal>> generator;

  std::string kind() const override { return "ptree"; }
  bool equals(const Opaque& other, std::size_t depth, Fuel& fuel) const override;
  std::string show() const override;
};

inline const PTree& as_ptree(const PVal& v) {
  if (const auto* t = v.opaque_as<PTree>()) return *t;
  throw error(errc::type_mismatch, "expected a process tree, got " + v.describe_kind());
}

struct MembershipReport {
  bool root_defined = true;
  bool snoc_condition = true;
  std::optional<BPath> counterexample;
  std::size_t paths_checked = 0;

  bool ok() const { return root_defined && snoc_condition; }
};

/// Final coalgebra for FX = Σᵢ Aᵢ × (Bᵢ → X) on C ⊆ (Path ⇀ A).
class FinalCoalgebra : public std::enable_shared_from_this<FinalCoalgebra> {
 public:
  static std::shared_ptr<FinalCoalgebra> build(ExtPolyNF nf, std::string name = "C") {
    for (const auto& s : nf.summands)
      if (!finitely_enumerable(s.exponent))
        throw error(errc::non_enumerable_exponent, "exponent " + s.exponent.show() + " is not finitely enumerable");
    return std::shared_ptr<FinalCoalgebra>(new FinalCoalgebra(std::move(nf), std::move(name)));
  }

  const ExtPolyNF& nf() const { return nf_; }
  const std::string& name() const { return name_; }

  PVal make(PathFun f, std::optional<std::pair<PVal, PVal>> generator = std::nullopt) const {
    auto t = std::make_shared<PTree>();
    t->f = std::move(f);
    t->owner = shared_from_this();
    t->generator = std::move(generator);
    return PVal::opaque(std::move(t));
  }

  PVal observe(const PVal& t, const BPath& p, Fuel& fuel) const {
    if (!t) return PVal::undefined();
    fuel.tick();
    return as_ptree(t).f(p, fuel);
  }

  /// Path steps available after a node labelled in<i> x.
  std::vector<PVal> steps(std::size_t i) const {
    std::vector<PVal> out;
    for (auto& y : enumerate(nf_.summands.at(i).exponent)) out.push_back(PVal::tag(i, y));
    return out;
  }

  std::vector<PVal> all_steps() const {
    std::vector<PVal> out;
    for (std::size_t i = 0; i < nf_.size(); ++i)
      for (auto& s : steps(i)) out.push_back(std::move(s));
    return out;
  }

  /// Every path of length at most `depth`.
  std::vector<BPath> paths(std::size_t depth) const {
    std::vector<BPath> out{{}};
    auto all = all_steps();
    std::size_t begin = 0;
    for (std::size_t k = 0; k < depth; ++k) {
      std::size_t end = out.size();
      for (std::size_t j = begin; j < end; ++j)
        for (const auto& s : all) {
          BPath q = out[j];
          q.push_back(s);
          out.push_back(std::move(q));
        }
      begin = end;
    }
    return out;
  }

  // -- structure map --------------------------------------------------------

  /// c f = case f nil of in<i> x → in<i> (x, λy. λp. f (cons (in<i> y) p)).
  PVal c(const PVal& t, Fuel& fuel) const {
    if (!t) return PVal::undefined();
    PVal root = observe(t, {}, fuel);
    if (!root) return PVal::undefined();
    std::size_t i = check_label(root);
    PathFun f = as_ptree(t).f;
    auto self = shared_from_this();
    PVal g = PVal::fun(
        [self, f, i](const PVal& y, Fuel&) {
          return self->make([f, i, y](const BPath& p, Fuel& fl) {
            BPath q{PVal::tag(i, y)};
            q.insert(q.end(), p.begin(), p.end());
            return f(q, fl);
          });
        },
        "sub");
    return nf_.make(i, root.payload(), g);
  }

  PVal c_fun() const {
    auto self = shared_from_this();
    return PVal::fun([self](const PVal& t, Fuel& fuel) { return self->c(t, fuel); }, "c");
  }

  /// Inverse of c: in<i> (x, g) ↦ the tree with root in<i> x and subtree g y
  /// below in<i> y.
  PVal alpha(const PVal& v, Fuel&) const {
    if (!v) return PVal::undefined();
    auto [i, x, g] = nf_.split(v);
    return make([i, x, g](const BPath& p, Fuel& fuel) -> PVal {
      if (p.empty()) return PVal::tag(i, x);
      if (p[0].tag_index() != i) return PVal::undefined();
      PVal sub = apply(g, p[0].payload(), fuel);
      if (!sub) return PVal::undefined();
      fuel.tick();
      return as_ptree(sub).f(BPath(p.begin() + 1, p.end()), fuel);
    });
  }

  PVal construct(std::size_t i, const PVal& x, const PVal& g) const {
    Fuel fuel(1);
    return alpha(nf_.make(i, x, g), fuel);
  }

  // -- unfold ---------------------------------------------------------------

  /// u z nil = case d z of in<i> (x, g) → in<i> x
  /// u z (cons (in<i> y) p) = case d z of in<i> (x, g) → u (g y) p, other tags undefined.
  PVal unfold(const PVal& d, const PVal& z) const {
    if (!z) return PVal::undefined();
    auto self = shared_from_this();
    return make([self, d, z](const BPath& p, Fuel& fuel) { return self->run_unfold(d, z, p, 0, fuel); },
                std::make_pair(d, z));
  }

  PVal unfold_fun(const PVal& d) const {
    auto self = shared_from_this();
    return PVal::fun([self, d](const PVal& z, Fuel&) { return self->unfold(d, z); }, "unfold");
  }

  // -- membership and observation ------------------------------------------

  /// Conditions (1) def (f nil) and (2) def (f (snoc p (in<i> y))) ⇔ f p = in<i> x,
  /// checked on every path of length at most `depth`.
  MembershipReport membership(const PVal& t, std::size_t depth, Fuel& fuel) const {
    MembershipReport r;
    if (!t || !observe(t, {}, fuel)) {
      r.root_defined = false;
      r.counterexample = BPath{};
      return r;
    }
    for (const auto& p : paths(depth == 0 ? 0 : depth - 1)) {
      PVal fp = observe(t, p, fuel);
      for (const auto& s : all_steps()) {
        BPath q = p;
        q.push_back(s);
        ++r.paths_checked;
        bool expected = fp && check_label(fp) == s.tag_index();
        if (observe(t, q, fuel).defined() != expected) {
          r.snoc_condition = false;
          r.counterexample = q;
          return r;
        }
      }
    }
    return r;
  }

  /// Bounded bisimilarity: equal observations on every path of length at
  /// most `depth` (exhaustive).
  bool bisimilar(const PVal& t, const PVal& u, std::size_t depth, Fuel& fuel, std::size_t value_depth = 4) const {
    return first_difference(t, u, depth, fuel, value_depth) == std::nullopt;
  }

  std::optional<BPath> first_difference(const PVal& t, const PVal& u, std::size_t depth, Fuel& fuel,
                                        std::size_t value_depth = 4) const {
    if (!t || !u) {
      if (!t && !u) return std::nullopt;
      return BPath{};
    }
    for (const auto& p : paths(depth))
      if (!strongly_equal(observe(t, p, fuel), observe(u, p, fuel), value_depth, fuel)) return p;
    return std::nullopt;
  }

  /// Equality of two F C values: same tag and parameter, bisimilar
  /// successors on every y ∈ Bᵢ.
  bool fc_equal(const PVal& v, const PVal& w, std::size_t depth, Fuel& fuel) const {
    if (!v || !w) return !v && !w;
    auto [i, x, g] = nf_.split(v);
    auto [j, x2, h] = nf_.split(w);
    if (i != j || !strongly_equal(x, x2, 4, fuel)) return false;
    for (const auto& y : enumerate(nf_.summands[i].exponent))
      if (!bisimilar(apply(g, y, fuel), apply(h, y, fuel), depth, fuel)) return false;
    return true;
  }

  /// F (unfold d) ∘ d and c ∘ unfold d agree at seed z.
  bool unfold_equation_holds(const PVal& d, const PVal& z, std::size_t depth, Fuel& fuel) const {
    PVal lhs = c(unfold(d, z), fuel);
    PVal rhs = fmap(nf_, unfold_fun(d), apply(d, z, fuel), fuel);
    return fc_equal(lhs, rhs, depth, fuel);
  }

  // -- cotype case ----------------------------------------------------------

  /// Partial selector for summand i: t ↦ x when c t = in<i> (x, g).
  PVal param_selector(std::size_t i) const {
    auto self = shared_from_this();
    return PVal::fun(
        [self, i](const PVal& t, Fuel& fuel) {
          PVal v = self->c(t, fuel);
          if (!v || v.tag_index() != i) return PVal::undefined();
          return v.payload().item(0);
        },
        "sel");
  }

  /// Partial selector t ↦ g y when c t = in<i> (x, g).
  PVal branch_selector(std::size_t i, const PVal& y) const {
    auto self = shared_from_this();
    return PVal::fun(
        [self, i, y](const PVal& t, Fuel& fuel) {
          PVal v = self->c(t, fuel);
          if (!v || v.tag_index() != i) return PVal::undefined();
          return apply(v.payload().item(1), y, fuel);
        },
        "sel");
  }

  /// case f₁ … fₙ: the total map extending every branch. Each branch must be
  /// defined exactly on its summand; checked on `samples`.
  PVal cotype_case(const std::vector<PVal>& branches, const std::vector<PVal>& samples, Fuel& fuel) const {
    if (branches.size() != nf_.size())
      throw error(errc::invalid_argument, "case needs " + std::to_string(nf_.size()) + " branches");
    for (const auto& t : samples) {
      std::size_t tag = c(t, fuel).tag_index();
      for (std::size_t k = 0; k < branches.size(); ++k) {
        bool defined = apply(branches[k], t, fuel).defined();
        if (defined != (k == tag))
          throw error(errc::domain_mismatch, "branch " + std::to_string(k) + (defined ? " defined" : " undefined") +
                                                 " on a sample of summand " + std::to_string(tag));
      }
    }
    auto self = shared_from_this();
    return PVal::fun(
        [self, branches](const PVal& t, Fuel& fl) {
          PVal v = self->c(t, fl);
          if (!v) return PVal::undefined();
          return apply(branches[v.tag_index()], t, fl);
        },
        "case");
  }

  std::string describe(const PVal& t, std::size_t depth = 2) const {
    Fuel fuel(100000);
    try {
      return render(t, depth, fuel);
    } catch (const error&) {
      return "<" + name_ + " tree>";
    }
  }

 private:
  FinalCoalgebra(ExtPolyNF nf, std::string name) : nf_(std::move(nf)), name_(std::move(name)) {}

  std::size_t check_label(const PVal& a) const {
    if (!a.is_tag()) throw error(errc::type_mismatch, "tree label is not tagged: " + a.describe_kind());
    if (a.tag_index() >= nf_.size()) throw error(errc::tag_out_of_range, "label tag " + std::to_string(a.tag_index()));
    return a.tag_index();
  }

  PVal run_unfold(const PVal& d, PVal z, const BPath& p, std::size_t from, Fuel& fuel) const {
    for (std::size_t k = from;; ++k) {
      PVal dz = apply(d, z, fuel);
      if (!dz) return PVal::undefined();
      auto [i, x, g] = nf_.split(dz);
      if (k == p.size()) return PVal::tag(i, x);
      if (p[k].tag_index() != i) return restrict(PVal::tag(i, x), PVal::boolean(false));
      z = apply(g, p[k].payload(), fuel);
      if (!z) return PVal::undefined();
    }
  }

  std::string render(const PVal& t, std::size_t depth, Fuel& fuel) const {
    PVal root = observe(t, {}, fuel);
    if (!root) return "undefined";
    std::string s = "in" + std::to_string(root.tag_index()) + "(" + quasikernel::show(root.payload());
    if (depth == 0) return s + "; …)";
    for (const auto& st : steps(root.tag_index())) {
      PathFun f = as_ptree(t).f;
      PVal sub = make([f, st](const BPath& p, Fuel& fl) {
        BPath q{st};
        q.insert(q.end(), p.begin(), p.end());
        return f(q, fl);
      });
      s += "; " + render(sub, depth - 1, fuel);
    }
    return s + ")";
  }

  ExtPolyNF nf_;
  std::string name_;
};

inline bool PTree::equals(const Opaque& other, std::size_t depth, Fuel& fuel) const {
  const auto* o = dynamic_cast<const PTree*>(&other);
  if (!o) throw error(errc::incomparable_types, "process tree vs " + other.kind());
  if (!owner || !o->owner) return false;
  auto self = std::make_shared<PTree>(*this);
  auto them = std::make_shared<PTree>(*o);
  return owner->bisimilar(PVal::opaque(self), PVal::opaque(them), depth, fuel, depth);
}

inline std::string PTree::show() const {
  if (!owner) return "<process tree>";
  return owner->describe(PVal::opaque(std::make_shared<PTree>(*this)));
}

// ---------------------------------------------------------------------------
// M-types: final coalgebras of P_q X = Σ a:A. (q⁻¹(a) → X) for finite A, B.

struct MSignature {
  std::vector<std::string> shapes;               // A
  std::vector<std::vector<std::string>> fibers;  // B_a for every a

  /// The elements of B in fiber order, with q.
  std::vector<std::pair<std::string, std::size_t>> positions() const {
    std::vector<std::pair<std::string, std::size_t>> out;
    for (std::size_t a = 0; a < fibers.size(); ++a)
      for (const auto& b : fibers[a]) out.emplace_back(b, a);
    return out;
  }
};

/// A tree Path ⇀ A with paths over B-indices (positions of MSignature).
struct MTree {
  std::function<std::optional<std::size_t>(const Path&, Fuel&)> f;
};

/// d z = (a, h) with h defined on B_a; `h` answers nullopt elsewhere.
using MCoalgebra = std::function<std::pair<std::size_t, std::function<std::optional<PVal>(std::size_t)>>(
    const PVal&, Fuel&)>;

class MType {
 public:
  static MType build(MSignature sig) {
    if (sig.fibers.size() != sig.shapes.size())
      throw error(errc::invalid_argument, "one fiber per shape required");
    std::set<std::string> seen;
    for (const auto& fiber : sig.fibers)
      for (const auto& b : fiber)
        if (!seen.insert(b).second) throw error(errc::non_disjoint_fibers, "position " + b + " in two fibers");
    MType m;
    m.sig_ = std::move(sig);
    for (const auto& [b, a] : m.sig_.positions()) m.q_.push_back(a);
    return m;
  }

  const MSignature& signature() const { return sig_; }
  std::size_t q(std::size_t b) const { return q_.at(b); }
  std::size_t positions() const { return q_.size(); }

  std::vector<std::size_t> fiber(std::size_t a) const {
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < q_.size(); ++b)
      if (q_[b] == a) out.push_back(b);
    return out;
  }

  /// u z nil = π₁ (d z);  u z (cons b p) = u (π₂ (d z) b) p.
  MTree unfold(MCoalgebra d, PVal z) const {
    return MTree{[d, z](const Path& p, Fuel& fuel) -> std::optional<std::size_t> {
      PVal seed = z;
      for (std::size_t k = 0;; ++k) {
        fuel.tick();
        auto [a, h] = d(seed, fuel);
        if (k == p.size()) return a;
        auto next = h(p[k]);
        if (!next) return std::nullopt;
        seed = *next;
      }
    }};
  }

  /// c f = (f nil, λb:B_{f nil}. λp. f (cons b p)).
  std::pair<std::size_t, std::function<MTree(std::size_t)>> c(const MTree& t, Fuel& fuel) const {
    auto root = t.f({}, fuel);
    if (!root) throw error(errc::invariant_violation, "tree undefined at the root");
    std::size_t a = *root;
    auto q = q_;
    auto f = t.f;
    return {a, [a, q, f](std::size_t b) -> MTree {
              if (b >= q.size() || q[b] != a) throw error(errc::type_mismatch, "position outside the root fiber");
              return MTree{[f, b](const Path& p, Fuel& fl) {
                Path full{b};
                full.insert(full.end(), p.begin(), p.end());
                return f(full, fl);
              }};
            }};
  }

  /// def (f nil) and def (f (snoc p b)) ⇔ q b = f p on every path of length
  /// at most `depth`.
  MembershipReport membership(const MTree& t, std::size_t depth, Fuel& fuel) const {
    MembershipReport r;
    if (!t.f({}, fuel)) {
      r.root_defined = false;
      return r;
    }
    std::vector<Path> layer{{}};
    for (std::size_t k = 0; k + 1 <= depth; ++k) {
      std::vector<Path> next;
      for (const auto& p : layer) {
        auto fp = t.f(p, fuel);
        for (std::size_t b = 0; b < q_.size(); ++b) {
          Path s = p;
          s.push_back(b);
          ++r.paths_checked;
          bool expected = fp && *fp == q_[b];
          if (t.f(s, fuel).has_value() != expected) {
            r.snoc_condition = false;
            return r;
          }
          next.push_back(std::move(s));
        }
      }
      layer = std::move(next);
    }
    return r;
  }

 private:
  MSignature sig_;
  std::vector<std::size_t> q_;
};

// ---------------------------------------------------------------------------
// F X = (B_l → X) + (B_r → X) against P_q X over finite sets with bot.

struct AmbientComparison {
  std::size_t f_size = 0;
  std::size_t pq_size = 0;
  bool h_injective = false;
  bool h_surjective = false;

  bool isomorphic() const { return h_injective && h_surjective; }
};

/// Enumerates both sides for |B_l| = bl, |B_r| = br, |X| = x and checks that
///   h (inl f) = (λb. case b of inl x → f x | inr y → bot (), inl ())
/// (and symmetrically) is a bijection F X → P_q X.
inline AmbientComparison ambient_mtype_comparison(std::size_t bl, std::size_t br, std::size_t x) {
  Fuel fuel(10'000'000);
  auto total_maps = [&](std::size_t n) {
    std::vector<std::vector<std::size_t>> out{{}};
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<std::vector<std::size_t>> next;
      for (const auto& m : out)
        for (std::size_t v = 0; v < x; ++v) {
          auto e = m;
          e.push_back(v);
          next.push_back(std::move(e));
        }
      out = std::move(next);
    }
    return out;
  };
  auto table = [](std::vector<std::size_t> m) {
    return PVal::fun([m](const PVal& b, Fuel&) { return PVal::nat(m.at(static_cast<std::size_t>(b.as_nat()))); },
                     "table");
  };
  std::vector<PVal> f_values;
  for (const auto& m : total_maps(bl)) f_values.push_back(PVal::inl(table(m)));
  for (const auto& m : total_maps(br)) f_values.push_back(PVal::inr(table(m)));

  PVal bottom = bot(Ty::nat());
  auto h = [&](const PVal& v) {
    bool left = v.is_inl();
    PVal f = v.payload();
    PVal g = PVal::fun(
        [f, bottom, left](const PVal& b, Fuel& fl) {
          if (b.is_inl() == left) return apply(f, b.payload(), fl);
          return apply(bottom, PVal::unit(), fl);
        },
        "h");
    return PVal::pair(g, left ? PVal::inl(PVal::unit()) : PVal::inr(PVal::unit()));
  };

  std::vector<PVal> b_values;
  for (std::size_t k = 0; k < bl; ++k) b_values.push_back(PVal::inl(PVal::nat(k)));
  for (std::size_t k = 0; k < br; ++k) b_values.push_back(PVal::inr(PVal::nat(k)));
  // An element of P_q X as its table over B (x means undefined) and its tag.
  auto code = [&](const PVal& p) {
    std::vector<std::size_t> c;
    for (const auto& b : b_values) {
      PVal r = apply(p.item(0), b, fuel);
      c.push_back(r ? static_cast<std::size_t>(r.as_nat()) : x);
    }
    c.push_back(p.item(1).is_inl() ? 0 : 1);
    return c;
  };

  std::set<std::vector<std::size_t>> pq;
  for (std::size_t a = 0; a < 2; ++a) {
    std::size_t defined = a == 0 ? bl : br;
    for (const auto& m : total_maps(defined)) {
      std::vector<std::size_t> c(bl + br, x);
      for (std::size_t k = 0; k < defined; ++k) c[(a == 0 ? 0 : bl) + k] = m[k];
      c.push_back(a);
      pq.insert(std::move(c));
    }
  }

  std::set<std::vector<std::size_t>> image;
  bool in_range = true;
  for (const auto& v : f_values) {
    auto c = code(h(v));
    if (!pq.count(c)) in_range = false;
    image.insert(std::move(c));
  }
  AmbientComparison r;
  r.f_size = f_values.size();
  r.pq_size = pq.size();
  r.h_injective = in_range && image.size() == f_values.size();
  r.h_surjective = in_range && image.size() == pq.size();
  return r;
}

}  // namespace quasikernel

#endif
