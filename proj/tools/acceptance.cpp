#include <fstream>
#include <iostream>
#include <sstream>

#include "quasikernel/checks.hpp"

using namespace quasikernel;
using checks::Check;
using checks::Report;
using checks::Status;

namespace {

std::string samples_dir = QK_SAMPLES_DIR;

std::string read_sample(const std::string& name) {
  std::ifstream in(samples_dir + "/" + name);
  if (!in) throw error(errc::invalid_argument, "missing sample " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Criterion {
  bool ok = true;
  std::string note;

  void need(const Check& c) {
    if (c.status != Status::pass) {
      ok = false;
      note += (note.empty() ? "" : "; ") + c.name + ": " + (c.status == Status::skip ? "skipped " : "") + c.detail;
    }
  }
  void need(const Report& r, const std::string& name) {
    for (const auto& c : r)
      if (c.name == name) return need(c);
    ok = false;
    note += (note.empty() ? "" : "; ") + name + " missing";
  }
};

Report initial_of(const std::string& file, const checks::Config& cfg) {
  auto env = surface::elaborate(read_sample(file));
  Report out;
  for (const auto& t : env.order)
    if (env.type(t).is_free()) {
      auto r = checks::initial_type_suite(env.type(t), cfg);
      out.insert(out.end(), r.begin(), r.end());
    }
  return out;
}

errc rejection(const std::string& file) {
  try {
    surface::elaborate(read_sample(file));
  } catch (const error& e) {
    return e.code();
  }
  return errc::invalid_argument;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) samples_dir = argv[1];
  checks::Config cfg;
  std::vector<std::pair<std::string, Criterion>> results;
  auto record = [&](std::string title, const std::function<void(Criterion&)>& f) {
    Criterion c;
    try {
      f(c);
    } catch (const error& e) {
      c.ok = false;
      c.note = e.what();
    }
    results.emplace_back(std::move(title), std::move(c));
  };

  const std::vector<std::pair<std::string, std::string>> corpus{
      {"list.qk", "List"}, {"nat.qk", "Nat"}, {"mix.qk", "Mix"}, {"proc.qk", "ProcT"}};
  std::map<std::string, Report> initial;
  for (const auto& [file, type] : corpus) initial[type] = initial_of(file, cfg);
  auto over_corpus = [&](const std::string& check) {
    return [&, check](Criterion& c) {
      for (const auto& [file, type] : corpus) c.need(initial[type], "initial." + type + "." + check);
    };
  };
  auto global_initial = checks::initial_global_suite(cfg);
  auto cpo = checks::cpo_global_suite(cfg);

  record("fold equation on the corpus (Nat, List, Proc as a type, Mix)", over_corpus("fold_equation"));
  record("fold uniqueness by exhaustive search into carriers of size <= 3", over_corpus("fold_uniqueness"));
  record("Lambek isomorphism both ways on trees of depth <= 4", over_corpus("lambek"));
  record("primitive recursion: first projection and predecessor/length oracles", [&](Criterion& c) {
    over_corpus("primrec_projection")(c);
    for (const auto& t : {"Nat", "List"}) {
      c.need(initial[t], std::string("initial.") + t + ".primrec_predecessor");
      c.need(initial[t], std::string("initial.") + t + ".primrec_length");
    }
  });
  record("list object: definedness invariant and fold oracle up to length 6",
         [&](Criterion& c) { c.need(global_initial, "initial.enclist"); });
  record("unfold: membership, equation, uniqueness, counter stream", [&](Criterion& c) {
    for (const auto& [file, type] : std::vector<std::pair<std::string, std::string>>{
             {"stream.qk", "Stream"}, {"colist.qk", "Colist"}, {"proc.qk", "Proc"}}) {
      auto env = surface::elaborate(read_sample(file));
      auto r = checks::final_type_suite(env.type(type), cfg);
      for (const auto& n : {"membership", "unfold_equation", "unfold_matches_iteration", "unfold_uniqueness", "lambek"})
        c.need(r, "final." + type + "." + n);
    }
    c.need(checks::counter_stream_check(cfg));
  });
  record("coproduct triple encoding, copairing and definedness pattern",
         [&](Criterion& c) { c.need(global_initial, "initial.coproduct_triple"); });
  record("induction via fold for 5 predicates up to 20",
         [&](Criterion& c) { c.need(global_initial, "initial.induction_via_fold"); });
  record("cpo: partial chain lemma, factorial lfp, minimality, sum stability", [&](Criterion& c) {
    for (const auto& n : {"cpo.partial_chain_sup", "cpo.factorial_lfp", "cpo.lfp_minimality", "cpo.sum_stability"})
      c.need(cpo, n);
  });
  record("domain datatypes: monotone and continuous constructors and fold, chain sups in the carrier",
         [&](Criterion& c) {
           for (const auto& n : {"cpo.domain_constructors", "cpo.domain_fold", "cpo.domain_final_sups"}) c.need(cpo, n);
         });
  record("lab: Spa(P) 0->1 not regular, M-type counterexample, ReRe coarse iff indiscrete, nno truncation",
         [&](Criterion& c) {
           auto spap = checks::lab_spap_suite(cfg);
           auto rere = checks::lab_rere_suite(cfg);
           auto mt = checks::lab_mtypes_suite(cfg);
           c.need(spap, "spap.initial_terminal_shape");
           c.need(spap, "spap.regular(0→1)");
           c.need(mt, "mtypes.extpoly_vs_mtype_at_1_empty");
           c.need(rere, "rere.coarse_iff_indiscrete");
           c.need(rere, "rere.nno_fragment");
         });
  record("negative declarations rejected", [&](Criterion& c) {
    const std::vector<std::pair<std::string, errc>> cases{{"illegal_abs.qk", errc::negative_occurrence},
                                                          {"illegal_cont.qk", errc::negative_occurrence},
                                                          {"tree_branching.qk", errc::unsupported_type_former}};
    for (const auto& [file, code] : cases) {
      errc got = rejection(file);
      if (got != code) {
        c.ok = false;
        c.note += file + " gave " + std::string(to_string(got)) + "; ";
      }
    }
  });

  bool all = true;
  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto& [title, c] = results[k];
    all = all && c.ok;
    std::cout << (c.ok ? "PASS" : "FAIL") << "  " << (k + 1) << ". " << title;
    if (!c.ok) std::cout << " -- " << c.note;
    std::cout << "\n";
  }
  return all ? 0 : 1;
}
