#ifndef QUASIKERNEL_TESTS_GENERATORS_HPP
#define QUASIKERNEL_TESTS_GENERATORS_HPP

#include <random>
#include <vector>

#include "quasikernel/kernel.hpp"

namespace qk_test {

using quasikernel::PVal;

/// Small first-order values (no functions), possibly with undefined leaves.
inline PVal random_value(std::mt19937& rng, int depth, bool allow_undefined = true) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 6 : 2);
  switch (pick(rng)) {
    case 0: return PVal::unit();
    case 1: return PVal::nat(std::uniform_int_distribution<int>(0, 4)(rng));
    case 2: return allow_undefined ? PVal::undefined() : PVal::boolean(rng() % 2);
    case 3: return PVal::pair(random_value(rng, depth - 1, allow_undefined), random_value(rng, depth - 1, allow_undefined));
    case 4: return PVal::inl(random_value(rng, depth - 1, allow_undefined));
    case 5: return PVal::inr(random_value(rng, depth - 1, allow_undefined));
    default: return PVal::tag(rng() % 3, random_value(rng, depth - 1, allow_undefined));
  }
}

/// Every first-order value up to the given depth over {unit, 0, 1}.
inline std::vector<PVal> all_values(int depth) {
  std::vector<PVal> out{PVal::unit(), PVal::nat(0), PVal::nat(1)};
  if (depth == 0) return out;
  auto smaller = all_values(depth - 1);
  for (const auto& v : smaller) {
    out.push_back(PVal::inl(v));
    out.push_back(PVal::inr(v));
  }
  for (const auto& a : smaller)
    for (const auto& b : smaller) out.push_back(PVal::pair(a, b));
  return out;
}

}  // namespace qk_test

#endif
