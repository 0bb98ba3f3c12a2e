#pragma once
// Seeded random generators for property tests: formulas, lasso words, and
// (in the .cpp) models. Everything is deterministic in the seed.

#include <set>
#include <string>
#include <vector>

#include "pltl/automata.hpp"
#include "pltl/formula.hpp"
#include "pltl/rng.hpp"

namespace testsupport {

// Random formula over the given atoms with operator depth at most `depth`.
// Derived operators and implication are produced too, so parser, printer and
// normal forms all get exercised.
pltl::Formula random_formula(pltl::Rng& rng, const std::vector<std::string>& atoms,
                             int depth);

// All formulas over `atoms` with operator depth at most `depth` (structural
// enumeration; grows fast, intended for depth <= 2).
std::vector<pltl::Formula> enumerate_formulas(const std::vector<std::string>& atoms,
                                              int depth);

// Random lasso word pieces over an alphabet with `nap` propositions.
std::vector<pltl::Letter> random_word(pltl::Rng& rng, int nap, std::size_t len);

}  // namespace testsupport
