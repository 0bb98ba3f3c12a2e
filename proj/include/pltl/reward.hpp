#pragma once
// Terminal reward of a belief over product states against the certified
// winning structure: 1 on winning supports, the best certified contained
// mass on partially winning supports, 0 otherwise.

#include "pltl/belief_support.hpp"
#include "pltl/pomdp.hpp"

namespace pltl {

struct RewardResult {
    double value = 0.0;
    // The certified winning support realising the value (the full support
    // when it is itself winning, empty when the value is 0). Ties go to the
    // first support in canonical order (size, then lexicographic).
    Support argmax;
};

RewardResult sound_reward(const Belief& b, const CertifiedStructure& c);

}  // namespace pltl
