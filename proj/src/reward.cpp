#include "pltl/reward.hpp"

namespace pltl {

RewardResult sound_reward(const Belief& b, const CertifiedStructure& c) {
    Support supp;
    supp.reserve(b.size());
    for (auto [s, pr] : b) supp.push_back(s);
    // Belief entries are sorted by state, so supp is canonical already.
    if (c.is_winning(supp)) return {1.0, supp};
    RewardResult best;
    for (const Support& theta : c.contained_winning(supp)) {
        double mass = belief_mass(b, theta);
        if (mass > best.value) {
            best.value = mass;
            best.argmax = theta;
        }
    }
    return best;
}

}  // namespace pltl
