#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "pltl/formula.hpp"
#include "pltl/graph.hpp"
#include "support/oracles.hpp"

using namespace pltl;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

ExplicitMDP motivating_underlying() {
    Pomdp m = parse_pomdp(read_file("fixtures/motivating.pomdp"));
    ExplicitMDP e;
    e.trans = m.trans;
    return e;
}

Product motivating_product() {
    Pomdp m = parse_pomdp(read_file("fixtures/motivating.pomdp"));
    Alphabet sigma;
    sigma.ap = {"goal"};
    LDBA aut = ltl_to_ldba(parse_ltl("G F goal", {"goal"}), sigma);
    return build_product(m, aut);
}

std::set<std::vector<int>> state_sets(const std::vector<EndComponent>& mecs) {
    std::set<std::vector<int>> out;
    for (const auto& ec : mecs) out.insert(ec.states);
    return out;
}

bool same_components(const std::vector<EndComponent>& a,
                     const std::vector<EndComponent>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].states != b[i].states || a[i].actions != b[i].actions)
            return false;
    return true;
}

}  // namespace

TEST_CASE("a self-loop state is its own end component") {
    ExplicitMDP m;
    m.trans = {{{{0, 1.0}}}};
    auto mecs = mec_decomposition(m);
    REQUIRE(mecs.size() == 1);
    CHECK(mecs[0].states == std::vector<int>{0});
    CHECK(mecs[0].actions == std::vector<std::vector<int>>{{0}});
}

TEST_CASE("motivating model has the two cycling components plus the sink") {
    ExplicitMDP m = motivating_underlying();
    auto mecs = mec_decomposition(m);
    // s0..s5 with actions a=0, c=1.
    CHECK(state_sets(mecs) ==
          std::set<std::vector<int>>{{0, 3}, {2, 5}, {4}});
    for (const auto& ec : mecs) {
        if (ec.states == std::vector<int>{0, 3}) {
            CHECK(ec.actions == std::vector<std::vector<int>>{{1}, {0}});
        } else if (ec.states == std::vector<int>{2, 5}) {
            CHECK(ec.actions == std::vector<std::vector<int>>{{0}, {0}});
        }
    }
}

TEST_CASE("motivating product: both cycling components are accepting") {
    Product p = motivating_product();
    ExplicitMDP m = underlying_mdp(p);
    std::set<std::string> names;
    for (int s : accepting_mec_states(m)) names.insert(p.pomdp.states[s]);
    CHECK(names ==
          std::set<std::string>{"s0_0", "s2_0", "s3_0", "s5_0"});

    // Everything except the absorbing sink wins almost surely.
    names.clear();
    for (int s : almost_sure_buchi_winning(m)) names.insert(p.pomdp.states[s]);
    CHECK(names == std::set<std::string>{"s0_0", "s1_0", "s2_0", "s3_0",
                                         "s5_0"});
}

TEST_CASE("no accepting states means empty accepting components") {
    ExplicitMDP m = motivating_underlying();
    m.accepting.assign(m.state_count(), 0);
    CHECK(accepting_mec_states(m).empty());
    CHECK(almost_sure_buchi_winning(m).empty());
}

TEST_CASE("a coin flip into a losing sink is not almost-sure winning") {
    // 0: accepting self-loop; 1: rejecting sink; 2: single action that
    // reaches each side with probability one half.
    ExplicitMDP m;
    m.trans = {{{{0, 1.0}}}, {{{1, 1.0}}}, {{{0, 0.5}, {1, 0.5}}}};
    m.accepting = {1, 0, 0};
    CHECK(almost_sure_buchi_winning(m) == std::vector<int>{0});
    // Plain backward reachability over-approximates: it keeps the gambler.
    CHECK(almost_sure_buchi_winning(m, true) == std::vector<int>{0, 2});
}

TEST_CASE("all states of one accepting component win") {
    ExplicitMDP m;
    m.trans = {{{{1, 1.0}}}, {{{0, 1.0}}}};
    m.accepting = {0, 1};
    CHECK(almost_sure_buchi_winning(m) == std::vector<int>{0, 1});
}

TEST_CASE("component decomposition matches the exhaustive oracle") {
    Rng rng(71007);
    for (int round = 0; round < 200; ++round) {
        ExplicitMDP m = testsupport::random_mdp(rng, 8, 3);
        auto got = mec_decomposition(m);
        auto want = testsupport::mec_oracle(m);
        bool equal = same_components(got, want);
        CHECK(equal);
        if (!equal) break;
        validate_end_components(m, got);
    }
}

TEST_CASE("almost-sure winning matches the value-iteration oracle") {
    Rng rng(81008);
    for (int round = 0; round < 200; ++round) {
        ExplicitMDP m = testsupport::random_mdp(rng, 8, 3);
        std::vector<int> target = accepting_mec_states(m);
        std::vector<double> v = testsupport::max_reach_oracle(m, target);
        std::vector<int> want;
        for (int s = 0; s < m.state_count(); ++s)
            if (v[s] >= 1.0 - 1e-9) want.push_back(s);
        std::vector<int> got = almost_sure_buchi_winning(m);
        CHECK(got == want);
        if (got != want) break;

        // The exact set never exceeds plain backward reachability.
        std::vector<int> shortcut = almost_sure_buchi_winning(m, true);
        CHECK(std::includes(shortcut.begin(), shortcut.end(), got.begin(),
                            got.end()));
    }
}

TEST_CASE("growing the accepting set never shrinks the winning set") {
    Rng rng(91009);
    for (int round = 0; round < 100; ++round) {
        ExplicitMDP m = testsupport::random_mdp(rng, 8, 3);
        std::vector<int> small = almost_sure_buchi_winning(m);
        ExplicitMDP bigger = m;
        for (int s = 0; s < m.state_count(); ++s)
            if (rng.below(3) == 0) bigger.accepting[s] = 1;
        std::vector<int> large = almost_sure_buchi_winning(bigger);
        CHECK(std::includes(large.begin(), large.end(), small.begin(),
                            small.end()));
    }
}

TEST_CASE("the component validator rejects malformed components") {
    ExplicitMDP m;
    m.trans = {{{{1, 1.0}}, {{0, 1.0}}},   // 0: a->1, b->0
               {{{0, 1.0}}, {}},           // 1: a->0
               {{{0, 1.0}}, {}}};          // 2: a->0 (leaks out of {2})
    EndComponent good{{0, 1}, {{0}, {0}}};
    CHECK_NOTHROW(validate_end_components(m, {good}));

    EndComponent leaky{{2}, {{0}}};
    CHECK_THROWS_AS(validate_end_components(m, {leaky}), ModelError);

    EndComponent disconnected{{0}, {{0}}};  // 0's action a exits {0}
    CHECK_THROWS_AS(validate_end_components(m, {disconnected}), ModelError);

    EndComponent overlapping{{0}, {{1}}};  // b self-loops, but overlaps
    CHECK_THROWS_AS(validate_end_components(m, {good, overlapping}),
                    ModelError);

    EndComponent empty_actions{{0, 1}, {{0}, {}}};
    CHECK_THROWS_AS(validate_end_components(m, {empty_actions}), ModelError);
}
