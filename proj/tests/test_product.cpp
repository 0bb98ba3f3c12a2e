#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pltl/formula.hpp"
#include "pltl/product.hpp"

using namespace pltl;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

Pomdp load(const std::string& path) { return parse_pomdp(read_file(path)); }

LDBA translate(const std::string& text, std::vector<std::string> ap) {
    Alphabet sigma;
    sigma.ap = std::move(ap);
    std::set<std::string> names(sigma.ap.begin(), sigma.ap.end());
    return ltl_to_ldba(parse_ltl(text, names), sigma);
}

}  // namespace

TEST_CASE("a trivial objective yields a product isomorphic to the model") {
    Pomdp m = load("fixtures/toy.pomdp");
    LDBA aut = translate("true", {"bad", "acc"});
    REQUIRE(aut.size() == 1);
    Product p = build_product(m, aut);

    CHECK(p.pomdp.state_count() == m.state_count());
    CHECK(p.pomdp.action_count() == m.action_count());
    CHECK(p.pomdp.observation_count() == m.observation_count());
    CHECK(p.silent_obs == -1);
    for (int s = 0; s < m.state_count(); ++s) {
        CHECK(p.pomdp.states[s] == m.states[s] + "_0");
        CHECK(p.pomdp.label[s] == m.label[s]);
        CHECK(p.accepting[s]);  // the automaton accepts every word
        for (int a = 0; a < m.action_count(); ++a) {
            CHECK(p.pomdp.trans[s][a] == m.trans[s][a]);
            CHECK(p.pomdp.obs_rows[s][a] == m.obs_rows[s][a]);
        }
    }
    CHECK(p.pomdp.start == m.start);
}

TEST_CASE("toy model times its safety/recurrence objective") {
    Pomdp m = load("fixtures/toy.pomdp");
    LDBA aut = translate("G !bad & G F acc", {"bad", "acc"});
    REQUIRE(aut.size() == 2);
    REQUIRE(aut.epsilon_edge_count() == 0);
    Product p = build_product(m, aut);
    Pomdp& x = p.pomdp;

    CHECK(x.state_count() == 18);  // full pairing of 9 model x 2 automaton
    CHECK(x.action_count() == 3);
    CHECK(p.reported_observations() == m.observation_count());
    CHECK(x.state_id("s8_0") >= 0);
    CHECK(x.state_id("s7_sink") >= 0);

    // Initial: s0 is unlabeled, so it enters the live automaton state.
    REQUIRE(x.start.size() == 1);
    CHECK(x.states[x.start[0].first] == "s0_0");
    CHECK(x.start[0].second == doctest::Approx(1.0));

    // Exactly the accepting-labeled, safe pairs are accepting.
    std::set<std::string> acc_names;
    for (int i = 0; i < x.state_count(); ++i)
        if (p.accepting[i]) acc_names.insert(x.states[i]);
    CHECK(acc_names == std::set<std::string>{"s3_0", "s8_0"});

    // Hitting a bad-labeled state drops to the sink and stays there.
    int from = x.state_id("s5_0");
    int d = x.action_id("d");
    Dist want = {{x.state_id("s7_sink"), 0.2}, {x.state_id("s8_0"), 0.8}};
    std::sort(want.begin(), want.end());
    REQUIRE(x.trans[from][d].size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(x.trans[from][d][i].first == want[i].first);
        CHECK(x.trans[from][d][i].second == doctest::Approx(want[i].second));
    }
    int sunk = x.state_id("s7_sink");
    for (int a = 0; a < 3; ++a)
        for (auto [t, pr] : x.trans[sunk][a])
            CHECK(x.states[t].substr(x.states[t].rfind('_')) == "_sink");

    // Entry count doubles the model's 28 (two automaton copies, no jumps).
    CHECK(x.transition_entries() == 2 * m.transition_entries());
}

TEST_CASE("epsilon edges become silent deterministic jump actions") {
    Pomdp m = load("fixtures/toy.pomdp");
    LDBA aut = translate("F G acc", {"bad", "acc"});
    REQUIRE(aut.epsilon_edge_count() == 1);
    int eps_from = -1;
    for (int q = 0; q < aut.size(); ++q)
        if (!aut.states[q].eps.empty()) eps_from = q;
    REQUIRE(eps_from >= 0);
    Product p = build_product(m, aut);
    Pomdp& x = p.pomdp;

    REQUIRE(p.jump_target.size() == 1);
    CHECK(x.action_count() == 4);
    CHECK(p.base_actions == 3);
    REQUIRE(p.silent_obs >= 0);
    CHECK(x.observations[p.silent_obs] == "o_eps");
    CHECK(p.reported_observations() == m.observation_count());

    // Jump rows: enabled exactly at the jump-capable automaton state, move
    // only the automaton component, emit the silent observation, one tick.
    int ja = 3;
    int rows = 0;
    for (int s = 0; s < m.state_count(); ++s)
        for (int q = 0; q < aut.size(); ++q) {
            const Dist& row = x.trans[p.index_of(s, q)][ja];
            if (q != eps_from) {
                CHECK(row.empty());
                continue;
            }
            ++rows;
            REQUIRE(row.size() == 1);
            CHECK(row[0].first == p.index_of(s, p.jump_target[0]));
            CHECK(row[0].second == doctest::Approx(1.0));
            const Dist& zrow = x.obs_rows[p.index_of(s, q)][ja];
            REQUIRE(zrow.size() == 1);
            CHECK(zrow[0].first == p.silent_obs);
        }
    CHECK(rows == m.state_count());
    CHECK(x.transition_entries() ==
          aut.size() * m.transition_entries() + m.state_count());
}

TEST_CASE("every product row projects exactly onto the model row") {
    for (const char* phi : {"G !bad & G F acc", "F G acc", "F acc & G !bad"}) {
        Pomdp m = load("fixtures/toy.pomdp");
        Product p = build_product(m, translate(phi, {"bad", "acc"}));
        for (int s = 0; s < m.state_count(); ++s)
            for (int q = 0; q < p.automaton_states; ++q)
                for (int a = 0; a < p.base_actions; ++a) {
                    const Dist& row = p.pomdp.trans[p.index_of(s, q)][a];
                    CHECK(row.empty() == m.trans[s][a].empty());
                    std::map<int, double> marginal;
                    for (auto [t, pr] : row) marginal[p.base_of(t)] += pr;
                    REQUIRE(marginal.size() == m.trans[s][a].size());
                    for (auto [t, pr] : m.trans[s][a])
                        CHECK(marginal.at(t) == doctest::Approx(pr));
                }
    }
}

TEST_CASE("product files round-trip through format and parse") {
    for (const char* phi : {"G !bad & G F acc", "F G acc"}) {
        Pomdp m = load("fixtures/toy.pomdp");
        Product p = build_product(m, translate(phi, {"bad", "acc"}));
        Product q = parse_product(format_product(p));
        CHECK(q.pomdp.states == p.pomdp.states);
        CHECK(q.pomdp.actions == p.pomdp.actions);
        CHECK(q.pomdp.observations == p.pomdp.observations);
        CHECK(q.accepting == p.accepting);
        CHECK(q.base_states == p.base_states);
        CHECK(q.automaton_states == p.automaton_states);
        CHECK(q.base_actions == p.base_actions);
        CHECK(q.silent_obs == p.silent_obs);
        CHECK(q.jump_target == p.jump_target);
        CHECK(format_product(q) == format_product(p));
    }
}

TEST_CASE("objectives over unknown propositions are rejected") {
    Pomdp m = load("fixtures/motivating.pomdp");
    LDBA aut = translate("G F nope", {"nope"});
    CHECK_THROWS_AS(build_product(m, aut), ModelError);
}

TEST_CASE("motivating model with its recurrence objective") {
    Pomdp m = load("fixtures/motivating.pomdp");
    LDBA aut = translate("G F goal", {"goal"});
    REQUIRE(aut.size() == 1);
    Product p = build_product(m, aut);
    CHECK(p.pomdp.state_count() == 6);
    std::set<std::string> acc_names;
    for (int i = 0; i < p.pomdp.state_count(); ++i)
        if (p.accepting[i]) acc_names.insert(p.pomdp.states[i]);
    CHECK(acc_names == std::set<std::string>{"s2_0", "s3_0"});
}
