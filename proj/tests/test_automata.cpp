#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "pltl/automata.hpp"
#include "pltl/formula.hpp"
#include "pltl/rng.hpp"
#include "support/lasso_eval.hpp"
#include "support/random_models.hpp"

using namespace pltl;
using testsupport::holds_at;

namespace {

Alphabet alpha(std::vector<std::string> ap) {
    Alphabet s;
    s.ap = std::move(ap);
    return s;
}

std::set<std::string> apset(const Alphabet& s) {
    return std::set<std::string>(s.ap.begin(), s.ap.end());
}

// Enumerate all lasso words over the alphabet with bounded pieces and check
// the automaton against the reference evaluator.
template <class Automaton>
void check_language(const Formula& f, const Automaton& a, const Alphabet& sigma,
                    std::size_t maxp, std::size_t maxc) {
    int nl = sigma.letters();
    std::vector<std::vector<Letter>> seqs = {{}};
    std::vector<std::vector<std::vector<Letter>>> by_len(std::max(maxp, maxc) + 1);
    by_len[0] = {{}};
    for (std::size_t len = 1; len < by_len.size(); ++len)
        for (const auto& shorter : by_len[len - 1])
            for (Letter v = 0; v < static_cast<Letter>(nl); ++v) {
                auto w = shorter;
                w.push_back(v);
                by_len[len].push_back(std::move(w));
            }
    for (std::size_t lp = 0; lp <= maxp; ++lp)
        for (std::size_t lc = 1; lc <= maxc; ++lc)
            for (const auto& p : by_len[lp])
                for (const auto& c : by_len[lc]) {
                    bool want = holds_at(f, p, c, sigma.ap);
                    bool got = accepts_lasso(a, p, c);
                    if (want != got) {
                        CAPTURE(f.str());
                        CAPTURE(lp);
                        CAPTURE(lc);
                        REQUIRE(want == got);
                    }
                }
}

LDBA translate(const std::string& text, const Alphabet& sigma) {
    return ltl_to_ldba(parse_ltl(text, apset(sigma)), sigma);
}

}  // namespace

TEST_CASE("eventually-a automata") {
    Alphabet s = alpha({"a"});
    Formula f = parse_ltl("F a", apset(s));
    NBA n = reduce_nba(ltl_to_nba(to_nnf(f), s));
    CHECK(n.size() == 2);
    check_language(f, n, s, 3, 3);
    LDBA l = nba_to_ldba(n);
    CHECK(l.size() <= 3);
    CHECK(l.epsilon_edge_count() == 0);
    check_language(f, l, s, 4, 4);
    validate_ldba(l);
}

TEST_CASE("true and false automata") {
    Alphabet s = alpha({"a"});
    LDBA t = translate("true", s);
    CHECK(t.size() == 1);
    CHECK(accepts_lasso(t, {}, {0}));
    CHECK(accepts_lasso(t, {1}, {0, 1}));
    LDBA f = translate("false", s);
    CHECK_FALSE(accepts_lasso(f, {}, {0}));
    CHECK_FALSE(accepts_lasso(f, {1}, {0, 1}));
}

TEST_CASE("recurrence needs the full pipeline") {
    Alphabet s = alpha({"a"});
    Formula f = parse_ltl("G F a", apset(s));
    LDBA l = translate("G F a", s);
    validate_ldba(l);
    CHECK(accepts_lasso(l, {}, {0, 1}));
    CHECK_FALSE(accepts_lasso(l, {1}, {0}));
    check_language(f, l, s, 4, 4);
}

TEST_CASE("persistence introduces epsilon jumps") {
    Alphabet s = alpha({"a"});
    Formula f = parse_ltl("F G a", apset(s));
    LDBA l = translate("F G a", s);
    validate_ldba(l);
    CHECK(l.size() == 3);
    CHECK(l.epsilon_edge_count() == 1);
    check_language(f, l, s, 4, 4);
}

TEST_CASE("benchmark objective automaton sizes") {
    // Navigation objectives over labels G1 (goal one), G2 (goal two),
    // T (trap); surveillance/reachability over G, B, E; hallway over A, B, C.
    Alphabet nav = alpha({"G1", "G2", "T"});
    Alphabet rs = alpha({"G", "B", "E"});
    Alphabet hw = alpha({"A", "B", "C"});

    struct Row {
        const Alphabet* sigma;
        std::string text;
        int states;
        int eps;
    };
    std::vector<Row> rows = {
        {&hw, "F A & G !B", 3, 0},
        {&hw, "F G C", 3, 1},
        {&rs, "F (G & F E) & G !B", 4, 0},
        {&rs, "F G G", 3, 1},
        {&nav, "F G1 & G !T", 3, 0},
        {&nav, "G (G2 -> F G1) & G !T", 3, 0},
        {&nav, "G F G1 & G !T", 2, 0},
    };
    for (const auto& r : rows) {
        LDBA l = translate(r.text, *r.sigma);
        validate_ldba(l);
        CAPTURE(r.text);
        CHECK(l.size() == r.states);
        CHECK(l.epsilon_edge_count() == r.eps);
        Formula f = parse_ltl(r.text, apset(*r.sigma));
        check_language(f, l, *r.sigma, 2, 3);
    }
}

TEST_CASE("negation dualities agree with the evaluator") {
    Alphabet s = alpha({"a", "b"});
    Formula f = to_nnf(parse_ltl("!(F a & G b)", apset(s)));
    Formula g = parse_ltl("G !a | F !b", apset(s));
    LDBA lf = ltl_to_ldba(f, s);
    LDBA lg = ltl_to_ldba(g, s);
    std::vector<std::vector<Letter>> pieces = {{}, {0}, {1}, {2}, {3}};
    // Exhaustive comparison of both automata on short lassos.
    check_language(f, lg, s, 3, 3);
    check_language(g, lf, s, 3, 3);
}

TEST_CASE("language preservation on a generated corpus") {
    Alphabet s = alpha({"a", "b"});
    auto ap = apset(s);
    std::vector<Formula> corpus = testsupport::enumerate_formulas(s.ap, 1);
    Rng rng(8888);
    for (int i = 0; i < 120; ++i)
        corpus.push_back(testsupport::random_formula(rng, s.ap, 2 + static_cast<int>(rng.below(3))));
    for (const auto& f : corpus) {
        CAPTURE(f.str());
        LDBA l = ltl_to_ldba(f, s);
        validate_ldba(l);
        check_language(f, l, s, 3, 3);
    }
}

TEST_CASE("the progression fallback alone preserves the language") {
    // Most formulas convert through the reduced-automaton route, so force
    // the fallback to get real coverage of it.
    Alphabet s = alpha({"a", "b"});
    auto ap = apset(s);
    std::vector<Formula> corpus = testsupport::enumerate_formulas(s.ap, 1);
    Rng rng(4242);
    for (int i = 0; i < 40; ++i)
        corpus.push_back(testsupport::random_formula(rng, s.ap, 2));
    setenv("PLTL_FORCE_PROGRESSION", "1", 1);
    for (const auto& f : corpus) {
        CAPTURE(f.str());
        LDBA l = ltl_to_ldba(f, s);
        validate_ldba(l);
        check_language(f, l, s, 2, 3);
    }
    unsetenv("PLTL_FORCE_PROGRESSION");
}

TEST_CASE("hoa round trip") {
    Alphabet s = alpha({"G1", "G2", "T"});
    for (const std::string& text :
         {std::string("G F G1 & G !T"), std::string("F G G1"),
          std::string("G (G2 -> F G1) & G !T")}) {
        LDBA l = translate(text, s);
        std::string hoa = export_hoa(l, text);
        LDBA back = import_hoa(hoa);
        REQUIRE(back.size() == l.size());
        REQUIRE(back.epsilon_edge_count() == l.epsilon_edge_count());
        Formula f = parse_ltl(text, apset(s));
        check_language(f, back, s, 2, 2);
        // Re-export is byte-identical when state numbering is unchanged.
        CHECK(export_hoa(back, text) == hoa);
    }
}

TEST_CASE("hand-written state-based hoa imports") {
    // Recurrence of a: 2 states, state-based acceptance marks.
    std::string hoa =
        "HOA: v1\n"
        "States: 2\n"
        "Start: 0\n"
        "AP: 1 \"a\"\n"
        "acc-name: Buchi\n"
        "Acceptance: 1 Inf(0)\n"
        "--BODY--\n"
        "State: 0 \"waiting\"\n"
        "[!0] 0\n"
        "[0] 1\n"
        "State: 1 \"seen\" {0}\n"
        "[!0] 0\n"
        "[0] 1\n"
        "--END--\n";
    LDBA l = import_hoa(hoa);
    validate_ldba(l);
    int accepting_states = 0;
    for (int q = 0; q < l.size(); ++q)
        if (l.state_accepts_some_letter(q)) ++accepting_states;
    CHECK(accepting_states == 1);
    Alphabet s = alpha({"a"});
    Formula f = parse_ltl("G F a", apset(s));
    check_language(f, l, s, 3, 3);
}

TEST_CASE("import rejects letter-nondeterminism") {
    std::string hoa =
        "HOA: v1\n"
        "States: 2\n"
        "Start: 0\n"
        "AP: 1 \"a\"\n"
        "Acceptance: 1 Inf(0)\n"
        "--BODY--\n"
        "State: 0\n"
        "[0] 0\n"
        "[0] 1 {0}\n"
        "State: 1\n"
        "[t] 1 {0}\n"
        "--END--\n";
    CHECK_THROWS_WITH_AS(import_hoa(hoa), doctest::Contains("not limit-deterministic"),
                         AutomatonError);
}

TEST_CASE("import rejects malformed inputs") {
    CHECK_THROWS_AS(import_hoa("HOA: v2\nStates: 1\n--BODY--\n--END--\n"),
                    AutomatonError);
    CHECK_THROWS_AS(import_hoa(""), AutomatonError);
    CHECK_THROWS_AS(
        import_hoa("HOA: v1\nStates: 1\nStart: 0\nAP: 0\n"
                   "Acceptance: 2 Inf(0)&Inf(1)\n--BODY--\nState: 0\n[t] 0\n--END--\n"),
        AutomatonError);
}

TEST_CASE("lasso membership on the recurrence automaton") {
    Alphabet s = alpha({"a"});
    LDBA l = translate("G F a", s);
    CHECK(accepts_lasso(l, {}, {1, 0}));
    CHECK_FALSE(accepts_lasso(l, {1}, {0}));
    CHECK_THROWS_AS(accepts_lasso(l, {1}, {}), AutomatonError);
}

TEST_CASE("state cap is enforced") {
    Alphabet s = alpha({"a", "b"});
    Formula f = parse_ltl("F (a & X (b & X (a U b)))", apset(s));
    CHECK_THROWS_AS(ltl_to_nba(to_nnf(f), s, 2), AutomatonError);
}
