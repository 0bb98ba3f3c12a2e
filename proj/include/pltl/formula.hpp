#pragma once
// Linear temporal logic abstract syntax: parsing, printing, negation normal
// form.
//
// Grammar (ASCII): X=next, U=until, R=release, F=eventually, G=always,
// !=not, &=and, |=or, ->=implies. Precedence, tightest first:
// unary (!, X, F, G) > U = R (right-associative) > & > | > ->.
// Atom identifiers are case-sensitive [A-Za-z_][A-Za-z0-9_]* tokens; the
// single letters X/U/R/F/G double as operators and are read as atoms exactly
// when an operator cannot occur at that point.

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace pltl {

enum class Kind {
    True,
    False,
    Atom,
    Not,
    And,
    Or,
    Implies,
    Next,
    Until,
    Release,
    Eventually,
    Always,
};

class Formula {
  public:
    Formula() : kind_(Kind::True) {}

    static Formula tt() { return Formula(Kind::True, {}, ""); }
    static Formula ff() { return Formula(Kind::False, {}, ""); }
    static Formula atom(std::string name) { return Formula(Kind::Atom, {}, std::move(name)); }
    static Formula make_not(Formula f) { return Formula(Kind::Not, {std::move(f)}, ""); }
    static Formula make_and(Formula a, Formula b) { return Formula(Kind::And, {std::move(a), std::move(b)}, ""); }
    static Formula make_or(Formula a, Formula b) { return Formula(Kind::Or, {std::move(a), std::move(b)}, ""); }
    static Formula implies(Formula a, Formula b) { return Formula(Kind::Implies, {std::move(a), std::move(b)}, ""); }
    static Formula next(Formula f) { return Formula(Kind::Next, {std::move(f)}, ""); }
    static Formula until(Formula a, Formula b) { return Formula(Kind::Until, {std::move(a), std::move(b)}, ""); }
    static Formula release(Formula a, Formula b) { return Formula(Kind::Release, {std::move(a), std::move(b)}, ""); }
    static Formula eventually(Formula f) { return Formula(Kind::Eventually, {std::move(f)}, ""); }
    static Formula always(Formula f) { return Formula(Kind::Always, {std::move(f)}, ""); }

    Kind kind() const { return kind_; }
    const std::string& atom_name() const { return atom_; }
    const Formula& child(std::size_t i) const { return kids_[i]; }
    std::size_t arity() const { return kids_.size(); }

    bool operator==(const Formula& o) const;
    bool operator!=(const Formula& o) const { return !(*this == o); }
    bool operator<(const Formula& o) const;  // arbitrary total order (for sets)

    // Render using minimal parentheses under the declared precedence; the
    // result re-parses to a structurally identical tree.
    std::string str() const;

    // All atom names occurring in the formula.
    std::set<std::string> atoms() const;

  private:
    Formula(Kind k, std::vector<Formula> kids, std::string atom)
        : kind_(k), atom_(std::move(atom)), kids_(std::move(kids)) {}

    Kind kind_;
    std::string atom_;
    std::vector<Formula> kids_;
};

struct ParseError : std::runtime_error {
    std::size_t position;  // byte offset into the input text
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg), position(pos) {}
};

// Parse `text` over the declared atomic propositions. Throws ParseError on
// malformed input or when an atom is not a member of `ap`.
Formula parse_ltl(const std::string& text, const std::set<std::string>& ap);

// Negation normal form: eliminates `->`, pushes negation down to atoms using
// the standard dualities (including !F x = G !x and !G x = F !x, which keep
// the derived operators first-class). X, U, R, F, G survive; `!` appears only
// directly above atoms.
Formula to_nnf(const Formula& f);

}  // namespace pltl
