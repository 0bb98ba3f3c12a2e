#include "pltl/formula.hpp"

#include <cctype>

namespace pltl {

bool Formula::operator==(const Formula& o) const {
    if (kind_ != o.kind_ || atom_ != o.atom_ || kids_.size() != o.kids_.size()) return false;
    for (std::size_t i = 0; i < kids_.size(); ++i)
        if (!(kids_[i] == o.kids_[i])) return false;
    return true;
}

bool Formula::operator<(const Formula& o) const {
    if (kind_ != o.kind_) return kind_ < o.kind_;
    if (atom_ != o.atom_) return atom_ < o.atom_;
    if (kids_.size() != o.kids_.size()) return kids_.size() < o.kids_.size();
    for (std::size_t i = 0; i < kids_.size(); ++i) {
        if (kids_[i] < o.kids_[i]) return true;
        if (o.kids_[i] < kids_[i]) return false;
    }
    return false;
}

std::set<std::string> Formula::atoms() const {
    std::set<std::string> out;
    if (kind_ == Kind::Atom) out.insert(atom_);
    for (const auto& k : kids_) {
        auto sub = k.atoms();
        out.insert(sub.begin(), sub.end());
    }
    return out;
}

namespace {

// Precedence levels, loosest first. Unary operators bind tightest.
int level(Kind k) {
    switch (k) {
        case Kind::Implies: return 0;
        case Kind::Or: return 1;
        case Kind::And: return 2;
        case Kind::Until:
        case Kind::Release: return 3;
        default: return 4;  // unary and nullary
    }
}

void render(const Formula& f, int parent_level, bool right_of_same, std::string& out) {
    int my = level(f.kind());
    bool paren = my < parent_level;
    if (my == parent_level) {
        // U/R and -> are right-associative, & and | parse left-associatively;
        // parenthesise the operand on the other side so the tree round-trips.
        if ((my == 3 || my == 0) && !right_of_same) paren = true;
        if ((my == 1 || my == 2) && right_of_same) paren = true;
    }
    if (paren) out += '(';
    switch (f.kind()) {
        case Kind::True: out += "true"; break;
        case Kind::False: out += "false"; break;
        case Kind::Atom: out += f.atom_name(); break;
        case Kind::Not:
            out += '!';
            render(f.child(0), 4, false, out);
            break;
        case Kind::Next:
        case Kind::Eventually:
        case Kind::Always:
            out += f.kind() == Kind::Next ? 'X' : (f.kind() == Kind::Eventually ? 'F' : 'G');
            out += ' ';
            render(f.child(0), 4, false, out);
            break;
        case Kind::And:
        case Kind::Or:
        case Kind::Implies:
        case Kind::Until:
        case Kind::Release: {
            const char* op = f.kind() == Kind::And       ? " & "
                             : f.kind() == Kind::Or      ? " | "
                             : f.kind() == Kind::Implies ? " -> "
                             : f.kind() == Kind::Until   ? " U "
                                                         : " R ";
            bool temporal = f.kind() == Kind::Until || f.kind() == Kind::Release;
            std::string lhs;
            render(f.child(0), my, false, lhs);
            // An atom named like a unary operator directly before "U"/"R"
            // would be re-read as that operator; parenthesise the operand.
            std::size_t end = lhs.size();
            std::size_t start = end;
            while (start > 0 && (std::isalnum(static_cast<unsigned char>(lhs[start - 1])) ||
                                 lhs[start - 1] == '_'))
                --start;
            std::string last = lhs.substr(start, end - start);
            if (temporal && (last == "X" || last == "F" || last == "G"))
                out += "(" + lhs + ")";
            else
                out += lhs;
            out += op;
            render(f.child(1), my, true, out);
            break;
        }
    }
    if (paren) out += ')';
}

struct Token {
    enum Type { Ident, LParen, RParen, NotOp, AndOp, OrOp, ImpliesOp, End } type;
    std::string text;
    std::size_t pos;
};

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '(') out.push_back({Token::LParen, "(", i++});
        else if (c == ')') out.push_back({Token::RParen, ")", i++});
        else if (c == '!') out.push_back({Token::NotOp, "!", i++});
        else if (c == '&') out.push_back({Token::AndOp, "&", i++});
        else if (c == '|') out.push_back({Token::OrOp, "|", i++});
        else if (c == '-') {
            if (i + 1 >= s.size() || s[i + 1] != '>') throw ParseError("expected '->'", i);
            out.push_back({Token::ImpliesOp, "->", i});
            i += 2;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
            out.push_back({Token::Ident, s.substr(start, i - start), start});
        } else {
            throw ParseError(std::string("unexpected character '") + c + "'", i);
        }
    }
    out.push_back({Token::End, "", s.size()});
    return out;
}

class Parser {
  public:
    Parser(std::vector<Token> toks, const std::set<std::string>& ap) : toks_(std::move(toks)), ap_(ap) {}

    Formula parse() {
        Formula f = implies_expr();
        if (cur().type != Token::End) throw ParseError("trailing input after formula", cur().pos);
        return f;
    }

  private:
    const Token& cur() const { return toks_[idx_]; }
    const Token& peek() const { return toks_[idx_ + 1 < toks_.size() ? idx_ + 1 : toks_.size() - 1]; }
    void advance() { ++idx_; }

    // A token that can begin a formula. An identifier qualifies when it is a
    // declared atom, a boolean constant, or a unary operator letter.
    bool starts_formula(const Token& t) const {
        if (t.type == Token::LParen || t.type == Token::NotOp) return true;
        if (t.type != Token::Ident) return false;
        const std::string& s = t.text;
        return ap_.count(s) || s == "true" || s == "false" || s == "X" ||
               s == "F" || s == "G";
    }

    // Single-letter temporal keywords act as operators only when an operand
    // follows; otherwise they are ordinary atoms (benchmark labels include
    // G, F-like single letters).
    bool is_unary_op_here() const {
        if (cur().type != Token::Ident) return false;
        const std::string& t = cur().text;
        if (t != "X" && t != "F" && t != "G") return false;
        return starts_formula(peek());
    }

    bool is_binary_temporal_here() const {
        if (cur().type != Token::Ident) return false;
        const std::string& t = cur().text;
        if (t != "U" && t != "R") return false;
        return starts_formula(peek());
    }

    Formula implies_expr() {
        Formula lhs = or_expr();
        if (cur().type == Token::ImpliesOp) {
            advance();
            return Formula::implies(std::move(lhs), implies_expr());  // right-assoc
        }
        return lhs;
    }

    Formula or_expr() {
        Formula f = and_expr();
        while (cur().type == Token::OrOp) {
            advance();
            f = Formula::make_or(std::move(f), and_expr());
        }
        return f;
    }

    Formula and_expr() {
        Formula f = until_expr();
        while (cur().type == Token::AndOp) {
            advance();
            f = Formula::make_and(std::move(f), until_expr());
        }
        return f;
    }

    Formula until_expr() {
        Formula lhs = unary_expr();
        if (is_binary_temporal_here()) {
            bool is_until = cur().text == "U";
            advance();
            Formula rhs = until_expr();  // right-associative
            return is_until ? Formula::until(std::move(lhs), std::move(rhs))
                            : Formula::release(std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Formula unary_expr() {
        if (cur().type == Token::NotOp) {
            advance();
            return Formula::make_not(unary_expr());
        }
        if (is_unary_op_here()) {
            char op = cur().text[0];
            advance();
            Formula f = unary_expr();
            if (op == 'X') return Formula::next(std::move(f));
            if (op == 'F') return Formula::eventually(std::move(f));
            return Formula::always(std::move(f));
        }
        return primary();
    }

    Formula primary() {
        if (cur().type == Token::LParen) {
            std::size_t open = cur().pos;
            advance();
            Formula f = implies_expr();
            if (cur().type != Token::RParen) throw ParseError("unbalanced '('", open);
            advance();
            return f;
        }
        if (cur().type == Token::Ident) {
            const std::string& name = cur().text;
            std::size_t pos = cur().pos;
            advance();
            if (name == "true") return Formula::tt();
            if (name == "false") return Formula::ff();
            if (!ap_.count(name))
                throw ParseError("unknown atomic proposition '" + name + "'", pos);
            return Formula::atom(name);
        }
        throw ParseError("expected a formula", cur().pos);
    }

    std::vector<Token> toks_;
    const std::set<std::string>& ap_;
    std::size_t idx_ = 0;
};

Formula nnf(const Formula& f, bool negate);

Formula nnf_children_pos(const Formula& f) { return f; }

Formula nnf(const Formula& f, bool negate) {
    switch (f.kind()) {
        case Kind::True: return negate ? Formula::ff() : Formula::tt();
        case Kind::False: return negate ? Formula::tt() : Formula::ff();
        case Kind::Atom: return negate ? Formula::make_not(f) : f;
        case Kind::Not: return nnf(f.child(0), !negate);
        case Kind::And: {
            Formula a = nnf(f.child(0), negate), b = nnf(f.child(1), negate);
            return negate ? Formula::make_or(std::move(a), std::move(b))
                          : Formula::make_and(std::move(a), std::move(b));
        }
        case Kind::Or: {
            Formula a = nnf(f.child(0), negate), b = nnf(f.child(1), negate);
            return negate ? Formula::make_and(std::move(a), std::move(b))
                          : Formula::make_or(std::move(a), std::move(b));
        }
        case Kind::Implies: {
            // a -> b == !a | b
            Formula a = nnf(f.child(0), !negate), b = nnf(f.child(1), negate);
            return negate ? Formula::make_and(std::move(a), std::move(b))
                          : Formula::make_or(std::move(a), std::move(b));
        }
        case Kind::Next: return Formula::next(nnf(f.child(0), negate));
        case Kind::Eventually:
            return negate ? Formula::always(nnf(f.child(0), true))
                          : Formula::eventually(nnf(f.child(0), false));
        case Kind::Always:
            return negate ? Formula::eventually(nnf(f.child(0), true))
                          : Formula::always(nnf(f.child(0), false));
        case Kind::Until: {
            Formula a = nnf(f.child(0), negate), b = nnf(f.child(1), negate);
            return negate ? Formula::release(std::move(a), std::move(b))
                          : Formula::until(std::move(a), std::move(b));
        }
        case Kind::Release: {
            Formula a = nnf(f.child(0), negate), b = nnf(f.child(1), negate);
            return negate ? Formula::until(std::move(a), std::move(b))
                          : Formula::release(std::move(a), std::move(b));
        }
    }
    return Formula::tt();  // unreachable
}

}  // namespace

std::string Formula::str() const {
    std::string out;
    render(*this, 0, true, out);
    return out;
}

Formula parse_ltl(const std::string& text, const std::set<std::string>& ap) {
    return Parser(lex(text), ap).parse();
}

Formula to_nnf(const Formula& f) { return nnf(f, false); }

}  // namespace pltl
