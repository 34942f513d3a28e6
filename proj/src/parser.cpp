#include "bezmod/error.hpp"
#include "bezmod/formula.hpp"

#include <cctype>

namespace bezmod {

namespace {

bool lower_alpha(char c) { return c >= 'a' && c <= 'z'; }
bool ident_tail(char c) { return lower_alpha(c) || (c >= '0' && c <= '9'); }

// Strip comment lines ('#' first non-blank character) and newlines.
std::string preprocess(const std::string& text) {
    std::string out;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t eol = text.find('\n', i);
        if (eol == std::string::npos) eol = text.size();
        std::size_t j = i;
        while (j < eol && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j == eol || text[j] != '#') out.append(text, i, eol - i).push_back(' ');
        i = eol + 1;
    }
    return out;
}

struct Parser {
    Backend b;
    std::string s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }

    bool eat(char c) {
        if (!peek(c)) return false;
        ++pos;
        return true;
    }

    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos); }

    // position of the ')' matching the '(' already consumed
    std::size_t find_close() {
        int depth = 1;
        for (std::size_t i = pos; i < s.size(); ++i) {
            if (s[i] == '(') ++depth;
            if (s[i] == ')' && --depth == 0) return i;
        }
        fail("unbalanced '('");
    }

    Var ident() {
        skip_ws();
        if (pos >= s.size() || !lower_alpha(s[pos])) fail("expected a variable name");
        std::size_t start = pos;
        while (pos < s.size() && ident_tail(s[pos])) ++pos;
        return s.substr(start, pos - start);
    }

    mpq_class rational() {
        skip_ws();
        bool neg = false;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) neg = s[pos++] == '-';
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) fail("expected a number");
        mpz_class num(s.substr(start, pos - start)), den = 1;
        if (pos < s.size() && s[pos] == '/') {
            std::size_t save = pos++;
            std::size_t dstart = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == dstart) {
                pos = save; // the '/' was not part of the literal
            } else {
                den = mpz_class(s.substr(dstart, pos - dstart));
            }
        }
        mpq_class q(num, den);
        q.canonicalize();
        return neg ? mpq_class(-q) : q;
    }

    // one factor of a polynomial coefficient: rational literal, bare T
    // power, or parenthesized polynomial
    QPol poly_factor() {
        skip_ws();
        if (eat('(')) {
            std::size_t close = find_close();
            QPol p = parse_qpol(s.substr(pos, close - pos));
            pos = close + 1;
            return p;
        }
        if (pos < s.size() && s[pos] == 'T') {
            ++pos;
            unsigned long e = 1;
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                mpq_class n = rational();
                if (n.get_den() != 1 || n < 0) fail("bad exponent");
                e = n.get_num().get_ui();
            }
            return QPol::monomial(1, static_cast<unsigned>(e));
        }
        return QPol(rational());
    }

    // coefficient position: an integer literal (Z base) or a polynomial
    // factor (Q[T] base), either one over a denominator factor when the
    // backend is a localization
    RingElem scalar_mono() {
        skip_ws();
        if (!b.is_poly_base()) return parse_ring_elem(b, s, pos);
        QPol num = poly_factor();
        if (b.is_valuation() && pos + 1 < s.size() && s[pos] == '/' &&
            (s[pos + 1] == '(' || s[pos + 1] == 'T' ||
             std::isdigit(static_cast<unsigned char>(s[pos + 1])))) {
            ++pos;
            QPol den = poly_factor();
            return RingElem::of_poly_fraction(b, num, den);
        }
        return RingElem::of_poly(b, num);
    }

    GammaElem gamma_primary() {
        skip_ws();
        if (pos >= s.size() || s[pos] != 'v') fail("expected 'v('");
        ++pos;
        expect('(');
        std::size_t close = find_close();
        std::string inner = s.substr(pos, close - pos);
        pos = close + 1;
        RingElem a = b.is_poly_base() ? RingElem::of_poly(b, parse_qpol(inner))
                                      : parse_ring_elem(b, inner);
        if (a.is_zero()) fail("v(0) is not a usable index");
        return GammaElem::of(a);
    }

    GammaElem gamma() {
        GammaElem g = gamma_primary();
        while (true) {
            if (eat('*'))
                g = g * gamma_primary();
            else if (eat('/'))
                g = g / gamma_primary();
            else
                return g;
        }
    }

    Term mono() {
        skip_ws();
        if (pos < s.size() && lower_alpha(s[pos])) {
            Var v = ident();
            RingElem c = eat('*') ? scalar_mono() : RingElem::one(b);
            return Term::mono(v, c);
        }
        RingElem c = scalar_mono();
        if (!peek('*')) {
            // the literal 0 is the only scalar standing alone as a term
            if (c.is_zero()) return Term(b);
            fail("expected '*'");
        }
        ++pos;
        return Term::mono(ident(), c);
    }

    Term term() {
        bool neg = eat('-');
        Term m = mono();
        Term t = neg ? -m : m;
        while (true) {
            skip_ws();
            if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
                bool sub = s[pos++] == '-';
                Term n = mono();
                t = sub ? t - n : t + n;
            } else {
                return t;
            }
        }
    }

    Atom atom() {
        skip_ws();
        if (pos < s.size() && s[pos] == 'V') {
            ++pos;
            if (!eat('[')) fail("expected '[' after V");
            GammaElem g = gamma();
            if (!eat(']')) fail("expected ']'");
            expect('(');
            Term t = term();
            expect(')');
            return Atom::vp(std::move(g), std::move(t));
        }
        Term lhs = term();
        expect('=');
        Term rhs = term();
        return Atom::eq(lhs - rhs);
    }

    PPFormula pp() {
        skip_ws();
        std::vector<Var> bound;
        if (pos < s.size() && s[pos] == 'E') {
            ++pos;
            while (!eat('.')) bound.push_back(ident());
            if (bound.empty()) fail("'E' needs at least one variable");
        }
        std::vector<Atom> atoms;
        atoms.push_back(atom());
        while (eat('&')) atoms.push_back(atom());
        return PPFormula(b, std::move(bound), std::move(atoms));
    }

    InvCondition invcond() {
        skip_ws();
        if (s.compare(pos, 4, "Inv(") != 0) fail("expected 'Inv('");
        pos += 4;
        std::size_t close = find_close();
        std::size_t bar = std::string::npos;
        int depth = 0;
        for (std::size_t i = pos; i < close; ++i) {
            if (s[i] == '(') ++depth;
            if (s[i] == ')') --depth;
            if (s[i] == '|' && depth == 0) {
                bar = i;
                break;
            }
        }
        if (bar == std::string::npos) fail("expected '|' separating the two formulas");
        Parser phi{b, s.substr(pos, bar - pos)};
        Parser psi{b, s.substr(bar + 1, close - bar - 1)};
        PPFormula f = phi.pp(), g = psi.pp();
        phi.end_check();
        psi.end_check();
        pos = close + 1;
        skip_ws();
        InvRel rel;
        if (eat('>'))
            rel = InvRel::Gt1;
        else if (eat('='))
            rel = InvRel::Eq1;
        else
            fail("expected '>1' or '=1'");
        expect('1');
        return InvCondition(std::move(f), std::move(g), rel);
    }

    BSentence sent_unary() {
        skip_ws();
        if (eat('!')) return BSentence::negation(sent_unary());
        if (pos < s.size() && s[pos] == '(') {
            ++pos;
            BSentence x = sentence();
            expect(')');
            return x;
        }
        if (s.compare(pos, 4, "Inv(") == 0) return BSentence::inv(invcond());
        // remaining leaf shape: a closed pp sentence
        return BSentence::pp(pp());
    }

    BSentence sent_and() {
        BSentence x = sent_unary();
        while (eat('&')) x = BSentence::conj(std::move(x), sent_unary());
        return x;
    }

    BSentence sentence() {
        BSentence x = sent_and();
        while (eat('|')) x = BSentence::disj(std::move(x), sent_and());
        return x;
    }

    void end_check() {
        skip_ws();
        if (pos != s.size()) fail("trailing input");
    }
};

} // namespace

PPFormula parse_pp(const Backend& b, const std::string& text) {
    Parser p{b, preprocess(text)};
    PPFormula f = p.pp();
    p.end_check();
    return f;
}

BSentence parse_sentence(const Backend& b, const std::string& text) {
    Parser p{b, preprocess(text)};
    BSentence s = p.sentence();
    p.end_check();
    return s;
}

} // namespace bezmod
