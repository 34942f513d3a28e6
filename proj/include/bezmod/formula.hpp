#pragma once

#include "bezmod/gamma.hpp"
#include "bezmod/ring.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bezmod {

using Var = std::string;

// B-linear combination of module variables; the module language has no
// constants, so a term is determined by its coefficient map.
//
// Invariant: no zero coefficients stored.
class Term {
public:
    explicit Term(Backend b) : b_(std::move(b)) {}
    static Term mono(const Var& v, const RingElem& c);

    const Backend& backend() const { return b_; }
    bool is_zero() const { return c_.empty(); }
    const std::map<Var, RingElem>& entries() const { return c_; }
    RingElem coeff(const Var& v) const;  // zero when absent
    bool mentions(const Var& v) const { return c_.count(v) != 0; }
    Term without(const Var& v) const;

    Term operator+(const Term& o) const;
    Term operator-(const Term& o) const;
    Term operator-() const;
    Term scaled(const RingElem& c) const;
    bool operator==(const Term& o) const { return c_ == o.c_; }
    bool operator!=(const Term& o) const { return !(*this == o); }

    std::string to_string() const;  // "0" when empty

private:
    Backend b_;
    std::map<Var, RingElem> c_;
};

// Equation t = 0 (no index) or congruence V_delta(t). The index is never
// Infinity: v(0) does not name a subgroup in the external language.
struct Atom {
    std::optional<GammaElem> index;
    Term term;

    static Atom eq(Term t);
    static Atom vp(GammaElem delta, Term t);
    bool is_eq() const { return !index.has_value(); }
    bool operator==(const Atom& o) const;
    bool operator!=(const Atom& o) const { return !(*this == o); }
    std::string to_string() const;  // "t = 0" | "V[g](t)"
};

// E x1 ... xn . atom & ... & atom. Bound variables are pairwise distinct;
// the empty atom list is the true formula "0 = 0".
struct PPFormula {
    Backend backend;
    std::vector<Var> bound;
    std::vector<Atom> atoms;

    PPFormula(Backend b, std::vector<Var> bv, std::vector<Atom> as);
    std::vector<Var> free_vars() const;  // sorted
    bool is_closed() const { return free_vars().empty(); }
    bool operator==(const PPFormula& o) const;
    bool operator!=(const PPFormula& o) const { return !(*this == o); }
    std::string to_string() const;
};

// Structural normalization: drop trivially true atoms (0 = 0, V of the
// zero term, V at an index leq v(1)), canonicalize the unit scale of each
// term, drop duplicates and unused bound variables. Idempotent; preserves
// the defined solution set in every model.
PPFormula normalize(const PPFormula& f);

// The one-variable shape x.a = 0 & V_delta(x): every pp formula in one
// free variable reduces to it over a valuation domain. a = 0 means no
// torsion constraint; delta = v(1) no divisibility constraint.
struct SubgroupForm {
    RingElem a;
    GammaElem delta;

    bool operator==(const SubgroupForm& o) const { return a == o.a && delta == o.delta; }
    PPFormula to_pp(const Var& x) const;
    std::string to_string() const;
};

enum class InvRel { Eq1, Gt1 };

// Invariant condition (phi/psi) > 1 or = 1 on the index of definable
// subgroups. psi is stored conjoined with phi, so psi(M) <= phi(M) in
// every structure; the conjunction is skipped when psi already contains
// phi's atoms up to renaming of bound variables, which makes printing
// and re-parsing stable.
class InvCondition {
public:
    InvCondition(PPFormula phi, PPFormula psi, InvRel rel);

    const PPFormula& phi() const { return phi_; }
    const PPFormula& psi() const { return psi_; }
    InvRel rel() const { return rel_; }
    const Var& var() const { return var_; }
    const Backend& backend() const { return phi_.backend; }
    bool operator==(const InvCondition& o) const;
    std::string to_string() const;

private:
    PPFormula phi_, psi_;
    InvRel rel_;
    Var var_;
};

// Boolean combination of invariant conditions and closed pp leaves.
class BSentence {
public:
    enum class Kind { Inv, PP, Not, And, Or };

    static BSentence inv(InvCondition c);
    static BSentence pp(PPFormula f);
    static BSentence negation(BSentence s);
    static BSentence conj(BSentence a, BSentence b);
    static BSentence disj(BSentence a, BSentence b);

    Kind kind() const { return kind_; }
    const InvCondition& inv_leaf() const;
    const PPFormula& pp_leaf() const;
    const std::vector<BSentence>& kids() const { return kids_; }
    std::string to_string() const;

private:
    explicit BSentence(Kind k) : kind_(k) {}
    Kind kind_;
    std::vector<InvCondition> inv_;  // singleton for Inv leaves
    std::vector<PPFormula> pp_;      // singleton for PP leaves
    std::vector<BSentence> kids_;
};

// True when a variable-renaming of `inner`'s bound list into `outer`'s
// maps every atom of `inner` onto an atom of `outer` (free variables
// fixed). Both formulas are expected normalized.
bool pp_contains_upto_renaming(const PPFormula& outer, const PPFormula& inner);

// Reinterpret a formula over a localization of its backend: coefficients
// are embedded and Gamma indices map through their numerator/denominator.
PPFormula embed_pp(const PPFormula& f, const Backend& target);

// Grammar (whitespace-insensitive; '#' starts a comment line):
//   ppformula := [ 'E' ident+ '.' ] atom ( '&' atom )*
//   atom      := term '=' term | 'V[' gamma ']' '(' term ')'
//   term      := [ '-' ] mono ( ('+'|'-') mono )*
//   mono      := ident [ '*' scalar ] | scalar '*' ident
//   gamma     := 'v(' scalar ')' ( ('*'|'/') 'v(' scalar ')' )*
//   sentence  := or; or := and ('|' and)*; and := unary ('&' unary)*
//   unary     := '!' unary | '(' sentence ')' | invcond
//   invcond   := 'Inv(' ppformula '|' ppformula ')' ( '>1' | '=1' )
// Identifiers match [a-z][a-z0-9]*; the indeterminate T is reserved.
// Scalars are integer literals over the Z-based backends; over the
// Q[T]-based ones a rational literal or a parenthesized polynomial
// expression (unparenthesized polynomials are accepted inside v(...),
// which is self-delimiting).
PPFormula parse_pp(const Backend& b, const std::string& text);
BSentence parse_sentence(const Backend& b, const std::string& text);

} // namespace bezmod
