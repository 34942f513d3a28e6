#include "bezmod/formula.hpp"

#include "bezmod/error.hpp"

#include <algorithm>
#include <set>

namespace bezmod {

namespace {

// Sign split for display: c == -1 * magnitude with the magnitude printed
// after a '-' separator.
bool display_negative(const RingElem& c) {
    if (c.backend().is_poly_base()) return !c.p_num().is_zero() && c.p_num().lead() < 0;
    return c.z_num() < 0;
}

std::string poly_factor_string(const QPol& p) {
    if (p.is_constant()) {
        mpq_class q = p.coeff(0);
        if (q.get_den() == 1) return q.get_num().get_str();
        return q.get_num().get_str() + "/" + q.get_den().get_str();
    }
    return "(" + p.to_string() + ")";
}

std::string coeff_string(const RingElem& c) {
    if (!c.backend().is_poly_base()) {
        std::string s = c.z_num().get_str();
        if (c.z_den() != 1) s += "/" + c.z_den().get_str();
        return s;
    }
    std::string s = poly_factor_string(c.p_num());
    const QPol& d = c.p_den();
    if (!(d.is_constant() && d.coeff(0) == 1)) s += "/" + poly_factor_string(d);
    return s;
}

} // namespace

Term Term::mono(const Var& v, const RingElem& c) {
    Term t(c.backend());
    if (!c.is_zero()) t.c_.emplace(v, c);
    return t;
}

RingElem Term::coeff(const Var& v) const {
    auto it = c_.find(v);
    return it == c_.end() ? RingElem::zero(b_) : it->second;
}

Term Term::without(const Var& v) const {
    Term t = *this;
    t.c_.erase(v);
    return t;
}

Term Term::operator+(const Term& o) const {
    if (b_ != o.b_) throw BackendMismatch("term +: different backends");
    Term t = *this;
    for (const auto& [v, c] : o.c_) {
        auto it = t.c_.find(v);
        if (it == t.c_.end()) {
            t.c_.emplace(v, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) t.c_.erase(it);
        }
    }
    return t;
}

Term Term::operator-(const Term& o) const { return *this + (-o); }

Term Term::operator-() const {
    Term t = *this;
    for (auto& [v, c] : t.c_) c = -c;
    return t;
}

Term Term::scaled(const RingElem& s) const {
    Term t(b_);
    if (s.is_zero()) return t;
    for (const auto& [v, c] : c_) t.c_.emplace(v, c * s);
    return t;
}

std::string Term::to_string() const {
    if (c_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [v, c] : c_) {
        bool neg = display_negative(c);
        RingElem mag = neg ? -c : c;
        if (first)
            out += neg ? "- " : "";
        else
            out += neg ? " - " : " + ";
        first = false;
        out += mag.is_one() ? v : v + "*" + coeff_string(mag);
    }
    return out;
}

Atom Atom::eq(Term t) { return Atom{std::nullopt, std::move(t)}; }

Atom Atom::vp(GammaElem delta, Term t) {
    if (delta.is_infinite()) throw DomainError("V index must be finite");
    if (delta.backend() != t.backend()) throw BackendMismatch("V atom: index vs term backend");
    return Atom{std::move(delta), std::move(t)};
}

bool Atom::operator==(const Atom& o) const {
    if (index.has_value() != o.index.has_value()) return false;
    if (index && *index != *o.index) return false;
    return term == o.term;
}

std::string Atom::to_string() const {
    if (is_eq()) return term.to_string() + " = 0";
    return "V[" + index->to_string() + "](" + term.to_string() + ")";
}

PPFormula::PPFormula(Backend b, std::vector<Var> bv, std::vector<Atom> as)
    : backend(std::move(b)), bound(std::move(bv)), atoms(std::move(as)) {
    std::set<Var> seen;
    for (const auto& v : bound)
        if (!seen.insert(v).second)
            throw DomainError("bound variable '" + v + "' repeated");
    for (const auto& a : atoms)
        if (a.term.backend() != backend)
            throw BackendMismatch("atom backend differs from formula backend");
}

std::vector<Var> PPFormula::free_vars() const {
    std::set<Var> b(bound.begin(), bound.end()), out;
    for (const auto& a : atoms)
        for (const auto& [v, c] : a.term.entries())
            if (!b.count(v)) out.insert(v);
    return {out.begin(), out.end()};
}

bool PPFormula::operator==(const PPFormula& o) const {
    return backend == o.backend && bound == o.bound && atoms == o.atoms;
}

std::string PPFormula::to_string() const {
    std::string out;
    if (!bound.empty()) {
        out += "E";
        for (const auto& v : bound) out += " " + v;
        out += " . ";
    }
    if (atoms.empty()) return out + "0 = 0";
    bool first = true;
    for (const auto& a : atoms) {
        if (!first) out += " & ";
        first = false;
        out += a.to_string();
    }
    return out;
}

PPFormula normalize(const PPFormula& f) {
    GammaElem v1 = GammaElem::one(f.backend);
    std::vector<Atom> atoms;
    for (const auto& a : f.atoms) {
        if (a.term.is_zero()) continue;
        if (!a.is_eq() && gamma_leq(*a.index, v1)) continue;
        // scale so the leading coefficient is its canonical associate;
        // the factor is a unit, so equations and V atoms are unchanged
        const RingElem& c = a.term.entries().begin()->second;
        Term t = a.term.scaled(frac_div(c.canonical(), c));
        Atom na = a.is_eq() ? Atom::eq(std::move(t)) : Atom::vp(*a.index, std::move(t));
        if (std::find(atoms.begin(), atoms.end(), na) == atoms.end())
            atoms.push_back(std::move(na));
    }
    std::vector<Var> bound;
    for (const auto& v : f.bound) {
        bool used = false;
        for (const auto& a : atoms) used = used || a.term.mentions(v);
        if (used) bound.push_back(v);
    }
    return PPFormula(f.backend, std::move(bound), std::move(atoms));
}

PPFormula SubgroupForm::to_pp(const Var& x) const {
    std::vector<Atom> atoms;
    const Backend& b = a.backend();
    if (!a.is_zero()) atoms.push_back(Atom::eq(Term::mono(x, a)));
    if (!delta.is_one()) atoms.push_back(Atom::vp(delta, Term::mono(x, RingElem::one(b))));
    return PPFormula(b, {}, std::move(atoms));
}

std::string SubgroupForm::to_string() const {
    return "(a = " + a.to_string() + ", delta = " + delta.to_string() + ")";
}

namespace {

Atom rename_atom(const Atom& a, const std::map<Var, Var>& m) {
    Term t(a.term.backend());
    for (const auto& [v, c] : a.term.entries()) {
        auto it = m.find(v);
        t = t + Term::mono(it == m.end() ? v : it->second, c);
    }
    return a.is_eq() ? Atom::eq(std::move(t)) : Atom::vp(*a.index, std::move(t));
}

bool extend_match(const PPFormula& outer, const PPFormula& inner, std::size_t i,
                  std::map<Var, Var>& m, std::set<Var>& used) {
    if (i == inner.bound.size()) {
        for (const auto& a : inner.atoms) {
            Atom r = rename_atom(a, m);
            if (std::find(outer.atoms.begin(), outer.atoms.end(), r) == outer.atoms.end())
                return false;
        }
        return true;
    }
    for (const auto& w : outer.bound) {
        if (used.count(w)) continue;
        m[inner.bound[i]] = w;
        used.insert(w);
        if (extend_match(outer, inner, i + 1, m, used)) return true;
        m.erase(inner.bound[i]);
        used.erase(w);
    }
    return false;
}

} // namespace

bool pp_contains_upto_renaming(const PPFormula& outer, const PPFormula& inner) {
    if (inner.bound.size() > outer.bound.size() && !inner.atoms.empty()) {
        // inner may still match if its extra bound variables are unused,
        // but normalized formulas have no unused bound variables
        return false;
    }
    std::map<Var, Var> m;
    std::set<Var> used;
    return extend_match(outer, inner, 0, m, used);
}

PPFormula embed_pp(const PPFormula& f, const Backend& target) {
    std::vector<Atom> atoms;
    for (const Atom& a : f.atoms) {
        Term t(target);
        for (const auto& [v, c] : a.term.entries())
            t = t + Term::mono(v, embed_into_localization(c, target));
        if (a.is_eq()) {
            atoms.push_back(Atom::eq(std::move(t)));
        } else {
            GammaElem d = GammaElem::ratio(embed_into_localization(a.index->num(), target),
                                           embed_into_localization(a.index->den(), target));
            atoms.push_back(Atom::vp(std::move(d), std::move(t)));
        }
    }
    return normalize(PPFormula(target, f.bound, std::move(atoms)));
}

InvCondition::InvCondition(PPFormula phi, PPFormula psi, InvRel rel)
    : phi_(normalize(phi)), psi_(normalize(psi)), rel_(rel), var_("") {
    if (phi_.backend != psi_.backend)
        throw BackendMismatch("Inv: phi and psi over different backends");
    std::set<Var> fv;
    for (const auto& v : phi_.free_vars()) fv.insert(v);
    for (const auto& v : psi_.free_vars()) fv.insert(v);
    if (fv.size() != 1)
        throw DomainError("Inv: phi and psi must share exactly one free variable, got " +
                          std::to_string(fv.size()));
    var_ = *fv.begin();
    if (!pp_contains_upto_renaming(psi_, phi_)) {
        // conjoin phi so psi defines a subgroup of phi's
        std::set<Var> taken(psi_.bound.begin(), psi_.bound.end());
        taken.insert(var_);
        std::map<Var, Var> ren;
        std::vector<Var> bound = psi_.bound;
        for (const auto& b : phi_.bound) {
            Var cand = b;
            for (int k = 2; taken.count(cand); ++k) cand = b + std::to_string(k);
            taken.insert(cand);
            ren[b] = cand;
            bound.push_back(cand);
        }
        std::vector<Atom> atoms = psi_.atoms;
        for (const auto& a : phi_.atoms) atoms.push_back(rename_atom(a, ren));
        psi_ = normalize(PPFormula(psi_.backend, std::move(bound), std::move(atoms)));
    }
}

bool InvCondition::operator==(const InvCondition& o) const {
    return rel_ == o.rel_ && phi_ == o.phi_ && psi_ == o.psi_;
}

std::string InvCondition::to_string() const {
    return "Inv(" + phi_.to_string() + " | " + psi_.to_string() + ")" +
           (rel_ == InvRel::Gt1 ? " >1" : " =1");
}

BSentence BSentence::inv(InvCondition c) {
    BSentence s(Kind::Inv);
    s.inv_.push_back(std::move(c));
    return s;
}

BSentence BSentence::pp(PPFormula f) {
    BSentence s(Kind::PP);
    s.pp_.push_back(std::move(f));
    return s;
}

BSentence BSentence::negation(BSentence x) {
    BSentence s(Kind::Not);
    s.kids_.push_back(std::move(x));
    return s;
}

BSentence BSentence::conj(BSentence a, BSentence b) {
    BSentence s(Kind::And);
    s.kids_.push_back(std::move(a));
    s.kids_.push_back(std::move(b));
    return s;
}

BSentence BSentence::disj(BSentence a, BSentence b) {
    BSentence s(Kind::Or);
    s.kids_.push_back(std::move(a));
    s.kids_.push_back(std::move(b));
    return s;
}

const InvCondition& BSentence::inv_leaf() const {
    if (kind_ != Kind::Inv) throw DomainError("not an invariant-condition leaf");
    return inv_.front();
}

const PPFormula& BSentence::pp_leaf() const {
    if (kind_ != Kind::PP) throw DomainError("not a pp leaf");
    return pp_.front();
}

std::string BSentence::to_string() const {
    auto wrap = [](const BSentence& s, bool tight) {
        // tight: parenthesize anything below '!'. Otherwise only what
        // would re-parse wrong under And: Or, and pp leaves, whose own
        // '&' would swallow the next conjunct.
        bool low = s.kind_ == Kind::Or || s.kind_ == Kind::PP;
        bool need = tight ? (s.kind_ == Kind::And || low) : low;
        return need ? "(" + s.to_string() + ")" : s.to_string();
    };
    switch (kind_) {
        case Kind::Inv: return inv_.front().to_string();
        case Kind::PP: return pp_.front().to_string();
        case Kind::Not: return "!" + wrap(kids_[0], true);
        case Kind::And: return wrap(kids_[0], false) + " & " + wrap(kids_[1], false);
        case Kind::Or: return kids_[0].to_string() + " | " + kids_[1].to_string();
    }
    return "";
}

} // namespace bezmod
