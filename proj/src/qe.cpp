#include "bezmod/qe.hpp"

#include "bezmod/error.hpp"

namespace bezmod {

bool ComparisonOracle::leq_gamma(const GammaElem& x, const GammaElem& y) {
    if (y.is_infinite()) return true;
    if (x.is_infinite()) return false;
    return yes_v(x.num() * y.den(), y.num() * x.den());
}

ValuationOracle::ValuationOracle(Backend b) : b_(std::move(b)) {
    if (!b_.is_valuation())
        throw CapabilityError("ValuationOracle needs a valuation backend, got " + b_.name());
}

CmpAnswer ValuationOracle::leq_v(const RingElem& r, const RingElem& s) {
    return divides(r, s) ? CmpAnswer::Yes : CmpAnswer::No;
}

namespace {

// x-atom in solved form x*r = t resp. x*r == t (mod V_delta)
struct XAtom {
    RingElem r;
    Term t;
    std::optional<GammaElem> delta;
};

std::vector<Atom> eliminate_var(const Var& x, const std::vector<Atom>& atoms,
                                ComparisonOracle& cmp) {
    std::vector<Atom> out;
    std::vector<XAtom> eqs, congs;
    for (const auto& a : atoms) {
        if (!a.term.mentions(x)) {
            out.push_back(a);
            continue;
        }
        XAtom xa{a.term.coeff(x), -(a.term.without(x)), a.index};
        (a.is_eq() ? eqs : congs).push_back(std::move(xa));
    }
    if (eqs.empty() && congs.empty()) return out;

    if (eqs.empty()) {
        // congruence-only system: x*b == t (mod V_delta) is x-free when
        // delta <= v(b); otherwise promote the congruence with maximal
        // delta/v(b) to an equation and rerun
        std::vector<XAtom> kept;
        for (const auto& c : congs) {
            if (cmp.leq_gamma(*c.delta, GammaElem::of(c.r)))
                out.push_back(Atom::vp(*c.delta, c.t));
            else
                kept.push_back(c);
        }
        if (kept.empty()) return out;
        std::size_t best = 0;
        GammaElem best_ratio = *kept[0].delta / GammaElem::of(kept[0].r);
        for (std::size_t i = 1; i < kept.size(); ++i) {
            GammaElem ratio = *kept[i].delta / GammaElem::of(kept[i].r);
            if (!cmp.leq_gamma(ratio, best_ratio)) {
                best = i;
                best_ratio = ratio;
            }
        }
        std::vector<Atom> again = out;
        again.push_back(Atom::eq(Term::mono(x, kept[best].r) - kept[best].t));
        for (std::size_t i = 0; i < kept.size(); ++i)
            if (i != best)
                again.push_back(Atom::vp(*kept[i].delta, Term::mono(x, kept[i].r) - kept[i].t));
        return eliminate_var(x, again, cmp);
    }

    // keep an equation with v-minimal coefficient; first wins ties
    std::size_t e0 = 0;
    for (std::size_t i = 1; i < eqs.size(); ++i)
        if (!cmp.yes_v(eqs[e0].r, eqs[i].r)) e0 = i;
    const RingElem& r0 = eqs[e0].r;
    const Term& t0 = eqs[e0].t;

    // E x (x*r0 = t0 & ...) contributes t0 in r0*M
    out.push_back(Atom::vp(GammaElem::of(r0), t0));

    // exact quotients by the gcd: both sides of each cross-multiplied
    // rewrite are scaled by the same factors, so no unit mismatch between
    // the two sides can arise
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        if (i == e0) continue;
        RingElem g = gcd(r0, eqs[i].r);
        RingElem q0 = div_exact(r0, g), qi = div_exact(eqs[i].r, g);
        out.push_back(Atom::eq(t0.scaled(qi) - eqs[i].t.scaled(q0)));
    }
    for (const auto& c : congs) {
        RingElem g = gcd(r0, c.r);
        RingElem q0 = div_exact(r0, g), qi = div_exact(c.r, g);
        if (cmp.yes_v(r0, c.r))
            out.push_back(Atom::vp(*c.delta, t0.scaled(qi) - c.t.scaled(q0)));
        else
            out.push_back(
                Atom::vp(*c.delta * GammaElem::of(q0), c.t.scaled(q0) - t0.scaled(qi)));
    }
    return out;
}

} // namespace

PPFormula eliminate(const PPFormula& f, ComparisonOracle& cmp) {
    PPFormula g = normalize(f);
    std::vector<Atom> atoms = g.atoms;
    for (auto it = g.bound.rbegin(); it != g.bound.rend(); ++it)
        atoms = eliminate_var(*it, atoms, cmp);
    return normalize(PPFormula(g.backend, {}, std::move(atoms)));
}

NormalForm1 normal_form_1var(const PPFormula& f, ComparisonOracle& cmp) {
    PPFormula g = eliminate(f, cmp);
    std::vector<Var> fv = g.free_vars();
    if (fv.size() > 1)
        throw DomainError("normal_form_1var: " + std::to_string(fv.size()) + " free variables");
    const Backend& b = g.backend;
    RingElem a = RingElem::zero(b);
    GammaElem delta = GammaElem::one(b);
    for (const auto& atom : g.atoms) {
        if (atom.term.entries().size() != 1)
            throw DomainError("normal_form_1var: atom mixes variables: " + atom.to_string());
        const RingElem& c = atom.term.entries().begin()->second;
        if (atom.is_eq()) {
            a = gcd(a, c);
        } else {
            GammaElem vb = GammaElem::of(c);
            if (cmp.leq_gamma(*atom.index, vb)) continue;
            GammaElem ratio = *atom.index / vb;
            if (!cmp.leq_gamma(ratio, delta)) delta = ratio;
        }
    }
    return NormalForm1{a.canonical(), delta};
}

} // namespace bezmod
