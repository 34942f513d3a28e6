#include "bezmod/fv.hpp"

#include "bezmod/error.hpp"

#include <sstream>
#include <utility>

namespace bezmod {

namespace {

void check_same_backend(const ConstructibleSet& s1, const ConstructibleSet& s2) {
    if (s1.backend() != s2.backend())
        throw BackendMismatch("constructible sets live over different backends");
}

}  // namespace

ConstructibleSet ConstructibleSet::empty(const Backend& b) {
    return ConstructibleSet(b, CsKind::Empty, RingElem::one(b));
}

ConstructibleSet ConstructibleSet::whole(const Backend& b) {
    return ConstructibleSet(b, CsKind::Whole, RingElem::zero(b));
}

ConstructibleSet ConstructibleSet::closed(const RingElem& e) {
    const Backend& b = e.backend();
    if (b.is_valuation()) {
        // One maximal ideal: e is in it unless e is a unit.
        return e.is_unit() ? empty(b) : whole(b);
    }
    if (e.is_zero()) return whole(b);
    RingElem c = e.canonical();
    if (c.is_unit()) return empty(b);
    return ConstructibleSet(b, CsKind::Closed, std::move(c));
}

ConstructibleSet ConstructibleSet::open(const RingElem& e) {
    const Backend& b = e.backend();
    if (b.is_valuation()) return e.is_unit() ? whole(b) : empty(b);
    if (e.is_zero()) return empty(b);
    RingElem c = e.canonical();
    if (c.is_unit()) return whole(b);
    return ConstructibleSet(b, CsKind::Open, std::move(c));
}

const RingElem& ConstructibleSet::elem() const {
    if (kind_ != CsKind::Closed && kind_ != CsKind::Open)
        throw DomainError("only closed(e) and open(e) sets carry a defining element");
    return e_;
}

bool ConstructibleSet::operator==(const ConstructibleSet& o) const {
    if (b_ != o.b_ || kind_ != o.kind_) return false;
    if (kind_ == CsKind::Empty || kind_ == CsKind::Whole) return true;
    return e_ == o.e_;
}

std::string ConstructibleSet::to_string() const {
    switch (kind_) {
        case CsKind::Empty: return "empty";
        case CsKind::Whole: return "whole";
        case CsKind::Closed: return "closed(" + e_.to_string() + ")";
        case CsKind::Open: return "open(" + e_.to_string() + ")";
    }
    throw Error("internal: unreachable constructible kind");
}

ConstructibleSet cs_intersect(const ConstructibleSet& s1, const ConstructibleSet& s2) {
    check_same_backend(s1, s2);
    if (s1.kind() == CsKind::Empty || s2.kind() == CsKind::Whole) return s1;
    if (s2.kind() == CsKind::Empty || s1.kind() == CsKind::Whole) return s2;
    // Both basic now.
    if (s1.kind() == CsKind::Closed && s2.kind() == CsKind::Closed)
        return ConstructibleSet::closed(gcd(s1.elem(), s2.elem()));
    if (s1.kind() == CsKind::Open && s2.kind() == CsKind::Open)
        return ConstructibleSet::open(s1.elem() * s2.elem());
    // Closed(a) minus V(b): split a = c.d with gcd(c,b) a unit and b in
    // rad(d); the ideals containing a but not b are exactly those
    // containing c.
    const ConstructibleSet& cl = s1.kind() == CsKind::Closed ? s1 : s2;
    const ConstructibleSet& op = s1.kind() == CsKind::Closed ? s2 : s1;
    return ConstructibleSet::closed(good_factorization(cl.elem(), op.elem()).c);
}

ConstructibleSet cs_complement(const ConstructibleSet& s) {
    switch (s.kind()) {
        case CsKind::Empty: return ConstructibleSet::whole(s.backend());
        case CsKind::Whole: return ConstructibleSet::empty(s.backend());
        case CsKind::Closed: return ConstructibleSet(s.backend(), CsKind::Open, s.e_);
        case CsKind::Open: return ConstructibleSet(s.backend(), CsKind::Closed, s.e_);
    }
    throw Error("internal: unreachable constructible kind");
}

ConstructibleSet cs_union(const ConstructibleSet& s1, const ConstructibleSet& s2) {
    return cs_complement(cs_intersect(cs_complement(s1), cs_complement(s2)));
}

bool cs_is_empty(const ConstructibleSet& s) { return s.kind() == CsKind::Empty; }

bool cs_subseteq(const ConstructibleSet& s1, const ConstructibleSet& s2) {
    return cs_is_empty(cs_intersect(s1, cs_complement(s2)));
}

bool cs_contains(const ConstructibleSet& s, const RingElem& p) {
    if (p.backend() != s.backend())
        throw BackendMismatch("membership test crosses backends");
    if (!is_prime_elem(p))
        throw DomainError("membership is tested at maximal ideals (p) with p prime");
    switch (s.kind()) {
        case CsKind::Empty: return false;
        case CsKind::Whole: return true;
        case CsKind::Closed: return divides(p, s.elem());
        case CsKind::Open: return !divides(p, s.elem());
    }
    throw Error("internal: unreachable constructible kind");
}

RingElem split_element(const RingElem& r, const RingElem& s) {
    // r | s in B_M iff the colon (r:s) = r / gcd(r,s) is outside M.
    return colon(r, s).canonical();
}

ReplayOracle::ReplayOracle(const Backend& b, std::vector<bool> script)
    : script_(std::move(script)), guard_(ConstructibleSet::whole(b)) {
    if (b.is_valuation())
        throw CapabilityError(
            "guard splitting needs a global backend; over a valuation backend "
            "run the elimination against the valuation oracle directly");
}

CmpAnswer ReplayOracle::leq_v(const RingElem& r, const RingElem& s) {
    if (s.is_zero()) return CmpAnswer::Yes;
    if (r.is_zero()) return CmpAnswer::No;
    RingElem e = split_element(r, s);
    if (e.is_unit()) return CmpAnswer::Yes;  // r divides s outright
    ConstructibleSet if_yes = cs_intersect(guard_, ConstructibleSet::open(e));
    ConstructibleSet if_no = cs_intersect(guard_, ConstructibleSet::closed(e));
    // Forced answers leave the guard alone and cost no script entry.
    if (cs_is_empty(if_no)) return CmpAnswer::Yes;
    if (cs_is_empty(if_yes)) return CmpAnswer::No;
    if (used_ < script_.size()) {
        bool yes = script_[used_++];
        guard_ = yes ? std::move(if_yes) : std::move(if_no);
        return yes ? CmpAnswer::Yes : CmpAnswer::No;
    }
    throw SplitRequest{r, s};
}

GuardedFormula decompose(const PPFormula& f) {
    const Backend& b = f.backend;
    if (b.is_valuation())
        throw CapabilityError(
            "decomposition over a valuation backend is trivial; run the "
            "elimination directly");
    auto cases = explore_cases(b, [&](ComparisonOracle& cmp) { return eliminate(f, cmp); });
    GuardedFormula out;
    for (auto& [guard, body] : cases) out.pieces.push_back({guard, std::move(body)});
    // The branch bookkeeping should make the guards a partition; check it.
    ConstructibleSet covered = ConstructibleSet::empty(b);
    for (std::size_t i = 0; i < out.pieces.size(); ++i) {
        for (std::size_t j = i + 1; j < out.pieces.size(); ++j)
            if (!cs_is_empty(cs_intersect(out.pieces[i].guard, out.pieces[j].guard)))
                throw Error("internal: decomposition guards overlap");
        covered = cs_union(covered, out.pieces[i].guard);
    }
    if (covered != ConstructibleSet::whole(b))
        throw Error("internal: decomposition guards do not cover the spectrum");
    return out;
}

PPFormula localize_body(const PPFormula& body, const RingElem& p) {
    if (!body.bound.empty())
        throw DomainError("only quantifier-free bodies can be localized");
    if (!is_prime_elem(p))
        throw DomainError("localization happens at a maximal ideal (p) with p prime");
    const Backend& b = body.backend;
    RingElem pc = p.canonical();
    Backend local = b.id() == RingId::Z ? Backend::z_loc(pc.z_num())
                                        : Backend::q_poly_loc(pc.p_num());
    RingElem pl = embed_into_localization(pc, local);
    std::vector<Atom> atoms;
    for (const Atom& a : body.atoms) {
        Term t(local);
        for (const auto& [v, c] : a.term.entries())
            t = t + Term::mono(v, embed_into_localization(c, local));
        if (a.is_eq()) {
            atoms.push_back(Atom::eq(std::move(t)));
            continue;
        }
        // The index contributes only through its value at p; at nonpositive
        // local value the congruence subgroup is the whole module.
        LocalValue e = gamma_localize(*a.index, pc);
        if (e.is_infinite() || e.value() <= 0) continue;
        atoms.push_back(
            Atom::vp(GammaElem::of(pow(pl, static_cast<unsigned long>(e.value()))), std::move(t)));
    }
    return normalize(PPFormula(local, {}, std::move(atoms)));
}

}  // namespace bezmod
