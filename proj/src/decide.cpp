#include "bezmod/decide.hpp"

#include "bezmod/error.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <utility>

namespace bezmod {

namespace {

GammaElem placeholder_gamma(const Backend& b) { return GammaElem::one(b); }

}  // namespace

PairForm::PairForm(Backend b, Kind k, RingElem a, RingElem c, GammaElem d1, GammaElem d2)
    : b_(std::move(b)), kind_(k), a_(std::move(a)), c_(std::move(c)), d1_(std::move(d1)),
      d2_(std::move(d2)) {
    if (!b_.is_valuation())
        throw DomainError("pair forms describe subgroup pairs over a valuation backend");
}

PairForm PairForm::trivial(const Backend& b) {
    return PairForm(b, Kind::Trivial, RingElem::zero(b), RingElem::zero(b),
                    placeholder_gamma(b), placeholder_gamma(b));
}

PairForm PairForm::torsion_pair(const RingElem& a, const RingElem& c) {
    const Backend& b = a.backend();
    if (a.is_zero() || c.is_zero())
        throw DomainError("torsion pair needs nonzero annihilator elements");
    if (divides(a, c))
        throw DomainError("torsion pair needs a not dividing c; the pair is trivial otherwise");
    return PairForm(b, Kind::TorsionPair, a, c, placeholder_gamma(b), placeholder_gamma(b));
}

PairForm PairForm::div_torsion(const GammaElem& delta, const RingElem& c) {
    const Backend& b = c.backend();
    if (c.is_zero()) throw DomainError("div/torsion pair needs a nonzero annihilator element");
    if (delta.is_infinite()) throw DomainError("pair index is finite");
    return PairForm(b, Kind::DivTorsion, RingElem::zero(b), c, delta, placeholder_gamma(b));
}

PairForm PairForm::div_div(const GammaElem& delta1, const GammaElem& delta2) {
    const Backend& b = delta1.backend();
    if (delta1.is_infinite() || delta2.is_infinite()) throw DomainError("pair index is finite");
    if (gamma_leq(delta2, delta1))
        throw DomainError("div/div pair needs delta1 < delta2 strictly");
    return PairForm(b, Kind::DivDiv, RingElem::zero(b), RingElem::zero(b), delta1, delta2);
}

const RingElem& PairForm::a() const {
    if (kind_ != Kind::TorsionPair) throw DomainError("only torsion pairs carry a");
    return a_;
}

const RingElem& PairForm::c() const {
    if (kind_ != Kind::TorsionPair && kind_ != Kind::DivTorsion)
        throw DomainError("only torsion-sided pairs carry c");
    return c_;
}

const GammaElem& PairForm::delta1() const {
    if (kind_ != Kind::DivTorsion && kind_ != Kind::DivDiv)
        throw DomainError("only divisibility-sided pairs carry delta1");
    return d1_;
}

const GammaElem& PairForm::delta2() const {
    if (kind_ != Kind::DivDiv) throw DomainError("only div/div pairs carry delta2");
    return d2_;
}

bool PairForm::operator==(const PairForm& o) const {
    if (b_ != o.b_ || kind_ != o.kind_) return false;
    switch (kind_) {
        case Kind::Trivial: return true;
        case Kind::TorsionPair: return a_ == o.a_ && c_ == o.c_;
        case Kind::DivTorsion: return d1_ == o.d1_ && c_ == o.c_;
        case Kind::DivDiv: return d1_ == o.d1_ && d2_ == o.d2_;
    }
    throw Error("internal: unreachable pair kind");
}

std::string PairForm::to_string() const {
    switch (kind_) {
        case Kind::Trivial: return "Trivial";
        case Kind::TorsionPair:
            return "TorsionPair(" + a_.to_string() + ", " + c_.to_string() + ")";
        case Kind::DivTorsion:
            return "DivTorsion(" + d1_.to_string() + ", " + c_.to_string() + ")";
        case Kind::DivDiv:
            return "DivDiv(" + d1_.to_string() + ", " + d2_.to_string() + ")";
    }
    throw Error("internal: unreachable pair kind");
}

namespace {

// Greatest lower bound of two subgroup forms: intersect torsion parts
// (the valuation-smaller annihilator wins) and take the larger index.
SubgroupForm meet_sub(const SubgroupForm& s1, const SubgroupForm& s2, ComparisonOracle& cmp) {
    RingElem a = s1.a;
    if (a.is_zero())
        a = s2.a;
    else if (!s2.a.is_zero() && cmp.yes_v(s2.a, s1.a))
        a = s2.a;
    GammaElem d = cmp.leq_gamma(s1.delta, s2.delta) ? s2.delta : s1.delta;
    return SubgroupForm{std::move(a), std::move(d)};
}

// Reduce (phi, psi) with psi already below phi. A nonzero annihilator
// absorbs the congruence on its side: under the divisibility axioms
// every torsion element lies in every V_delta.
PairForm pair_form_from(const SubgroupForm& phi, const SubgroupForm& psi, ComparisonOracle& cmp) {
    if (!phi.a.is_zero()) {
        if (psi.a.is_zero() || !cmp.yes_v(psi.a, phi.a))
            throw Error("internal: psi side of a pair is not below phi");
        if (cmp.yes_v(phi.a, psi.a)) return PairForm::trivial(phi.a.backend());
        return PairForm::torsion_pair(phi.a, psi.a);
    }
    if (!psi.a.is_zero()) return PairForm::div_torsion(phi.delta, psi.a);
    if (cmp.leq_gamma(psi.delta, phi.delta)) return PairForm::trivial(phi.delta.backend());
    return PairForm::div_div(phi.delta, psi.delta);
}

// The subgroup pair a certificate records for a reduced form; the psi
// side is the absorbed shape the closed-form index arithmetic uses.
SubgroupPair certificate_pair(const PairForm& pf) {
    const Backend& b = pf.backend();
    RingElem zero = RingElem::zero(b);
    GammaElem one = GammaElem::one(b);
    switch (pf.kind()) {
        case PairForm::Kind::Trivial:
            return {SubgroupForm{zero, one}, SubgroupForm{zero, one}};
        case PairForm::Kind::TorsionPair:
            return {SubgroupForm{pf.a(), one}, SubgroupForm{pf.c(), one}};
        case PairForm::Kind::DivTorsion:
            return {SubgroupForm{zero, pf.delta1()}, SubgroupForm{pf.c(), one}};
        case PairForm::Kind::DivDiv:
            return {SubgroupForm{zero, pf.delta1()}, SubgroupForm{zero, pf.delta2()}};
    }
    throw Error("internal: unreachable pair kind");
}

long local_val(const RingElem& a, const RingElem& prime) {
    LocalValue v = valuation(prime, a);
    if (v.is_infinite()) throw Error("internal: valuation of a nonzero element is finite");
    return v.value();
}

long local_exp(const GammaElem& delta, const RingElem& prime) {
    if (delta.is_one()) return 0;
    LocalValue v = gamma_localize(delta, prime);
    if (v.is_infinite()) throw Error("internal: finite index localizes finitely");
    return v.value();
}

long clamp_exp(long e, long k) { return std::max(0L, std::min(e, k)); }

// Index arithmetic on the witness catalog. In B/p^k the subgroup cut out
// by (a, delta) is p^max(min(e,k), clamp(k - v(a), 0, k)) . M; the free
// rank-one module and the fraction field have only the three subgroups
// 0, p^e.M, and M to distinguish.
bool opens_in(const PairForm& pf, const ModuleSpec& m) {
    if (pf.kind() == PairForm::Kind::Trivial) return false;
    const RingElem prime = pf.backend().prime();
    if (m.kind == ModuleSpec::Kind::Free || m.kind == ModuleSpec::Kind::FractionField) {
        switch (pf.kind()) {
            case PairForm::Kind::TorsionPair: return false;  // both sides vanish
            case PairForm::Kind::DivTorsion: return true;    // p^e.M or M over the zero group
            case PairForm::Kind::DivDiv:
                // distinct powers of p stay distinct in the free module;
                // a divisible module collapses them all
                return m.kind == ModuleSpec::Kind::Free;
            default: break;
        }
        throw Error("internal: unreachable pair kind");
    }
    long k = local_val(m.c, prime);
    long ephi = 0, epsi = 0;
    switch (pf.kind()) {
        case PairForm::Kind::TorsionPair:
            ephi = clamp_exp(k - local_val(pf.a(), prime), k);
            epsi = clamp_exp(k - local_val(pf.c(), prime), k);
            break;
        case PairForm::Kind::DivTorsion:
            ephi = clamp_exp(local_exp(pf.delta1(), prime), k);
            epsi = clamp_exp(k - local_val(pf.c(), prime), k);
            break;
        case PairForm::Kind::DivDiv:
            ephi = clamp_exp(local_exp(pf.delta1(), prime), k);
            epsi = clamp_exp(local_exp(pf.delta2(), prime), k);
            break;
        default: throw Error("internal: unreachable pair kind");
    }
    return ephi < epsi;
}

// Exponent beyond which the pair's index in B/p^k no longer depends on
// k. The cyclic leg of the catalog searches up to this bound plus one,
// which makes the search exhaustive over cyclic witnesses.
long stabilization_bound(const PairForm& pf) {
    const RingElem prime = pf.backend().prime();
    switch (pf.kind()) {
        case PairForm::Kind::Trivial: return 0;
        case PairForm::Kind::TorsionPair:
            return std::max(local_val(pf.a(), prime), local_val(pf.c(), prime));
        case PairForm::Kind::DivTorsion:
            return local_exp(pf.delta1(), prime) + local_val(pf.c(), prime);
        case PairForm::Kind::DivDiv:
            return std::max(local_exp(pf.delta1(), prime), local_exp(pf.delta2(), prime));
    }
    throw Error("internal: unreachable pair kind");
}

std::optional<ModuleSpec> find_conjunct_witness(const PairForm& target,
                                                const std::vector<PairForm>& constraints) {
    const Backend& b = target.backend();
    long n = stabilization_bound(target);
    for (const PairForm& pf : constraints) n = std::max(n, stabilization_bound(pf));
    std::vector<ModuleSpec> catalog;
    catalog.push_back(ModuleSpec::free_module(b, 1));
    catalog.push_back(ModuleSpec::fraction_field(b));
    for (long k = 1; k <= n + 1; ++k)
        catalog.push_back(ModuleSpec::cyclic(pow(b.prime(), static_cast<unsigned long>(k))));
    for (const ModuleSpec& m : catalog) {
        if (!opens_in(target, m)) continue;
        bool closed = true;
        for (const PairForm& pf : constraints) closed = closed && !opens_in(pf, m);
        if (closed) return m;
    }
    return std::nullopt;
}

InvRel flip(InvRel r) { return r == InvRel::Gt1 ? InvRel::Eq1 : InvRel::Gt1; }

using Disjunct = std::vector<InvCondition>;
using Dnf = std::vector<Disjunct>;  // empty = false, {{}} = true

bool complementary(const InvCondition& a, const InvCondition& b) {
    return a.rel() != b.rel() && a.phi() == b.phi() && a.psi() == b.psi();
}

std::optional<Disjunct> merge_disjuncts(const Disjunct& d1, const Disjunct& d2) {
    Disjunct out = d1;
    for (const InvCondition& lit : d2) {
        bool dup = false;
        for (const InvCondition& have : out) {
            if (complementary(have, lit)) return std::nullopt;
            dup = dup || have == lit;
        }
        if (!dup) out.push_back(lit);
    }
    return out;
}

std::size_t count_inv_leaves(const BSentence& s) {
    if (s.kind() == BSentence::Kind::Inv) return 1;
    std::size_t n = 0;
    for (const BSentence& k : s.kids()) n += count_inv_leaves(k);
    return n;
}

const Backend& sentence_backend(const BSentence& s) {
    switch (s.kind()) {
        case BSentence::Kind::Inv: return s.inv_leaf().backend();
        case BSentence::Kind::PP: return s.pp_leaf().backend;
        default: return sentence_backend(s.kids().front());
    }
}

Dnf dnf_of(const BSentence& s, bool neg, const DecideLimits& limits) {
    switch (s.kind()) {
        case BSentence::Kind::Inv: {
            const InvCondition& c = s.inv_leaf();
            if (!neg) return {{c}};
            return {{InvCondition(c.phi(), c.psi(), flip(c.rel()))}};
        }
        case BSentence::Kind::PP: {
            // A closed pp sentence holds in every module: send all
            // variables to zero. As a literal it is plain truth.
            const PPFormula& f = s.pp_leaf();
            if (!f.is_closed())
                throw DomainError("pp components of a sentence must be closed; free: " +
                                  f.to_string());
            return neg ? Dnf{} : Dnf{{}};
        }
        case BSentence::Kind::Not: return dnf_of(s.kids().front(), !neg, limits);
        case BSentence::Kind::And:
        case BSentence::Kind::Or: {
            bool conjunction = (s.kind() == BSentence::Kind::And) != neg;
            Dnf acc = dnf_of(s.kids().front(), neg, limits);
            for (std::size_t i = 1; i < s.kids().size(); ++i) {
                Dnf next = dnf_of(s.kids()[i], neg, limits);
                if (conjunction) {
                    Dnf prod;
                    for (const Disjunct& d1 : acc)
                        for (const Disjunct& d2 : next)
                            if (auto m = merge_disjuncts(d1, d2)) prod.push_back(std::move(*m));
                    acc = std::move(prod);
                } else {
                    acc.insert(acc.end(), next.begin(), next.end());
                }
                if (acc.size() > limits.disjunct_cap)
                    throw LimitError("DNF conversion exceeded " +
                                     std::to_string(limits.disjunct_cap) + " disjuncts");
            }
            return acc;
        }
    }
    throw Error("internal: unreachable sentence kind");
}

SubgroupForm localize_sub(const SubgroupForm& s, const RingElem& pc, const Backend& local) {
    RingElem a = s.a.is_zero() ? RingElem::zero(local) : embed_into_localization(s.a, local);
    if (s.delta.is_one()) return SubgroupForm{std::move(a), GammaElem::one(local)};
    long e = local_exp(s.delta, pc);
    if (e <= 0) return SubgroupForm{std::move(a), GammaElem::one(local)};
    GammaElem d = GammaElem::of(
        pow(embed_into_localization(pc, local), static_cast<unsigned long>(e)));
    return SubgroupForm{std::move(a), std::move(d)};
}

// Finitely many localizations can distinguish the pairs on a piece: the
// primes dividing a mentioned element, plus one generic prime where
// every mentioned element is a unit.
std::vector<RingElem> candidate_primes(const ConstructibleSet& guard,
                                       const std::vector<SubgroupPair>& pairs) {
    const Backend& b = guard.backend();
    std::vector<RingElem> mentioned;
    auto note = [&](const RingElem& x) {
        if (!x.is_zero() && !x.is_unit()) mentioned.push_back(x.canonical());
    };
    for (const SubgroupPair& sp : pairs)
        for (const SubgroupForm* s : {&sp.phi, &sp.psi}) {
            note(s->a);
            note(s->delta.num());
            note(s->delta.den());
        }
    std::vector<RingElem> out;
    auto push_unique = [&](const RingElem& q) {
        for (const RingElem& have : out)
            if (have == q) return;
        out.push_back(q);
    };
    if (guard.kind() == CsKind::Closed) {
        // every maximal ideal of the piece is generated by a factor
        for (const auto& [q, e] : factorize(guard.elem())) push_unique(q);
        return out;
    }
    for (const RingElem& m : mentioned)
        for (const auto& [q, e] : factorize(m))
            if (cs_contains(guard, q)) push_unique(q);
    std::vector<RingElem> avoid = mentioned;
    if (guard.kind() == CsKind::Open) avoid.push_back(guard.elem());
    out.push_back(fresh_prime(b, avoid));
    return out;
}

std::string witness_summary(const std::vector<WitnessReport>& ws) {
    std::string s = "counter-model: direct sum of";
    for (const WitnessReport& w : ws)
        s += " [" + w.module.to_string() + " at " + w.piece.to_string() + "]";
    return s;
}

}  // namespace

PairForm to_pair_form(const PPFormula& phi, const PPFormula& psi, ComparisonOracle& cmp) {
    if (phi.backend != psi.backend)
        throw BackendMismatch("pair sides live over different backends");
    if (!phi.backend.is_valuation())
        throw DomainError("pair reduction runs over a valuation backend");
    std::set<Var> fv;
    for (const Var& v : phi.free_vars()) fv.insert(v);
    for (const Var& v : psi.free_vars()) fv.insert(v);
    if (fv.size() != 1)
        throw DomainError("a pair shares exactly one free variable, got " +
                          std::to_string(fv.size()));
    SubgroupForm nphi = normal_form_1var(phi, cmp);
    SubgroupForm npsi = meet_sub(normal_form_1var(psi, cmp), nphi, cmp);
    return pair_form_from(nphi, npsi, cmp);
}

bool satisfiable_conjunct(const PairForm& target, const std::vector<PairForm>& constraints,
                          const Backend& b) {
    if (target.backend() != b)
        throw BackendMismatch("target pair does not live over the given backend");
    for (const PairForm& pf : constraints)
        if (pf.backend() != b) throw BackendMismatch("constraint pair backend mismatch");
    if (!b.residue_fields_infinite())
        throw CapabilityError(
            "satisfiability search over " + b.name() +
            " is refused: the index dichotomy requires that the quotient B/M is infinite "
            "for every maximal ideal M");
    return find_conjunct_witness(target, constraints).has_value();
}

Decision decide(const DecisionProblem& p, const DecideLimits& limits) {
    const Backend& b = p.backend;
    if (!b.residue_fields_infinite())
        throw CapabilityError(
            "cannot decide over " + b.name() +
            ": the index dichotomy requires that the quotient B/M is infinite for every "
            "maximal ideal M");
    if (sentence_backend(p.sentence) != b)
        throw BackendMismatch("sentence backend differs from the problem backend");
    std::size_t nlits = count_inv_leaves(p.sentence);
    if (nlits > limits.literal_cap)
        throw LimitError("sentence has " + std::to_string(nlits) +
                         " invariant literals; the DNF cap is " +
                         std::to_string(limits.literal_cap));

    Decision dec;
    Dnf negated = dnf_of(p.sentence, true, limits);
    if (negated.empty()) {
        dec.verdict = Verdict::Valid;
        dec.trace.push_back("the negation is propositionally contradictory");
        dec.summary = "valid: propositional tautology";
        return dec;
    }

    for (std::size_t di = 0; di < negated.size(); ++di) {
        const Disjunct& disjunct = negated[di];
        std::vector<std::size_t> targets, constraints;
        for (std::size_t i = 0; i < disjunct.size(); ++i)
            (disjunct[i].rel() == InvRel::Gt1 ? targets : constraints).push_back(i);
        if (targets.empty()) {
            // Nothing to open: the zero module satisfies every =1 literal.
            dec.verdict = Verdict::Invalid;
            dec.trace.push_back("disjunct " + std::to_string(di + 1) +
                                " of the negation has only index-one literals");
            dec.summary = "counter-model: the zero module keeps every invariant pair at index one";
            return dec;
        }

        std::vector<WitnessReport> found;
        bool all_found = true;

        if (b.is_valuation()) {
            ValuationOracle cmp(b);
            std::vector<PairForm> forms;
            std::vector<SubgroupPair> raw;
            for (const InvCondition& lit : disjunct) {
                SubgroupForm nphi = normal_form_1var(lit.phi(), cmp);
                SubgroupForm npsi = meet_sub(normal_form_1var(lit.psi(), cmp), nphi, cmp);
                raw.push_back({nphi, npsi});
                forms.push_back(pair_form_from(nphi, npsi, cmp));
            }
            std::vector<PairForm> cpf;
            for (std::size_t ci : constraints) cpf.push_back(forms[ci]);
            for (std::size_t ti : targets) {
                if (forms[ti].kind() == PairForm::Kind::Trivial) {
                    dec.trace.push_back("disjunct " + std::to_string(di + 1) + " target " +
                                        disjunct[ti].to_string() + " is trivial");
                    all_found = false;
                    break;
                }
                auto m = find_conjunct_witness(forms[ti], cpf);
                if (!m) {
                    dec.trace.push_back("disjunct " + std::to_string(di + 1) + " target " +
                                        forms[ti].to_string() +
                                        ": witness catalog exhausted");
                    all_found = false;
                    break;
                }
                std::vector<SubgroupPair> cpairs;
                for (const PairForm& pf : cpf) cpairs.push_back(certificate_pair(pf));
                found.push_back(WitnessReport{di, ti, ConstructibleSet::whole(b), b.prime(),
                                              *m, certificate_pair(forms[ti]),
                                              std::move(cpairs)});
            }
        } else {
            auto pieces = explore_cases(b, [&](ComparisonOracle& cmp) {
                std::vector<SubgroupPair> v;
                for (const InvCondition& lit : disjunct) {
                    SubgroupForm nphi = normal_form_1var(lit.phi(), cmp);
                    v.push_back({nphi, normal_form_1var(lit.psi(), cmp)});
                }
                return v;
            });
            for (std::size_t ti : targets) {
                bool got = false;
                for (const auto& [guard, pairs] : pieces) {
                    for (const RingElem& q : candidate_primes(guard, pairs)) {
                        RingElem pc = q.canonical();
                        Backend local = b.id() == RingId::Z ? Backend::z_loc(pc.z_num())
                                                            : Backend::q_poly_loc(pc.p_num());
                        ValuationOracle vcmp(local);
                        auto reduce = [&](const SubgroupPair& sp) {
                            SubgroupForm lphi = localize_sub(sp.phi, pc, local);
                            SubgroupForm lpsi =
                                meet_sub(localize_sub(sp.psi, pc, local), lphi, vcmp);
                            return SubgroupPair{std::move(lphi), std::move(lpsi)};
                        };
                        SubgroupPair tpair = reduce(pairs[ti]);
                        PairForm tpf = pair_form_from(tpair.phi, tpair.psi, vcmp);
                        if (tpf.kind() == PairForm::Kind::Trivial) continue;
                        std::vector<PairForm> cpf;
                        for (std::size_t ci : constraints) {
                            SubgroupPair cp = reduce(pairs[ci]);
                            cpf.push_back(pair_form_from(cp.phi, cp.psi, vcmp));
                        }
                        if (auto m = find_conjunct_witness(tpf, cpf)) {
                            std::vector<SubgroupPair> cpairs;
                            for (const PairForm& pf : cpf)
                                cpairs.push_back(certificate_pair(pf));
                            found.push_back(WitnessReport{di, ti, guard, pc, *m,
                                                          certificate_pair(tpf),
                                                          std::move(cpairs)});
                            got = true;
                            break;
                        }
                    }
                    if (got) break;
                }
                if (!got) {
                    dec.trace.push_back("disjunct " + std::to_string(di + 1) + " target " +
                                        std::to_string(ti + 1) +
                                        ": no piece opens it within the witness catalog");
                    all_found = false;
                    break;
                }
            }
        }

        if (all_found) {
            dec.verdict = Verdict::Invalid;
            dec.witnesses = std::move(found);
            dec.summary = witness_summary(dec.witnesses);
            return dec;
        }
    }

    dec.verdict = Verdict::Valid;
    dec.summary = "valid: no counter-model in the witness catalog";
    return dec;
}

}  // namespace bezmod
