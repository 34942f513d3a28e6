#pragma once

#include "bezmod/formula.hpp"
#include "bezmod/fv.hpp"
#include "bezmod/oracle.hpp"
#include "bezmod/qe.hpp"
#include "bezmod/ring.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace bezmod {

// A sentence to decide relative to the theory of divisible lattice-valued
// modules over the backend. Only backends with infinite residue fields
// are in scope: the >1/=1 dichotomy for invariant pairs needs the index
// to jump straight from one to infinite.
struct DecisionProblem {
    BSentence sentence;
    Backend backend;
};

struct DecideLimits {
    std::size_t literal_cap = 32;     // Inv leaves admitted into DNF conversion
    std::size_t disjunct_cap = 4096;  // disjuncts tolerated during conversion
};

enum class Verdict { Valid, Invalid };

// Shape of an invariant pair [phi/psi] after normal-form reduction over a
// valuation ring. Cases are mutually exclusive and carry their side
// conditions; Trivial means the index is one in every module.
class PairForm {
public:
    enum class Kind { Trivial, TorsionPair, DivTorsion, DivDiv };

    static PairForm trivial(const Backend& b);
    // [x.a = 0 / x.c = 0] with a not dividing c
    static PairForm torsion_pair(const RingElem& a, const RingElem& c);
    // [V_delta(x) / x.c = 0]
    static PairForm div_torsion(const GammaElem& delta, const RingElem& c);
    // [V_delta1(x) / V_delta2(x)] with delta1 < delta2
    static PairForm div_div(const GammaElem& delta1, const GammaElem& delta2);

    Kind kind() const { return kind_; }
    const Backend& backend() const { return b_; }
    const RingElem& a() const;       // TorsionPair
    const RingElem& c() const;       // TorsionPair, DivTorsion
    const GammaElem& delta1() const; // DivTorsion (the phi index), DivDiv
    const GammaElem& delta2() const; // DivDiv
    bool operator==(const PairForm& o) const;
    std::string to_string() const;

private:
    PairForm(Backend b, Kind k, RingElem a, RingElem c, GammaElem d1, GammaElem d2);

    Backend b_;
    Kind kind_;
    RingElem a_, c_;
    GammaElem d1_, d2_;
};

// Reduce the pair [phi/psi] to one of the four shapes. Both formulas are
// brought to the one-variable normal form first; a torsion constraint
// absorbs any congruence on the same side, and pairs whose phi-side is
// contained in the psi-side collapse to Trivial.
PairForm to_pair_form(const PPFormula& phi, const PPFormula& psi, ComparisonOracle& cmp);

// The two sides of one literal in one-variable normal form.
struct SubgroupPair {
    SubgroupForm phi, psi;
};

// Everything needed to check one satisfiability witness after the fact:
// which disjunct and target it serves, where on the spectrum it lives,
// and the localized pair data the module was tested against.
struct WitnessReport {
    std::size_t disjunct = 0;
    std::size_t target = 0;
    ConstructibleSet piece;
    RingElem at;  // prime of the localization the module lives over
    ModuleSpec module;
    SubgroupPair target_pair;
    std::vector<SubgroupPair> constraint_pairs;
};

struct Decision {
    Verdict verdict = Verdict::Valid;
    // One report per target of the satisfied disjunct of the negation;
    // their direct sum is the counter-model. Empty when the counter-model
    // is the zero module.
    std::vector<WitnessReport> witnesses;
    std::vector<std::string> trace;
    std::string summary;
};

// True iff some model opens the target pair while keeping every
// constraint pair at index one. Search runs over the witness catalog:
// the rank-one free module, the fraction field, and cyclic quotients
// B/p^k with k bounded by the valuations in sight plus one.
bool satisfiable_conjunct(const PairForm& target, const std::vector<PairForm>& constraints,
                          const Backend& b);

Decision decide(const DecisionProblem& p, const DecideLimits& limits = {});

}  // namespace bezmod
