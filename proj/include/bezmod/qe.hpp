#pragma once

#include "bezmod/formula.hpp"

namespace bezmod {

enum class CmpAnswer { Yes, No };

// Thrown by a symbolic comparison oracle when "v(r) <= v(s)" depends on
// the maximal ideal. The answer is Yes exactly on the part of the
// spectrum where (r:s) stays a unit, No on V((r:s)).
struct SplitRequest {
    RingElem r, s;
};

// Decision contract for the local comparison v(r) <= v(s), r, s drawn
// from the rewriter's coefficient arithmetic. leq_v must honor v(0) =
// Infinity: leq_v(r, 0) is Yes and leq_v(0, s) is Yes only for s = 0.
class ComparisonOracle {
public:
    virtual ~ComparisonOracle() = default;
    virtual CmpAnswer leq_v(const RingElem& r, const RingElem& s) = 0;

    bool yes_v(const RingElem& r, const RingElem& s) { return leq_v(r, s) == CmpAnswer::Yes; }
    // lattice order on finite Gamma elements by cross-multiplication
    bool leq_gamma(const GammaElem& x, const GammaElem& y);
};

// Concrete oracle for a valuation backend; never splits.
class ValuationOracle : public ComparisonOracle {
public:
    explicit ValuationOracle(Backend b);
    CmpAnswer leq_v(const RingElem& r, const RingElem& s) override;

private:
    Backend b_;
};

using NormalForm1 = SubgroupForm;

// Positive quantifier elimination over the valuation ring described by
// cmp. The output is quantifier-free, has the same free variables (up to
// dropped trivial atoms), and defines the same solution set in every
// model of the theory over that ring.
PPFormula eliminate(const PPFormula& f, ComparisonOracle& cmp);

// One-free-variable formulas define subgroups x.a = 0 & V_delta(x);
// eliminate is applied first if bound variables remain.
NormalForm1 normal_form_1var(const PPFormula& f, ComparisonOracle& cmp);

} // namespace bezmod
