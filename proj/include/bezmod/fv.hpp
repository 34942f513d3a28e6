#pragma once

#include "bezmod/formula.hpp"
#include "bezmod/qe.hpp"
#include "bezmod/ring.hpp"

#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace bezmod {

// Constructible subsets of the maximal spectrum that arise from elimination
// guards. Everything we ever need is a basic set: the closed locus V(e) of
// maximal ideals containing e, its complement, or one of the two trivial
// sets. Intersections stay in this class because B is Bezout: V(a) n V(b)
// is V(gcd), and V(a) \ V(b) is V(c) for the good factorization a = c.d.
enum class CsKind { Empty, Whole, Closed, Open };

class ConstructibleSet {
public:
    static ConstructibleSet empty(const Backend& b);
    static ConstructibleSet whole(const Backend& b);
    static ConstructibleSet closed(const RingElem& e);  // { M : e in M }
    static ConstructibleSet open(const RingElem& e);    // { M : e not in M }

    const Backend& backend() const { return b_; }
    CsKind kind() const { return kind_; }

    // Defining element, canonical, nonzero and not a unit. Only the Closed
    // and Open kinds carry one; asking otherwise is a DomainError.
    const RingElem& elem() const;

    bool operator==(const ConstructibleSet& o) const;
    bool operator!=(const ConstructibleSet& o) const { return !(*this == o); }

    std::string to_string() const;  // "empty" | "whole" | "closed(12)" | "open(T + 1)"

private:
    ConstructibleSet(Backend b, CsKind k, RingElem e)
        : b_(std::move(b)), kind_(k), e_(std::move(e)) {}

    Backend b_;
    CsKind kind_;
    RingElem e_;  // placeholder zero/one for the trivial kinds

    friend ConstructibleSet cs_complement(const ConstructibleSet& s);
};

ConstructibleSet cs_intersect(const ConstructibleSet& s1, const ConstructibleSet& s2);
ConstructibleSet cs_union(const ConstructibleSet& s1, const ConstructibleSet& s2);
ConstructibleSet cs_complement(const ConstructibleSet& s);
bool cs_is_empty(const ConstructibleSet& s);
bool cs_subseteq(const ConstructibleSet& s1, const ConstructibleSet& s2);

// Membership of the maximal ideal generated by a prime element p. This is
// the test the whole calculus abbreviates: p lies in V(e) iff p divides e.
bool cs_contains(const ConstructibleSet& s, const RingElem& p);

// One case of a decomposition: on the guard locus, the input formula is
// equivalent to the quantifier-free body.
struct GuardedPiece {
    ConstructibleSet guard;
    PPFormula body;
};

struct GuardedFormula {
    std::vector<GuardedPiece> pieces;
};

// The divisibility question "does r divide s in the localization B_M"
// depends on M only through the colon element: r | s in B_M iff (r:s)
// is outside M.
RingElem split_element(const RingElem& r, const RingElem& s);

// Comparison oracle that answers from a fixed script of branch choices and
// raises SplitRequest when the script runs out. Questions whose answer is
// forced on the current guard locus are answered directly and consume no
// script; each scripted answer shrinks the guard by the matching basic set.
class ReplayOracle final : public ComparisonOracle {
public:
    ReplayOracle(const Backend& b, std::vector<bool> script);

    CmpAnswer leq_v(const RingElem& r, const RingElem& s) override;

    const ConstructibleSet& guard() const { return guard_; }

private:
    std::vector<bool> script_;
    std::size_t used_ = 0;
    ConstructibleSet guard_;
};

// Run a computation against every consistent way of resolving its
// divisibility questions. Branches whose guard locus comes up empty are
// pruned before they run. Returns (guard, result) pairs; the guards
// partition the whole spectrum when `compute` is deterministic.
template <class F>
auto explore_cases(const Backend& b, F&& compute)
    -> std::vector<std::pair<ConstructibleSet, std::invoke_result_t<F&, ComparisonOracle&>>> {
    using R = std::invoke_result_t<F&, ComparisonOracle&>;
    std::vector<std::pair<ConstructibleSet, R>> out;
    std::vector<std::vector<bool>> pending;
    pending.push_back({});
    while (!pending.empty()) {
        std::vector<bool> script = std::move(pending.back());
        pending.pop_back();
        ReplayOracle cmp(b, script);
        try {
            R result = compute(cmp);
            out.emplace_back(cmp.guard(), std::move(result));
        } catch (const SplitRequest& split) {
            RingElem e = split_element(split.r, split.s);
            // Last in, first out: push the No branch first so Yes runs first.
            std::vector<bool> no = script;
            no.push_back(false);
            std::vector<bool> yes = std::move(script);
            yes.push_back(true);
            if (!cs_is_empty(cs_intersect(cmp.guard(), ConstructibleSet::closed(e))))
                pending.push_back(std::move(no));
            if (!cs_is_empty(cs_intersect(cmp.guard(), ConstructibleSet::open(e))))
                pending.push_back(std::move(yes));
        }
    }
    return out;
}

// Eliminate the bound variables of f simultaneously at every maximal ideal:
// the result is a finite list of guarded quantifier-free formulas whose
// guards partition the spectrum, with f equivalent to the body over each
// localization B_M with M in the guard. Requires a global backend.
GuardedFormula decompose(const PPFormula& f);

// Reinterpret a quantifier-free body over the localization at the prime
// element p: coefficients embed, and each congruence index collapses to
// v(p)^e for its local value e (dropped when e <= 0, since the subgroup
// is then everything). The body must have no bound variables.
PPFormula localize_body(const PPFormula& body, const RingElem& p);

}  // namespace bezmod
