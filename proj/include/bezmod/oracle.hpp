#pragma once

#include "bezmod/formula.hpp"

#include <map>
#include <string>
#include <vector>

namespace bezmod {

// Concrete evaluation target: a free module B^rank, a cyclic quotient
// B/cB over a valuation backend, or the fraction field Q(B). V_delta is
// read as divisibility: V_delta(m) iff m = n.a for a with v(a) = delta.
// The fraction field supports only the closed-form index computation,
// not element evaluation.
struct ModuleSpec {
    enum class Kind { Free, Cyclic, FractionField };

    static ModuleSpec free_module(const Backend& b, unsigned rank);
    static ModuleSpec cyclic(const RingElem& c);  // valuation backend; c != 0, non-unit
    static ModuleSpec fraction_field(const Backend& b);

    Kind kind;
    Backend backend;
    unsigned rank;  // Free
    RingElem c;     // Cyclic

    unsigned components() const { return kind == Kind::Free ? rank : 1; }
    std::string to_string() const;
};

// A module element, one base-ring value per component.
struct ModElem {
    std::vector<RingElem> comps;

    static ModElem zero(const ModuleSpec& m);
    std::string to_string() const;
};

using Assignment = std::map<Var, ModElem>;

// y.A = b in the paper's row-vector convention: rows are unknowns,
// columns are conditions; the right-hand side holds one module element
// per condition.
struct LinearSystem {
    Backend backend;
    std::vector<Var> unknowns;                 // bound variables, then fresh z per V atom
    std::size_t n_bound = 0;                   // unknowns[0..n_bound) are bound variables
    std::vector<std::vector<RingElem>> coeff;  // [unknown][condition]
    std::vector<ModElem> rhs;                  // [condition]
};

// Translate a pp formula with assigned free variables: bound variables
// become unknowns and every V_delta(t) atom becomes z.a = t for a fresh
// unknown z and a with v(a) = delta. Fractional indices are rejected.
LinearSystem to_linear_system(const PPFormula& f, const Assignment& params,
                              const ModuleSpec& m);

struct SolveResult {
    bool solvable;
    Assignment witness;  // bound variables only; present when solvable
};

// Diagonalization by gcd_bezout-built unimodular row and column
// operations, to a diagonal with d1 | d2 | ...; every positive answer
// carries a witness that has been re-verified by substitution.
SolveResult solvable(const LinearSystem& sys, const ModuleSpec& m);

// Truth of f at params in m.
bool eval_pp(const PPFormula& f, const Assignment& params, const ModuleSpec& m);

// Strictness of the subgroup pair: phi(m) strictly contains the
// intersection psi(m) & phi(m). Closed-form; m over a valuation backend.
bool pair_index_nontrivial(const SubgroupForm& phi, const SubgroupForm& psi,
                           const ModuleSpec& m);

} // namespace bezmod
