#include "bezmod/error.hpp"
#include "bezmod/oracle.hpp"
#include "bezmod/qe.hpp"

#include <doctest.h>

#include <random>

using namespace bezmod;

namespace {

RingElem zi(const Backend& b, long n) { return RingElem::of_int(b, n); }

std::string elim(const Backend& b, const std::string& text) {
    ValuationOracle cmp(b);
    return eliminate(parse_pp(b, text), cmp).to_string();
}

} // namespace

TEST_CASE("the valuation oracle answers by divisibility") {
    Backend z2 = Backend::z_loc(2);
    ValuationOracle cmp(z2);
    CHECK(cmp.leq_v(zi(z2, 2), zi(z2, 4)) == CmpAnswer::Yes);
    CHECK(cmp.leq_v(zi(z2, 4), zi(z2, 2)) == CmpAnswer::No);
    CHECK(cmp.leq_v(zi(z2, 3), zi(z2, 5)) == CmpAnswer::Yes); // units compare equal
    CHECK(cmp.leq_v(zi(z2, 2), zi(z2, 0)) == CmpAnswer::Yes); // v(0) is infinite
    CHECK(cmp.leq_v(zi(z2, 0), zi(z2, 2)) == CmpAnswer::No);
    CHECK(cmp.leq_v(zi(z2, 0), zi(z2, 0)) == CmpAnswer::Yes);
    CHECK_THROWS_AS(ValuationOracle(Backend::z()), CapabilityError);
}

TEST_CASE("elimination golden outputs") {
    Backend z2 = Backend::z_loc(2);
    CHECK(elim(z2, "E x . x*2 = y") == "V[v(2)](y)");
    CHECK(elim(z2, "E x . x*4 = y & V[v(8)](x*2 - z)") == "V[v(4)](y) & V[v(16)](y - z*2)");
    CHECK(elim(z2, "E x . V[v(8)](x*2 - y)") == "V[v(2)](y)");
    CHECK(elim(z2, "E x . V[v(8)](x*2 - y) & V[v(4)](x - z)") ==
          "V[v(2)](y) & V[v(8)](y - z*2)");
    CHECK(elim(z2, "x*4 = 0 & x*6 = 0") == "x*4 = 0 & x*2 = 0");
    CHECK(elim(z2, "0 = 0") == "0 = 0");
    CHECK(elim(z2, "E x . x*2 = 0") == "0 = 0"); // closed and trivially satisfiable
    Backend qT = Backend::q_poly_loc(QPol::var());
    CHECK(elim(qT, "E x . x*(T) = y") == "V[v(T)](y)");
}

TEST_CASE("elimination leaves no binders and fixes the free variables") {
    Backend z2 = Backend::z_loc(2);
    ValuationOracle cmp(z2);
    PPFormula f = parse_pp(z2, "E x u . x*4 - u*2 = y & V[v(8)](u - z) & x*2 = 0");
    PPFormula g = eliminate(f, cmp);
    CHECK(g.bound.empty());
    for (const auto& v : g.free_vars()) CHECK((v == "y" || v == "z"));
    // eliminating an already quantifier-free formula changes nothing
    CHECK(eliminate(g, cmp) == g);
}

TEST_CASE("one variable formulas reduce to a subgroup form") {
    Backend z2 = Backend::z_loc(2);
    ValuationOracle cmp(z2);

    NormalForm1 nf = normal_form_1var(parse_pp(z2, "x*4 = 0 & x*6 = 0"), cmp);
    CHECK(nf.a == zi(z2, 2));
    CHECK(nf.delta == GammaElem::one(z2));

    nf = normal_form_1var(parse_pp(z2, "V[v(4)](x*2)"), cmp);
    CHECK(nf.a == RingElem::zero(z2));
    CHECK(nf.delta == GammaElem::of(zi(z2, 2)));

    nf = normal_form_1var(parse_pp(z2, "0 = 0"), cmp);
    CHECK(nf.a == RingElem::zero(z2));
    CHECK(nf.delta == GammaElem::one(z2));

    nf = normal_form_1var(parse_pp(z2, "x*4 = 0 & V[v(8)](x*2)"), cmp);
    CHECK(nf.a == zi(z2, 4));
    CHECK(nf.delta == GammaElem::of(zi(z2, 4)));

    CHECK_THROWS_AS(normal_form_1var(parse_pp(z2, "x - y = 0"), cmp), DomainError);
}

TEST_CASE("elimination agrees with the solver on random formulas") {
    Backend z2 = Backend::z_loc(2);
    ValuationOracle cmp(z2);
    ModuleSpec m1 = ModuleSpec::free_module(z2, 1);
    ModuleSpec m2 = ModuleSpec::free_module(z2, 2);
    std::mt19937_64 rng(1729);
    std::uniform_int_distribution<int> coin(0, 1), nb(0, 2), na(1, 3), exp2(0, 4), val(-10, 10);
    std::vector<Var> bound_pool = {"u", "w"}, free_pool = {"y", "z"};
    for (int it = 0; it < 80; ++it) {
        std::vector<Var> bound(bound_pool.begin(), bound_pool.begin() + nb(rng));
        std::vector<Atom> atoms;
        int k = na(rng);
        for (int i = 0; i < k; ++i) {
            Term t(z2);
            for (const auto& v : bound)
                if (coin(rng)) t = t + Term::mono(v, zi(z2, (1L << exp2(rng)) * (coin(rng) ? 1 : 3)));
            for (const auto& v : free_pool)
                if (coin(rng)) t = t + Term::mono(v, zi(z2, coin(rng) ? 1 : -2));
            if (t.is_zero()) continue;
            if (coin(rng))
                atoms.push_back(Atom::eq(t));
            else
                atoms.push_back(Atom::vp(GammaElem::of(zi(z2, 1L << (1 + exp2(rng) % 3))), t));
        }
        PPFormula f = normalize(PPFormula(z2, bound, atoms));
        PPFormula g = eliminate(f, cmp);
        CHECK(g.bound.empty());
        for (const ModuleSpec& m : {m1, m2}) {
            for (int s = 0; s < 10; ++s) {
                Assignment asg;
                for (const auto& v : free_pool) {
                    ModElem e;
                    for (unsigned c = 0; c < m.components(); ++c)
                        e.comps.push_back(zi(z2, val(rng)));
                    asg[v] = e;
                }
                CHECK(eval_pp(f, asg, m) == eval_pp(g, asg, m));
            }
        }
    }
}
