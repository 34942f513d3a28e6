#include "bezmod/error.hpp"
#include "bezmod/formula.hpp"

#include <doctest.h>

#include <random>

using namespace bezmod;

namespace {

RingElem zi(const Backend& b, long n) { return RingElem::of_int(b, n); }

} // namespace

TEST_CASE("terms are coefficient maps without zeros") {
    Backend z = Backend::z();
    Term t = Term::mono("x", zi(z, 2)) + Term::mono("y", zi(z, -1));
    CHECK(t.to_string() == "x*2 - y");
    CHECK(t.coeff("x") == zi(z, 2));
    CHECK(t.coeff("q") == zi(z, 0));
    CHECK((t - t).is_zero());
    CHECK((t - t).to_string() == "0");
    CHECK(t.scaled(zi(z, 0)).is_zero());
    CHECK(t.without("y") == Term::mono("x", zi(z, 2)));
    Term cancel = Term::mono("x", zi(z, 3)) + Term::mono("x", zi(z, -3));
    CHECK(cancel.is_zero());
    CHECK_FALSE(cancel.mentions("x"));
}

TEST_CASE("atoms print both shapes and refuse an infinite index") {
    Backend z = Backend::z();
    Term t = Term::mono("x", zi(z, 2));
    CHECK(Atom::eq(t).to_string() == "x*2 = 0");
    CHECK(Atom::vp(GammaElem::of(zi(z, 8)), t).to_string() == "V[v(8)](x*2)");
    CHECK_THROWS_AS(Atom::vp(GammaElem::infinity(z), t), DomainError);
}

TEST_CASE("normalization drops trivial content") {
    Backend z = Backend::z();
    PPFormula f = parse_pp(z, "E u . 0 = 0 & V[v(1)](x) & x*2 = 0 & x*2 = 0");
    PPFormula g = normalize(f);
    CHECK(g.to_string() == "x*2 = 0");
    CHECK(g.bound.empty());          // u was never used
    CHECK(normalize(g) == g);        // idempotent
    // parsing is faithful; normalization applies the canonical unit scale
    CHECK(parse_pp(z, "x*-2 = 0").to_string() == "- x*2 = 0");
    CHECK(normalize(parse_pp(z, "x*-2 = 0")).to_string() == "x*2 = 0");
    CHECK(parse_pp(z, "0 = 0").free_vars().empty());
    CHECK(parse_pp(z, "0 = 0").is_closed());
    CHECK_THROWS_AS(PPFormula(z, {"x", "x"}, {}), DomainError); // repeated binder
}

TEST_CASE("free variables are sorted and exclude binders") {
    Backend z = Backend::z();
    PPFormula f = parse_pp(z, "E x . x*2 - y = 0 & z*3 - x = 0");
    CHECK(f.free_vars() == std::vector<Var>{"y", "z"});
}

TEST_CASE("parser golden shapes") {
    Backend z = Backend::z();
    CHECK(parse_pp(z, "E x . x*2 = y").to_string() == "E x . x*2 - y = 0");
    CHECK(parse_pp(z, "E x . 2*x = y").to_string() == "E x . x*2 - y = 0");
    BSentence s = parse_sentence(z, "Inv(E x. x*2 = y | y = 0) >1");
    CHECK(s.to_string() == "Inv(E x . x*2 - y = 0 | E x . y = 0 & x*2 - y = 0) >1");
    Backend qp = Backend::q_poly();
    CHECK(parse_pp(qp, "x*(T^2 + 1) = 0").to_string() == "x*(T^2 + 1) = 0");
    CHECK(parse_pp(qp, "V[v(T)*v(T+1)](x)").to_string() == "V[v(T^2 + T)](x)");
    // whole comment lines vanish
    CHECK(parse_pp(z, "x*2 = 0\n# torsion below\n& x*4 = 0").to_string() == "x*2 = 0 & x*4 = 0");
}

TEST_CASE("parse errors carry a position") {
    Backend z = Backend::z();
    CHECK_THROWS_AS(parse_pp(z, "E . x = 0"), ParseError);
    CHECK_THROWS_AS(parse_pp(z, "x*2 = y extra"), ParseError);
    CHECK_THROWS_AS(parse_pp(z, "V[v(0)](x)"), ParseError); // infinite index refused
    CHECK_THROWS_AS(parse_pp(z, "x*T = 0"), ParseError);     // T reserved, not a Z scalar
    try {
        parse_pp(z, "x*2 = @");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.pos > 0);
    }
}

TEST_CASE("containment up to renaming of binders") {
    Backend z = Backend::z();
    PPFormula outer = parse_pp(z, "E x . x*2 - y = 0 & x*4 = 0");
    CHECK(pp_contains_upto_renaming(outer, parse_pp(z, "E w . w*2 - y = 0")));
    CHECK(pp_contains_upto_renaming(outer, outer));
    CHECK_FALSE(pp_contains_upto_renaming(outer, parse_pp(z, "E w . w*3 - y = 0")));
    CHECK_FALSE(pp_contains_upto_renaming(outer, parse_pp(z, "y*2 = 0")));
    // free variables must not be renamed
    CHECK_FALSE(pp_contains_upto_renaming(outer, parse_pp(z, "E w . w*2 - q = 0")));
}

TEST_CASE("invariant conditions conjoin psi with phi") {
    Backend z = Backend::z();
    InvCondition c(parse_pp(z, "E x . x*2 = y"), parse_pp(z, "y = 0"), InvRel::Gt1);
    CHECK(c.var() == "y");
    CHECK(c.to_string() == "Inv(E x . x*2 - y = 0 | E x . y = 0 & x*2 - y = 0) >1");
    // psi already contains phi: kept verbatim, printing stays stable
    InvCondition d(parse_pp(z, "y*2 = 0"), parse_pp(z, "y*2 = 0 & y*4 = 0"), InvRel::Eq1);
    CHECK(d.psi().to_string() == "y*2 = 0 & y*4 = 0");
    CHECK(parse_sentence(z, d.to_string()).to_string() == d.to_string());
    // a closed side is fine as long as one variable remains over all
    InvCondition whole(parse_pp(z, "0 = 0"), parse_pp(z, "y = 0"), InvRel::Gt1);
    CHECK(whole.var() == "y");
    CHECK_THROWS_AS(InvCondition(parse_pp(z, "0 = 0"), parse_pp(z, "0 = 0"), InvRel::Gt1),
                    DomainError);
    CHECK_THROWS_AS(InvCondition(parse_pp(z, "y - q = 0"), parse_pp(z, "y = 0"), InvRel::Gt1),
                    DomainError);
}

TEST_CASE("sentence algebra prints with sensible precedence") {
    Backend z = Backend::z();
    BSentence a = parse_sentence(z, "Inv(y*2 = 0 | y = 0) >1");
    BSentence s = BSentence::disj(BSentence::negation(a), a);
    CHECK(parse_sentence(z, s.to_string()).to_string() == s.to_string());
    BSentence closed = parse_sentence(z, "!(E x . x*2 = 0)");
    CHECK(closed.kind() == BSentence::Kind::Not);
    CHECK(closed.kids()[0].kind() == BSentence::Kind::PP);
}

TEST_CASE("subgroup forms round trip through pp syntax") {
    Backend z2 = Backend::z_loc(2);
    SubgroupForm s{zi(z2, 4), GammaElem::of(zi(z2, 2))};
    PPFormula f = s.to_pp("x");
    CHECK(f.to_string() == "x*4 = 0 & V[v(2)](x)");
    SubgroupForm none{RingElem::zero(z2), GammaElem::one(z2)};
    CHECK(none.to_pp("x").to_string() == "0 = 0");
}

TEST_CASE("embedding a formula into a localization") {
    Backend z = Backend::z();
    Backend z2 = Backend::z_loc(2);
    PPFormula f = parse_pp(z, "E x . x*6 = y & V[v(12)](x - z)");
    PPFormula g = embed_pp(f, z2);
    CHECK(g.backend == z2);
    CHECK(g.to_string() == "E x . x*2 - y*1/3 = 0 & V[v(4)](x - z)");
    CHECK(embed_pp(parse_pp(z, "0 = 0"), z2).to_string() == "0 = 0");
}

TEST_CASE("random formulas round trip through the printer") {
    std::mt19937_64 rng(314159);
    std::uniform_int_distribution<int> coin(0, 1), nc(-12, 12), na(1, 3), ne(1, 4);
    Backend bs[2] = {Backend::z(), Backend::z_loc(3)};
    std::vector<Var> pool = {"x", "y", "z"};
    for (int it = 0; it < 120; ++it) {
        Backend b = bs[it % 2];
        std::vector<Atom> atoms;
        int k = na(rng);
        for (int i = 0; i < k; ++i) {
            Term t(b);
            for (const auto& v : pool)
                if (coin(rng)) t = t + Term::mono(v, zi(b, nc(rng)));
            if (t.is_zero()) t = Term::mono("x", zi(b, 1));
            if (coin(rng)) {
                atoms.push_back(Atom::eq(t));
            } else {
                long base = b.is_valuation() ? 3 : 2, p = 1;
                for (int e = ne(rng); e > 0; --e) p *= base;
                atoms.push_back(Atom::vp(GammaElem::of(zi(b, p)), t));
            }
        }
        PPFormula f = normalize(PPFormula(b, {"x"}, atoms));
        CHECK(parse_pp(b, f.to_string()) == f);
    }
}
