#include "bezmod/decide.hpp"
#include "bezmod/error.hpp"

#include <doctest.h>

using namespace bezmod;

namespace {

const Backend& qT() {
    static Backend b = Backend::q_poly_loc(QPol::var());
    return b;
}

RingElem tp(unsigned e) { return pow(RingElem::of_poly(qT(), QPol::var()), e); }

PairForm pair_of(const std::string& phi, const std::string& psi) {
    ValuationOracle cmp(qT());
    return to_pair_form(parse_pp(qT(), phi), parse_pp(qT(), psi), cmp);
}

Decision run(const Backend& b, const std::string& sentence) {
    return decide({parse_sentence(b, sentence), b});
}

void check_witnesses(const Decision& d) {
    for (const WitnessReport& w : d.witnesses) {
        CHECK(pair_index_nontrivial(w.target_pair.phi, w.target_pair.psi, w.module));
        for (const SubgroupPair& c : w.constraint_pairs)
            CHECK_FALSE(pair_index_nontrivial(c.phi, c.psi, w.module));
    }
}

} // namespace

TEST_CASE("pair form constructors enforce their side conditions") {
    CHECK(PairForm::trivial(qT()).kind() == PairForm::Kind::Trivial);
    PairForm t = PairForm::torsion_pair(tp(2), tp(1));
    CHECK(t.to_string() == "TorsionPair(T^2, T)");
    CHECK_THROWS_AS(PairForm::torsion_pair(tp(1), tp(2)), DomainError); // T | T^2: trivial
    CHECK_THROWS_AS(PairForm::torsion_pair(RingElem::zero(qT()), tp(1)), DomainError);
    CHECK_THROWS_AS(PairForm::div_torsion(GammaElem::infinity(qT()), tp(1)), DomainError);
    CHECK_THROWS_AS(PairForm::div_div(GammaElem::of(tp(1)), GammaElem::one(qT())), DomainError);
    CHECK_THROWS_AS(PairForm::div_div(GammaElem::of(tp(1)), GammaElem::of(tp(1))), DomainError);
    CHECK(PairForm::div_div(GammaElem::one(qT()), GammaElem::of(tp(1))).kind() ==
          PairForm::Kind::DivDiv);
    CHECK_THROWS_AS(t.delta1(), DomainError); // torsion pairs carry no index
}

TEST_CASE("invariant pairs reduce to the four shapes") {
    PairForm p = pair_of("x*(T^2) = 0", "x*(T) = 0");
    REQUIRE(p.kind() == PairForm::Kind::TorsionPair);
    CHECK(p.a() == tp(2));
    CHECK(p.c() == tp(1));

    p = pair_of("V[v(T)](x)", "x*(T^2) = 0 & V[v(T)](x)");
    REQUIRE(p.kind() == PairForm::Kind::DivTorsion);
    CHECK(p.delta1() == GammaElem::of(tp(1)));
    CHECK(p.c() == tp(2));

    CHECK(pair_of("x*(T) = 0", "x*(T) = 0").kind() == PairForm::Kind::Trivial);
    // psi below phi happens automatically: the conjunction is implicit
    CHECK(pair_of("x*(T^2) = 0", "x*(T^4) = 0").kind() == PairForm::Kind::Trivial);

    p = pair_of("V[v(T)](x)", "V[v(T^3)](x)");
    REQUIRE(p.kind() == PairForm::Kind::DivDiv);
    CHECK(p.delta1() == GammaElem::of(tp(1)));
    CHECK(p.delta2() == GammaElem::of(tp(3)));

    // a torsion constraint absorbs congruences on its own side
    CHECK(pair_of("x*(T^2) = 0", "x*(T^2) = 0 & V[v(T)](x)").kind() ==
          PairForm::Kind::Trivial);

    ValuationOracle cmp(qT());
    CHECK_THROWS_AS(to_pair_form(parse_pp(Backend::q_poly(), "x*(T) = 0"),
                                 parse_pp(Backend::q_poly(), "x = 0"), cmp),
                    DomainError);
}

TEST_CASE("conjunct satisfiability over the witness catalog") {
    PairForm target = PairForm::torsion_pair(tp(2), tp(1));
    CHECK(satisfiable_conjunct(target, {}, qT()));
    PairForm divisible = PairForm::div_div(GammaElem::one(qT()), GammaElem::of(tp(1)));
    CHECK_FALSE(satisfiable_conjunct(target, {divisible}, qT()));
    CHECK_FALSE(satisfiable_conjunct(PairForm::trivial(qT()), {}, qT()));

    // the cyclic search must reach past the largest valuation in sight:
    // DivTorsion(v(T^2), T^2) first opens in B/T^5
    PairForm deep = PairForm::div_torsion(GammaElem::of(tp(2)), tp(2));
    CHECK(satisfiable_conjunct(deep, {}, qT()));
    CHECK(pair_index_nontrivial(SubgroupForm{RingElem::zero(qT()), GammaElem::of(tp(2))},
                                SubgroupForm{tp(2), GammaElem::one(qT())},
                                ModuleSpec::cyclic(tp(5))));
    CHECK_FALSE(pair_index_nontrivial(SubgroupForm{RingElem::zero(qT()), GammaElem::of(tp(2))},
                                      SubgroupForm{tp(2), GammaElem::one(qT())},
                                      ModuleSpec::cyclic(tp(4))));

    Backend z2 = Backend::z_loc(2);
    PairForm zt = PairForm::torsion_pair(RingElem::of_int(z2, 4), RingElem::of_int(z2, 2));
    CHECK_THROWS_AS(satisfiable_conjunct(zt, {}, z2), CapabilityError);
}

TEST_CASE("decision golden cases over the valuation backend") {
    Decision d = run(qT(), "Inv(x = 0 | x = 0) =1");
    CHECK(d.verdict == Verdict::Valid);

    d = run(qT(), "Inv(x*(T^2) = 0 | x*(T) = 0) >1 | !(Inv(x*(T^2) = 0 | x*(T) = 0) >1)");
    CHECK(d.verdict == Verdict::Valid);
    CHECK(d.summary == "valid: propositional tautology");

    d = run(qT(), "Inv(x*(T^2) = 0 | x*(T) = 0) >1");
    CHECK(d.verdict == Verdict::Invalid);
    CHECK(d.witnesses.empty()); // the zero module is the counter-model
    CHECK(d.summary == "counter-model: the zero module keeps every invariant pair at index one");

    d = run(qT(), "!(Inv(x*(T^2) = 0 | x*(T) = 0) >1)");
    CHECK(d.verdict == Verdict::Invalid);
    REQUIRE(d.witnesses.size() == 1);
    CHECK(d.witnesses[0].module.to_string() == "cyclic:T^2");
    check_witnesses(d);

    d = run(qT(), "!(Inv(x*(T) = 0 | x = 0) >1 & Inv(V[v(T)](x) | x = 0) =1)");
    CHECK(d.verdict == Verdict::Invalid);
    REQUIRE(d.witnesses.size() == 1);
    CHECK(d.witnesses[0].module.to_string() == "cyclic:T");
    CHECK(d.witnesses[0].constraint_pairs.size() == 1);
    check_witnesses(d);

    // unsatisfiable conjunction: torsion openness against global divisibility
    d = run(qT(), "!(Inv(x*(T^2) = 0 | x*(T) = 0) >1 & Inv(E u . x = u | V[v(T)](x)) =1)");
    CHECK(d.verdict == Verdict::Valid);
    CHECK(d.summary == "valid: no counter-model in the witness catalog");
}

TEST_CASE("decision golden cases over the global backend") {
    Backend g = Backend::q_poly();

    Decision d = run(g, "!(Inv(E n . n*(T) = m | m = 0) >1)");
    CHECK(d.verdict == Verdict::Invalid);
    REQUIRE(d.witnesses.size() == 1);
    CHECK(d.witnesses[0].module.to_string() == "free:1");
    CHECK(d.witnesses[0].piece.to_string() == "open(T)");
    CHECK(d.witnesses[0].at.to_string() == "T + 1");
    check_witnesses(d);

    d = run(g, "!(Inv(x*(T^2) = 0 | x*(T) = 0) >1)");
    CHECK(d.verdict == Verdict::Invalid);
    REQUIRE(d.witnesses.size() == 1);
    CHECK(d.witnesses[0].module.to_string() == "cyclic:T^2");
    CHECK(d.witnesses[0].piece == ConstructibleSet::whole(g));
    CHECK(d.witnesses[0].at.to_string() == "T");
    check_witnesses(d);

    d = run(g, "!(Inv(E n . n*(T^2+T) = m | m = 0) >1 & Inv(x*(T) = 0 | x = 0) =1)");
    CHECK(d.verdict == Verdict::Invalid);
    REQUIRE(d.witnesses.size() == 1);
    CHECK(d.witnesses[0].module.to_string() == "free:1");
    CHECK(d.witnesses[0].piece.to_string() == "open(T^2 + T)");
    CHECK(d.witnesses[0].at.to_string() == "T - 1");
    CHECK(d.summary == "counter-model: direct sum of [free:1 at open(T^2 + T)]");
    check_witnesses(d);

    d = run(g, "Inv(x*(T) = 0 | x*(T) = 0 & V[v(T+1)](x)) =1");
    CHECK(d.verdict == Verdict::Valid);

    // two targets in one disjunct: the counter-model is a direct sum
    d = run(g,
            "!(Inv(x*(T^2) = 0 | x*(T) = 0) >1 & "
            "Inv(x*(T^2 + 2*T + 1) = 0 | x*(T + 1) = 0) >1)");
    CHECK(d.verdict == Verdict::Invalid);
    REQUIRE(d.witnesses.size() == 2);
    check_witnesses(d);
}

TEST_CASE("backends without infinite residue fields are refused") {
    for (const char* sel : {"z", "z_loc:2"}) {
        Backend b = Backend::parse(sel);
        try {
            run(b, "Inv(x*2 = 0 | x*4 = 0) >1");
            FAIL("expected CapabilityError for " << sel);
        } catch (const CapabilityError& e) {
            CHECK(std::string(e.what()).find("the quotient B/M is infinite") != std::string::npos);
        }
    }
}

TEST_CASE("caps are enforced") {
    Backend g = Backend::q_poly();
    DecideLimits tight;
    tight.literal_cap = 1;
    BSentence s = parse_sentence(
        g, "Inv(x*(T) = 0 | x = 0) >1 & Inv(x*(T^2) = 0 | x = 0) >1");
    CHECK_THROWS_AS(decide({s, g}, tight), LimitError);
}

TEST_CASE("a sentence and its negation are never both valid") {
    const char* suite[] = {
        "Inv(x = 0 | x = 0) =1",
        "Inv(x*(T^2) = 0 | x*(T) = 0) >1",
        "!(Inv(x*(T^2) = 0 | x*(T) = 0) >1)",
        "Inv(V[v(T)](x) | x*(T) = 0) =1",
        "!(Inv(x*(T) = 0 | x = 0) >1 & Inv(V[v(T)](x) | x = 0) =1)",
    };
    for (const char* text : suite) {
        Decision pos = run(qT(), text);
        Decision neg = run(qT(), std::string("!(") + text + ")");
        bool both_valid =
            pos.verdict == Verdict::Valid && neg.verdict == Verdict::Valid;
        CHECK_FALSE(both_valid);
    }
}
