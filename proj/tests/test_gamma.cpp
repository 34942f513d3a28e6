#include "bezmod/gamma.hpp"
#include "bezmod/ring.hpp"

#include <doctest.h>

#include <random>

using namespace bezmod;

namespace {

GammaElem gz(const Backend& b, long n) { return GammaElem::of(RingElem::of_int(b, n)); }

} // namespace

TEST_CASE("gamma cosets compare structurally") {
    Backend z = Backend::z();
    CHECK(gz(z, 6) == gz(z, -6));
    CHECK(GammaElem::ratio(RingElem::of_int(z, 4), RingElem::of_int(z, 6)) ==
          GammaElem::ratio(RingElem::of_int(z, 2), RingElem::of_int(z, 3)));
    CHECK(gz(z, 1) == GammaElem::one(z));
    CHECK(gz(z, 0).is_infinite());
    CHECK(GammaElem::one(z).is_one());
    CHECK(gz(z, 6).is_integral());
    CHECK_FALSE(GammaElem::ratio(RingElem::of_int(z, 2), RingElem::of_int(z, 3)).is_integral());
}

TEST_CASE("divisibility order, meet and join") {
    Backend z = Backend::z();
    CHECK(gamma_leq(gz(z, 2), gz(z, 4)));
    CHECK_FALSE(gamma_leq(gz(z, 4), gz(z, 2)));
    CHECK(gamma_leq(gz(z, 2), gz(z, 0)));        // everything sits below infinity
    CHECK_FALSE(gamma_leq(gz(z, 0), gz(z, 2)));
    CHECK(gamma_meet(gz(z, 4), gz(z, 6)) == gz(z, 2));
    CHECK(gamma_join(gz(z, 4), gz(z, 6)) == gz(z, 12));
    CHECK(gamma_meet(gz(z, 4), gz(z, 0)) == gz(z, 4));
    CHECK(gamma_join(gz(z, 4), gz(z, 0)) == gz(z, 0));

    // fractional cosets order by cross multiplication: v(2)/v(3) <= v(4) iff 2 | 12
    GammaElem q = GammaElem::ratio(RingElem::of_int(z, 2), RingElem::of_int(z, 3));
    CHECK(gamma_leq(q, gz(z, 4)));
    CHECK_FALSE(gamma_leq(gz(z, 4), q));
}

TEST_CASE("group operations") {
    Backend z = Backend::z();
    CHECK(gz(z, 4) * gz(z, 6) == gz(z, 24));
    CHECK(gz(z, 4) / gz(z, 6) == GammaElem::ratio(RingElem::of_int(z, 2), RingElem::of_int(z, 3)));
    CHECK(gz(z, 6).inverse() * gz(z, 6) == GammaElem::one(z));
    CHECK((gz(z, 0) * gz(z, 5)).is_infinite());
    CHECK(gz(z, 6).to_string() == "v(6)");
    CHECK(gz(z, 0).to_string() == "inf");
}

TEST_CASE("localization of gamma values") {
    Backend z = Backend::z();
    RingElem two = RingElem::of_int(z, 2), three = RingElem::of_int(z, 3);
    GammaElem x = GammaElem::ratio(RingElem::of_int(z, 12), RingElem::of_int(z, 5));
    CHECK(gamma_localize(x, two) == LocalValue(2));
    CHECK(gamma_localize(x, three) == LocalValue(1));
    CHECK(gamma_localize(x, RingElem::of_int(z, 5)) == LocalValue(-1));
    CHECK(gamma_localize(gz(z, 0), two).is_infinite());

    Backend qp = Backend::q_poly();
    RingElem T = RingElem::of_poly(qp, QPol::var());
    CHECK(gamma_localize(GammaElem::of(T * T), T) == LocalValue(2));
}

TEST_CASE("lattice laws hold on random values") {
    Backend z = Backend::z();
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<long> d(1, 60);
    for (int i = 0; i < 200; ++i) {
        GammaElem a = gz(z, d(rng)), b = gz(z, d(rng)), c = gz(z, d(rng));
        CHECK(gamma_meet(a, b) == gamma_meet(b, a));
        CHECK(gamma_join(a, b) == gamma_join(b, a));
        CHECK(gamma_meet(a, gamma_meet(b, c)) == gamma_meet(gamma_meet(a, b), c));
        CHECK(gamma_join(a, gamma_join(b, c)) == gamma_join(gamma_join(a, b), c));
        CHECK(gamma_meet(a, gamma_join(a, b)) == a);
        CHECK(gamma_join(a, gamma_meet(a, b)) == a);
        CHECK(gamma_leq(gamma_meet(a, b), a));
        CHECK(gamma_leq(a, gamma_join(a, b)));
        // the order embeds multiplication: a*c <= b*c iff a <= b
        CHECK(gamma_leq(a * c, b * c) == gamma_leq(a, b));
    }
}
