#pragma once

#include "bezmod/qpol.hpp"

#include <gmpxx.h>

#include <memory>
#include <string>
#include <vector>

namespace bezmod {

// A valuation value: an integer or infinity (the valuation of 0).
class LocalValue {
public:
    LocalValue(long v) : inf_(false), v_(v) {}
    static LocalValue infinity() {
        LocalValue x(0);
        x.inf_ = true;
        return x;
    }
    bool is_infinite() const { return inf_; }
    long value() const; // pre: finite
    bool operator==(const LocalValue& o) const {
        return inf_ == o.inf_ && (inf_ || v_ == o.v_);
    }
    bool operator!=(const LocalValue& o) const { return !(*this == o); }
    // infinity compares above every finite value
    bool operator<(const LocalValue& o) const { return !inf_ && (o.inf_ || v_ < o.v_); }
    bool operator<=(const LocalValue& o) const { return *this < o || *this == o; }
    LocalValue operator+(const LocalValue& o) const;
    std::string to_string() const;

private:
    bool inf_;
    long v_;
};

enum class RingId { Z, QPoly, ZLoc, QPolyLoc };

class RingElem;

// Descriptor of one of the four shipped effective Bezout backends: the
// integers, rational polynomials, and their localizations at a maximal
// ideal. Cheap to copy; equality is structural.
class Backend {
public:
    static Backend z();
    static Backend q_poly();
    static Backend z_loc(const mpz_class& p);      // validates p prime
    static Backend q_poly_loc(const QPol& f);      // validates f irreducible; stores monic form
    // Selector syntax: z | q_poly | z_loc:<prime> | q_poly_loc:<poly>
    static Backend parse(const std::string& selector);

    RingId id() const;
    bool is_valuation() const;
    bool is_poly_base() const;                     // base ring is Q[T]
    bool residue_fields_infinite() const;
    bool jacobson_radical_zero() const;
    const mpz_class& prime_z() const;              // pre: id == ZLoc
    const QPol& prime_poly() const;                // pre: id == QPolyLoc
    RingElem prime() const;                        // pre: valuation; the maximal ideal generator
    Backend global_base() const;                   // Z or QPoly
    std::string name() const;
    bool operator==(const Backend& o) const;
    bool operator!=(const Backend& o) const { return !(*this == o); }

private:
    struct Rep;
    explicit Backend(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
    std::shared_ptr<const Rep> rep_;
};

// An exact element of one backend. Elements of the localizations are
// reduced fractions of base-ring elements whose denominator avoids the
// maximal ideal; global elements always have denominator 1. The value is
// kept exactly as written: canonical() picks the canonical associate
// (non-negative for Z, monic for Q[T], a power of the maximal ideal
// generator for the localizations) but ordinary arithmetic never
// renormalizes associates behind the caller's back.
class RingElem {
public:
    static RingElem zero(const Backend& b);
    static RingElem one(const Backend& b);
    static RingElem of_int(const Backend& b, const mpz_class& n);
    static RingElem of_poly(const Backend& b, const QPol& p); // poly-base backends
    // Reduced fraction n/d in a localization (or an exact global quotient).
    static RingElem of_int_fraction(const Backend& b, const mpz_class& n, const mpz_class& d);
    static RingElem of_poly_fraction(const Backend& b, const QPol& n, const QPol& d);

    const Backend& backend() const { return b_; }
    bool is_zero() const;
    bool is_one() const;
    bool is_unit() const;
    RingElem canonical() const;

    RingElem operator+(const RingElem& o) const;
    RingElem operator-(const RingElem& o) const;
    RingElem operator*(const RingElem& o) const;
    RingElem operator-() const;
    bool operator==(const RingElem& o) const;
    bool operator!=(const RingElem& o) const { return !(*this == o); }

    const mpz_class& z_num() const;
    const mpz_class& z_den() const;
    const QPol& p_num() const;
    const QPol& p_den() const;

    std::string to_string() const;

private:
    explicit RingElem(Backend b) : b_(std::move(b)) {}
    void normalize();
    Backend b_;
    mpz_class zn_ = 0, zd_ = 1;
    QPol pn_, pd_ = QPol(1L);
    friend RingElem frac_div(const RingElem&, const RingElem&);
};

// g = a*u + b*v with g the canonical gcd.
struct BezoutTriple {
    RingElem g, u, v;
};
BezoutTriple gcd_bezout(const RingElem& a, const RingElem& b);
RingElem gcd(const RingElem& a, const RingElem& b);
RingElem lcm(const RingElem& a, const RingElem& b);

// a / gcd(a, b) in canonical-associate form. pre: a or b nonzero.
RingElem colon(const RingElem& a, const RingElem& b);

// b in the ideal (a); 0 divides only 0.
bool divides(const RingElem& a, const RingElem& b);

// a / b; pre: divides(b, a).
RingElem div_exact(const RingElem& a, const RingElem& b);

// a / b in the fraction field when the quotient lies in the ring
// (denominator constraint for localizations); throws DomainError else.
RingElem frac_div(const RingElem& a, const RingElem& b);

RingElem pow(const RingElem& a, unsigned long e);

// a = c*d with gcd(c, b) a unit and b in rad(d); c, d canonical.
// pre: a nonzero.
struct GoodFactorization {
    RingElem c, d;
};
GoodFactorization good_factorization(const RingElem& a, const RingElem& b);

// a in rad(b): every maximal ideal containing b contains a. Works for
// b = 0 (the Jacobson radical) on all shipped backends.
bool rad_member(const RingElem& a, const RingElem& b);

// Exponent of the prime p in a; infinity for a = 0. For localization
// elements this is the valuation of the reduced fraction, which is
// non-negative at the backend's own maximal ideal.
LocalValue valuation(const RingElem& p, const RingElem& a);

// p prime in Z resp. irreducible in Q[T], judged in the base ring.
// Irreducibility is complete for degree <= 6.
bool is_prime_elem(const RingElem& p);

// Canonical prime factors with multiplicity, ascending; global backends.
// Limits: trial division bound for Z, Kronecker degree bound for Q[T].
std::vector<std::pair<RingElem, int>> factorize(const RingElem& a);

// Product of the distinct prime divisors: (b : gcd(b, b')) via the formal
// derivative over Q[T], the product of the distinct prime factors over Z.
// pre: global backend, b nonzero.
RingElem squarefree_part(const RingElem& b);

// Smallest prime (Z) or lowest-degree monic irreducible in the order
// T, T+1, T-1, T+2, ... (Q[T]) dividing none of `avoid` (zeros ignored).
RingElem fresh_prime(const Backend& b, const std::vector<RingElem>& avoid);

// Total order used for deterministic sorting; same backend required.
int cmp(const RingElem& a, const RingElem& b);

// Literal syntax: optional sign + digits over Z-based backends, a
// polynomial expression over Q[T]-based ones. Localization literals are
// base-ring literals.
RingElem parse_ring_elem(const Backend& b, const std::string& text);
RingElem parse_ring_elem(const Backend& b, const std::string& text, std::size_t& pos);

// n -> n/1 from a global backend into a localization of the same base.
RingElem embed_into_localization(const RingElem& a, const Backend& loc);

} // namespace bezmod
