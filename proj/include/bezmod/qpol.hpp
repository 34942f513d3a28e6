#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

namespace bezmod {

// Dense univariate polynomial over Q in the indeterminate T.
//
// Invariant: the coefficient vector has no trailing zeros, so the zero
// polynomial is the empty vector and degree() is coeffs().size() - 1.
class QPol {
public:
    QPol() = default;
    QPol(const mpq_class& c);
    QPol(const mpz_class& c);
    QPol(long c);
    explicit QPol(std::vector<mpq_class> coeffs); // low to high degree

    static QPol var();                            // the polynomial T
    static QPol monomial(const mpq_class& c, unsigned deg);

    bool is_zero() const { return c_.empty(); }
    // degree of the zero polynomial is -1
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const mpq_class& lead() const;                // pre: nonzero
    mpq_class coeff(unsigned i) const;            // 0 beyond the degree
    const std::vector<mpq_class>& coeffs() const { return c_; }
    bool is_constant() const { return c_.size() <= 1; }
    bool is_monic() const;

    QPol operator-() const;
    QPol operator+(const QPol& o) const;
    QPol operator-(const QPol& o) const;
    QPol operator*(const QPol& o) const;
    QPol scaled(const mpq_class& s) const;
    bool operator==(const QPol& o) const { return c_ == o.c_; }
    bool operator!=(const QPol& o) const { return !(*this == o); }

    // quotient and remainder; pre: divisor nonzero
    std::pair<QPol, QPol> divrem(const QPol& d) const;
    QPol monic() const;                           // pre: nonzero
    QPol derivative() const;
    mpq_class eval(const mpq_class& x) const;

    std::string to_string() const;

private:
    void trim();
    std::vector<mpq_class> c_;
};

// Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0.
QPol qpol_gcd(const QPol& a, const QPol& b);

// g = a*u + b*v with g the monic gcd.
struct QPolXgcd {
    QPol g, u, v;
};
QPolXgcd qpol_xgcd(const QPol& a, const QPol& b);

// Exact quotient; pre: d divides a.
QPol qpol_div_exact(const QPol& a, const QPol& d);

// f / gcd(f, f'): the product of the distinct monic irreducible factors.
// pre: f nonzero.
QPol qpol_squarefree_part(const QPol& f);

// Irreducibility over Q. Complete for degree <= 6 (rational root search
// plus Kronecker factor interpolation); throws LimitError beyond that or
// when the divisor enumeration inside the Kronecker search exceeds its
// documented bound.
bool qpol_is_irreducible(const QPol& f);

// Monic irreducible factors with multiplicity, sorted by degree and then
// coefficient order; the rational unit in front is dropped. Same limits
// as qpol_is_irreducible. pre: f nonzero.
std::vector<std::pair<QPol, int>> qpol_factorize(const QPol& f);

// Parse a polynomial expression over T starting at `pos`; advances `pos`
// past the parsed expression. Grammar: sums of products of 'T'['^' nat],
// rational constants n or n/m, and parenthesized subexpressions.
QPol parse_qpol(const std::string& text, std::size_t& pos);
// Whole-string variant; throws ParseError on trailing input.
QPol parse_qpol(const std::string& text);

// Total order on polynomials (by degree, then coefficients from the top);
// used for deterministic factor ordering.
int qpol_cmp(const QPol& a, const QPol& b);

} // namespace bezmod
