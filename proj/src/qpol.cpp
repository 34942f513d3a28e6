#include "bezmod/qpol.hpp"

#include "bezmod/error.hpp"
#include "intfact.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>

namespace bezmod {

namespace {

using detail::positive_divisors;

const std::size_t kMaxKroneckerCombos = 2000000;

mpq_class make_q(const mpz_class& n, const mpz_class& d) {
    mpq_class q(n, d);
    q.canonicalize();
    return q;
}

// Scale f by the lcm of coefficient denominators over the gcd of
// numerators: a primitive integer polynomial with the same roots.
std::vector<mpz_class> primitive_integer_form(const QPol& f) {
    assert(!f.is_zero());
    mpz_class l = 1;
    for (const auto& c : f.coeffs()) l = lcm(l, c.get_den());
    std::vector<mpz_class> v;
    v.reserve(f.coeffs().size());
    mpz_class g = 0;
    for (const auto& c : f.coeffs()) {
        mpq_class s = c * l;
        assert(s.get_den() == 1);
        v.push_back(s.get_num());
        g = gcd(g, v.back());
    }
    for (auto& x : v) x /= g;
    if (v.back() < 0)
        for (auto& x : v) x = -x;
    return v;
}

mpq_class eval_int_poly(const std::vector<mpz_class>& f, const mpq_class& x) {
    mpq_class acc = 0;
    for (std::size_t i = f.size(); i-- > 0;) acc = acc * x + mpq_class(f[i]);
    return acc;
}

// One rational root of the primitive integer polynomial f, if any.
bool find_rational_root(const std::vector<mpz_class>& f, mpq_class& root) {
    if (f.size() < 2) return false;
    if (f.front() == 0) { root = 0; return true; }
    std::vector<mpz_class> ps = positive_divisors(abs(f.front()));
    std::vector<mpz_class> qs = positive_divisors(abs(f.back()));
    for (const auto& q : qs) {
        for (const auto& p : ps) {
            for (int sign = 1; sign >= -1; sign -= 2) {
                mpq_class cand = make_q(sign * p, q);
                if (eval_int_poly(f, cand) == 0) { root = cand; return true; }
            }
        }
    }
    return false;
}

// Lagrange interpolation through (xs[i], ys[i]).
QPol interpolate(const std::vector<mpz_class>& xs, const std::vector<mpq_class>& ys) {
    QPol acc;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        QPol li(mpq_class(1));
        mpq_class denom = 1;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (j == i) continue;
            li = li * (QPol::var() - QPol(mpq_class(xs[j])));
            denom *= mpq_class(xs[i] - xs[j]);
        }
        acc = acc + li.scaled(ys[i] / denom);
    }
    return acc;
}

// Kronecker search for a monic factor of degree exactly d of the monic
// rational polynomial f (given also in primitive integer form fi). The
// candidate factor values at d+1 integer points must divide the integer
// values of fi there, up to sign; interpolation and trial division close
// the search. Returns false when no factor of degree d exists.
bool kronecker_factor(const QPol& f, const std::vector<mpz_class>& fi, int d, QPol& factor) {
    std::vector<mpz_class> xs;
    for (long k = 0; static_cast<int>(xs.size()) < d + 1; ++k) {
        long x = (k % 2 == 0) ? k / 2 : -(k / 2 + 1); // 0, -1, 1, -2, 2, ...
        xs.push_back(mpz_class(x));
    }
    std::vector<std::vector<mpz_class>> divs;
    std::size_t combos = 1;
    for (const auto& x : xs) {
        mpq_class val = eval_int_poly(fi, mpq_class(x));
        assert(val != 0); // rational roots were stripped before this point
        divs.push_back(positive_divisors(abs(val.get_num())));
        combos *= divs.back().size() * 2;
        if (combos > kMaxKroneckerCombos)
            throw LimitError("Kronecker factor search limit exceeded");
    }
    // The first point's divisor keeps a fixed sign: factors come in +/-
    // pairs and trial division does not care which one we find.
    std::vector<std::size_t> idx(xs.size(), 0);
    std::vector<int> sign(xs.size(), 1);
    while (true) {
        std::vector<mpq_class> ys;
        ys.reserve(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            ys.push_back(mpq_class(sign[i] * divs[i][idx[i]]));
        QPol g = interpolate(xs, ys);
        if (g.degree() == d) {
            auto [q, r] = f.divrem(g);
            if (r.is_zero()) {
                factor = g.monic();
                (void)q;
                return true;
            }
        }
        // advance the (divisor index, sign) odometer; position 0 keeps sign +1
        std::size_t i = 0;
        for (; i < xs.size(); ++i) {
            if (i > 0 && sign[i] == 1) { sign[i] = -1; break; }
            sign[i] = 1;
            if (++idx[i] < divs[i].size()) break;
            idx[i] = 0;
        }
        if (i == xs.size()) return false;
    }
}

// One monic proper factor of the monic polynomial f (degree >= 2), or
// false if f is irreducible. Complete for degree <= 6.
bool find_proper_factor(const QPol& f, QPol& factor) {
    int n = f.degree();
    assert(n >= 2);
    std::vector<mpz_class> fi = primitive_integer_form(f);
    mpq_class root;
    if (find_rational_root(fi, root)) {
        factor = QPol::var() - QPol(root);
        return true;
    }
    if (n <= 3) return false;
    if (n > 6)
        throw LimitError("irreducibility test supports degree <= 6, got degree " +
                         std::to_string(n));
    for (int d = 2; d <= n / 2; ++d)
        if (kronecker_factor(f, fi, d, factor)) return true;
    return false;
}

} // namespace

QPol::QPol(const mpq_class& c) {
    if (c != 0) c_.push_back(c);
}
QPol::QPol(const mpz_class& c) : QPol(mpq_class(c)) {}
QPol::QPol(long c) : QPol(mpq_class(c)) {}
QPol::QPol(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) { trim(); }

QPol QPol::var() { return monomial(1, 1); }

QPol QPol::monomial(const mpq_class& c, unsigned deg) {
    if (c == 0) return QPol();
    std::vector<mpq_class> v(deg + 1, mpq_class(0));
    v[deg] = c;
    return QPol(std::move(v));
}

void QPol::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

const mpq_class& QPol::lead() const {
    if (is_zero()) throw DomainError("lead coefficient of the zero polynomial");
    return c_.back();
}

mpq_class QPol::coeff(unsigned i) const {
    return i < c_.size() ? c_[i] : mpq_class(0);
}

bool QPol::is_monic() const { return !is_zero() && c_.back() == 1; }

QPol QPol::operator-() const {
    QPol r(*this);
    for (auto& c : r.c_) c = -c;
    return r;
}

QPol QPol::operator+(const QPol& o) const {
    std::vector<mpq_class> v(std::max(c_.size(), o.c_.size()), mpq_class(0));
    for (std::size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) v[i] += o.c_[i];
    return QPol(std::move(v));
}

QPol QPol::operator-(const QPol& o) const { return *this + (-o); }

QPol QPol::operator*(const QPol& o) const {
    if (is_zero() || o.is_zero()) return QPol();
    std::vector<mpq_class> v(c_.size() + o.c_.size() - 1, mpq_class(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
    return QPol(std::move(v));
}

QPol QPol::scaled(const mpq_class& s) const {
    if (s == 0) return QPol();
    QPol r(*this);
    for (auto& c : r.c_) c *= s;
    return r;
}

std::pair<QPol, QPol> QPol::divrem(const QPol& d) const {
    if (d.is_zero()) throw DomainError("polynomial division by zero");
    QPol rem(*this);
    if (rem.degree() < d.degree()) return {QPol(), rem};
    std::vector<mpq_class> q(rem.degree() - d.degree() + 1, mpq_class(0));
    while (!rem.is_zero() && rem.degree() >= d.degree()) {
        int k = rem.degree() - d.degree();
        mpq_class c = rem.lead() / d.lead();
        q[k] = c;
        rem = rem - (d * QPol::monomial(c, k));
    }
    return {QPol(std::move(q)), rem};
}

QPol QPol::monic() const {
    if (is_zero()) throw DomainError("monic form of the zero polynomial");
    return scaled(1 / lead());
}

QPol QPol::derivative() const {
    if (c_.size() <= 1) return QPol();
    std::vector<mpq_class> v(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * mpq_class(i);
    return QPol(std::move(v));
}

mpq_class QPol::eval(const mpq_class& x) const {
    mpq_class acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
}

QPol qpol_gcd(const QPol& a, const QPol& b) {
    QPol x = a, y = b;
    while (!y.is_zero()) {
        QPol r = x.divrem(y).second;
        x = y;
        y = r;
    }
    return x.is_zero() ? x : x.monic();
}

QPolXgcd qpol_xgcd(const QPol& a, const QPol& b) {
    QPol r0 = a, r1 = b;
    QPol s0(mpq_class(1)), s1, t0, t1(mpq_class(1));
    while (!r1.is_zero()) {
        auto [q, r2] = r0.divrem(r1);
        r0 = r1; r1 = r2;
        QPol s2 = s0 - q * s1, t2 = t0 - q * t1;
        s0 = s1; s1 = s2;
        t0 = t1; t1 = t2;
    }
    if (r0.is_zero()) return {QPol(), QPol(), QPol()};
    mpq_class scale = 1 / r0.lead();
    return {r0.scaled(scale), s0.scaled(scale), t0.scaled(scale)};
}

QPol qpol_div_exact(const QPol& a, const QPol& d) {
    auto [q, r] = a.divrem(d);
    if (!r.is_zero()) throw DomainError("exact polynomial division with remainder");
    return q;
}

QPol qpol_squarefree_part(const QPol& f) {
    if (f.is_zero()) throw DomainError("squarefree part of zero");
    if (f.is_constant()) return QPol(mpq_class(1));
    return qpol_div_exact(f, qpol_gcd(f, f.derivative())).monic();
}

bool qpol_is_irreducible(const QPol& f) {
    if (f.degree() < 1) return false;
    if (f.degree() == 1) return true;
    QPol dummy;
    return !find_proper_factor(f.monic(), dummy);
}

std::vector<std::pair<QPol, int>> qpol_factorize(const QPol& f) {
    if (f.is_zero()) throw DomainError("factorization of zero");
    std::vector<QPol> irred;
    std::vector<QPol> work{f.monic()};
    while (!work.empty()) {
        QPol g = work.back();
        work.pop_back();
        if (g.degree() < 1) continue;
        QPol factor;
        if (g.degree() == 1 || !find_proper_factor(g, factor)) {
            irred.push_back(g.monic());
            continue;
        }
        work.push_back(factor);
        work.push_back(qpol_div_exact(g, factor));
    }
    std::sort(irred.begin(), irred.end(),
              [](const QPol& a, const QPol& b) { return qpol_cmp(a, b) < 0; });
    std::vector<std::pair<QPol, int>> out;
    for (const auto& p : irred) {
        if (!out.empty() && out.back().first == p)
            ++out.back().second;
        else
            out.emplace_back(p, 1);
    }
    return out;
}

int qpol_cmp(const QPol& a, const QPol& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
    for (int i = a.degree(); i >= 0; --i) {
        mpq_class ca = a.coeff(i), cb = b.coeff(i);
        if (ca != cb) return ca < cb ? -1 : 1;
    }
    return 0;
}

namespace {

void skip_ws(const std::string& s, std::size_t& pos) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

mpz_class parse_nat(const std::string& s, std::size_t& pos) {
    skip_ws(s, pos);
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw ParseError("expected a number", start);
    return mpz_class(s.substr(start, pos - start));
}

QPol parse_poly_expr(const std::string& s, std::size_t& pos);

QPol parse_poly_primary(const std::string& s, std::size_t& pos) {
    skip_ws(s, pos);
    if (pos >= s.size()) throw ParseError("unexpected end of polynomial", pos);
    if (s[pos] == 'T') {
        ++pos;
        return QPol::var();
    }
    if (s[pos] == '(') {
        ++pos;
        QPol inner = parse_poly_expr(s, pos);
        skip_ws(s, pos);
        if (pos >= s.size() || s[pos] != ')') throw ParseError("expected ')'", pos);
        ++pos;
        return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
        mpz_class num = parse_nat(s, pos);
        std::size_t save = pos;
        skip_ws(s, pos);
        if (pos < s.size() && s[pos] == '/') {
            ++pos;
            skip_ws(s, pos);
            if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                mpz_class den = parse_nat(s, pos);
                if (den == 0) throw ParseError("zero denominator", save);
                mpq_class q(num, den);
                q.canonicalize();
                return QPol(q);
            }
            pos = save; // the '/' belongs to an enclosing construct
        } else {
            pos = save;
        }
        return QPol(mpq_class(num));
    }
    throw ParseError("expected 'T', a number, or '('", pos);
}

QPol parse_poly_factor(const std::string& s, std::size_t& pos) {
    QPol base = parse_poly_primary(s, pos);
    skip_ws(s, pos);
    if (pos < s.size() && s[pos] == '^') {
        ++pos;
        mpz_class e = parse_nat(s, pos);
        if (e > 64) throw ParseError("exponent too large", pos);
        QPol acc(mpq_class(1));
        for (long i = 0; i < e.get_si(); ++i) acc = acc * base;
        return acc;
    }
    return base;
}

QPol parse_poly_term(const std::string& s, std::size_t& pos) {
    QPol acc = parse_poly_factor(s, pos);
    while (true) {
        std::size_t save = pos;
        skip_ws(s, pos);
        if (pos < s.size() && s[pos] == '*') {
            ++pos;
            acc = acc * parse_poly_factor(s, pos);
        } else {
            pos = save;
            return acc;
        }
    }
}

QPol parse_poly_expr(const std::string& s, std::size_t& pos) {
    skip_ws(s, pos);
    bool neg = false;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
        neg = s[pos] == '-';
        ++pos;
    }
    QPol acc = parse_poly_term(s, pos);
    if (neg) acc = -acc;
    while (true) {
        std::size_t save = pos;
        skip_ws(s, pos);
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
            bool minus = s[pos] == '-';
            ++pos;
            QPol t = parse_poly_term(s, pos);
            acc = minus ? acc - t : acc + t;
        } else {
            pos = save;
            return acc;
        }
    }
}

std::string coeff_str(const mpq_class& c) {
    return c.get_str();
}

} // namespace

QPol parse_qpol(const std::string& text, std::size_t& pos) {
    return parse_poly_expr(text, pos);
}

QPol parse_qpol(const std::string& text) {
    std::size_t pos = 0;
    QPol p = parse_poly_expr(text, pos);
    skip_ws(text, pos);
    if (pos != text.size()) throw ParseError("trailing input after polynomial", pos);
    return p;
}

std::string QPol::to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
        mpq_class c = coeff(i);
        if (c == 0) continue;
        bool neg = c < 0;
        mpq_class a = abs(c);
        if (out.empty())
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        std::string mono;
        if (i == 0) {
            mono = coeff_str(a);
        } else {
            std::string var = (i == 1) ? "T" : "T^" + std::to_string(i);
            mono = (a == 1) ? var : coeff_str(a) + "*" + var;
        }
        out += mono;
    }
    return out;
}

} // namespace bezmod
