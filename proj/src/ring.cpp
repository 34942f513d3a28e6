#include "bezmod/ring.hpp"

#include "bezmod/error.hpp"
#include "intfact.hpp"

#include <cassert>
#include <cctype>

namespace bezmod {

long LocalValue::value() const {
    if (inf_) throw DomainError("infinite valuation has no finite value");
    return v_;
}

LocalValue LocalValue::operator+(const LocalValue& o) const {
    if (inf_ || o.inf_) return infinity();
    return LocalValue(v_ + o.v_);
}

std::string LocalValue::to_string() const {
    return inf_ ? "inf" : std::to_string(v_);
}

struct Backend::Rep {
    RingId id;
    mpz_class pz;
    QPol pp;
};

namespace {

void check_same(const Backend& a, const Backend& b, const char* op) {
    if (a != b)
        throw BackendMismatch(std::string(op) + ": operands from different backends (" +
                              a.name() + " vs " + b.name() + ")");
}

long z_val(const mpz_class& p, mpz_class n) {
    assert(n != 0);
    long v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

long p_val(const QPol& f, QPol n) {
    assert(!n.is_zero());
    long v = 0;
    while (true) {
        auto [q, r] = n.divrem(f);
        if (!r.is_zero()) return v;
        n = q;
        ++v;
    }
}

} // namespace

Backend Backend::z() {
    static const auto rep = std::make_shared<const Rep>(Rep{RingId::Z, 0, QPol()});
    return Backend(rep);
}

Backend Backend::q_poly() {
    static const auto rep = std::make_shared<const Rep>(Rep{RingId::QPoly, 0, QPol()});
    return Backend(rep);
}

Backend Backend::z_loc(const mpz_class& p) {
    mpz_class q = abs(p);
    if (!detail::probably_prime(q))
        throw DomainError("z_loc requires a prime, got " + p.get_str());
    return Backend(std::make_shared<const Rep>(Rep{RingId::ZLoc, q, QPol()}));
}

Backend Backend::q_poly_loc(const QPol& f) {
    if (!qpol_is_irreducible(f))
        throw DomainError("q_poly_loc requires an irreducible polynomial, got " + f.to_string());
    return Backend(std::make_shared<const Rep>(Rep{RingId::QPolyLoc, 0, f.monic()}));
}

Backend Backend::parse(const std::string& selector) {
    if (selector == "z") return z();
    if (selector == "q_poly") return q_poly();
    const std::string zp = "z_loc:", qp = "q_poly_loc:";
    if (selector.rfind(zp, 0) == 0) {
        mpz_class p;
        try {
            p = mpz_class(selector.substr(zp.size()));
        } catch (const std::invalid_argument&) {
            throw ParseError("z_loc needs an integer prime, got '" + selector + "'");
        }
        return z_loc(p);
    }
    if (selector.rfind(qp, 0) == 0) return q_poly_loc(parse_qpol(selector.substr(qp.size())));
    throw ParseError("unknown backend selector '" + selector + "'");
}

RingId Backend::id() const { return rep_->id; }
bool Backend::is_valuation() const { return rep_->id == RingId::ZLoc || rep_->id == RingId::QPolyLoc; }
bool Backend::is_poly_base() const { return rep_->id == RingId::QPoly || rep_->id == RingId::QPolyLoc; }

bool Backend::residue_fields_infinite() const { return is_poly_base(); }

bool Backend::jacobson_radical_zero() const { return !is_valuation(); }

const mpz_class& Backend::prime_z() const {
    if (rep_->id != RingId::ZLoc) throw CapabilityError("prime_z: not a Z localization");
    return rep_->pz;
}

const QPol& Backend::prime_poly() const {
    if (rep_->id != RingId::QPolyLoc) throw CapabilityError("prime_poly: not a Q[T] localization");
    return rep_->pp;
}

RingElem Backend::prime() const {
    if (rep_->id == RingId::ZLoc) return RingElem::of_int(*this, rep_->pz);
    if (rep_->id == RingId::QPolyLoc) return RingElem::of_poly(*this, rep_->pp);
    throw CapabilityError("prime: " + name() + " is not a valuation backend");
}

Backend Backend::global_base() const { return is_poly_base() ? q_poly() : z(); }

std::string Backend::name() const {
    switch (rep_->id) {
        case RingId::Z: return "z";
        case RingId::QPoly: return "q_poly";
        case RingId::ZLoc: return "z_loc:" + rep_->pz.get_str();
        case RingId::QPolyLoc: return "q_poly_loc:" + rep_->pp.to_string();
    }
    return "?";
}

bool Backend::operator==(const Backend& o) const {
    if (rep_ == o.rep_) return true;
    if (rep_->id != o.rep_->id) return false;
    return rep_->pz == o.rep_->pz && rep_->pp == o.rep_->pp;
}

void RingElem::normalize() {
    if (!b_.is_poly_base()) {
        if (zd_ == 0) throw DomainError("zero denominator");
        if (zd_ < 0) { zn_ = -zn_; zd_ = -zd_; }
        mpz_class g = ::gcd(zn_, zd_);
        if (g > 1) { zn_ /= g; zd_ /= g; }
        if (zn_ == 0) zd_ = 1;
        if (b_.id() == RingId::Z && zd_ != 1)
            throw DomainError(zn_.get_str() + "/" + zd_.get_str() + " is not an integer");
        if (b_.id() == RingId::ZLoc && zd_ % b_.prime_z() == 0)
            throw DomainError("denominator " + zd_.get_str() + " lies in the maximal ideal (" +
                              b_.prime_z().get_str() + ")");
    } else {
        if (pd_.is_zero()) throw DomainError("zero denominator");
        if (!pd_.is_monic()) {
            mpq_class s = 1 / pd_.lead();
            pn_ = pn_.scaled(s);
            pd_ = pd_.scaled(s);
        }
        QPol g = qpol_gcd(pn_, pd_);
        if (g.degree() > 0) {
            pn_ = qpol_div_exact(pn_, g);
            pd_ = qpol_div_exact(pd_, g);
        }
        if (pn_.is_zero()) pd_ = QPol(1L);
        if (b_.id() == RingId::QPoly && pd_ != QPol(1L))
            throw DomainError("(" + pn_.to_string() + ")/(" + pd_.to_string() +
                              ") is not a polynomial");
        if (b_.id() == RingId::QPolyLoc && pd_.divrem(b_.prime_poly()).second.is_zero())
            throw DomainError("denominator " + pd_.to_string() + " lies in the maximal ideal (" +
                              b_.prime_poly().to_string() + ")");
    }
}

RingElem RingElem::zero(const Backend& b) { return of_int(b, 0); }
RingElem RingElem::one(const Backend& b) { return of_int(b, 1); }

RingElem RingElem::of_int(const Backend& b, const mpz_class& n) {
    RingElem e(b);
    if (b.is_poly_base())
        e.pn_ = QPol(n);
    else
        e.zn_ = n;
    return e;
}

RingElem RingElem::of_poly(const Backend& b, const QPol& p) {
    if (!b.is_poly_base())
        throw CapabilityError("of_poly: " + b.name() + " has integer base ring");
    RingElem e(b);
    e.pn_ = p;
    return e;
}

RingElem RingElem::of_int_fraction(const Backend& b, const mpz_class& n, const mpz_class& d) {
    if (b.is_poly_base())
        throw CapabilityError("of_int_fraction: " + b.name() + " has polynomial base ring");
    RingElem e(b);
    e.zn_ = n;
    e.zd_ = d;
    e.normalize();
    return e;
}

RingElem RingElem::of_poly_fraction(const Backend& b, const QPol& n, const QPol& d) {
    if (!b.is_poly_base())
        throw CapabilityError("of_poly_fraction: " + b.name() + " has integer base ring");
    RingElem e(b);
    e.pn_ = n;
    e.pd_ = d;
    e.normalize();
    return e;
}

bool RingElem::is_zero() const { return b_.is_poly_base() ? pn_.is_zero() : zn_ == 0; }

bool RingElem::is_one() const {
    return b_.is_poly_base() ? (pn_ == QPol(1L) && pd_ == QPol(1L)) : (zn_ == 1 && zd_ == 1);
}

bool RingElem::is_unit() const {
    switch (b_.id()) {
        case RingId::Z: return zn_ == 1 || zn_ == -1;
        case RingId::QPoly: return !pn_.is_zero() && pn_.is_constant();
        case RingId::ZLoc: return zn_ != 0 && zn_ % b_.prime_z() != 0;
        case RingId::QPolyLoc:
            return !pn_.is_zero() && !pn_.divrem(b_.prime_poly()).second.is_zero();
    }
    return false;
}

RingElem RingElem::canonical() const {
    if (is_zero()) return *this;
    switch (b_.id()) {
        case RingId::Z: return of_int(b_, abs(zn_));
        case RingId::QPoly: return of_poly(b_, pn_.monic());
        case RingId::ZLoc: {
            long v = z_val(b_.prime_z(), zn_);
            mpz_class pk;
            mpz_pow_ui(pk.get_mpz_t(), b_.prime_z().get_mpz_t(), v);
            return of_int(b_, pk);
        }
        case RingId::QPolyLoc: {
            long v = p_val(b_.prime_poly(), pn_);
            QPol pk(1L);
            for (long i = 0; i < v; ++i) pk = pk * b_.prime_poly();
            return of_poly(b_, pk);
        }
    }
    return *this;
}

RingElem RingElem::operator+(const RingElem& o) const {
    check_same(b_, o.b_, "+");
    RingElem r(b_);
    if (b_.is_poly_base()) {
        r.pn_ = pn_ * o.pd_ + o.pn_ * pd_;
        r.pd_ = pd_ * o.pd_;
    } else {
        r.zn_ = zn_ * o.zd_ + o.zn_ * zd_;
        r.zd_ = zd_ * o.zd_;
    }
    r.normalize();
    return r;
}

RingElem RingElem::operator-(const RingElem& o) const { return *this + (-o); }

RingElem RingElem::operator*(const RingElem& o) const {
    check_same(b_, o.b_, "*");
    RingElem r(b_);
    if (b_.is_poly_base()) {
        r.pn_ = pn_ * o.pn_;
        r.pd_ = pd_ * o.pd_;
    } else {
        r.zn_ = zn_ * o.zn_;
        r.zd_ = zd_ * o.zd_;
    }
    r.normalize();
    return r;
}

RingElem RingElem::operator-() const {
    RingElem r(*this);
    if (b_.is_poly_base())
        r.pn_ = -r.pn_;
    else
        r.zn_ = -r.zn_;
    return r;
}

bool RingElem::operator==(const RingElem& o) const {
    if (b_ != o.b_) return false;
    return b_.is_poly_base() ? (pn_ == o.pn_ && pd_ == o.pd_) : (zn_ == o.zn_ && zd_ == o.zd_);
}

const mpz_class& RingElem::z_num() const { return zn_; }
const mpz_class& RingElem::z_den() const { return zd_; }
const QPol& RingElem::p_num() const { return pn_; }
const QPol& RingElem::p_den() const { return pd_; }

std::string RingElem::to_string() const {
    if (b_.is_poly_base()) {
        if (pd_ == QPol(1L)) return pn_.to_string();
        return "(" + pn_.to_string() + ")/(" + pd_.to_string() + ")";
    }
    if (zd_ == 1) return zn_.get_str();
    return zn_.get_str() + "/" + zd_.get_str();
}

RingElem frac_div(const RingElem& a, const RingElem& b) {
    check_same(a.backend(), b.backend(), "/");
    if (b.is_zero()) throw DomainError("division by zero");
    RingElem r(a.b_);
    if (a.b_.is_poly_base()) {
        r.pn_ = a.pn_ * b.pd_;
        r.pd_ = a.pd_ * b.pn_;
    } else {
        r.zn_ = a.zn_ * b.zd_;
        r.zd_ = a.zd_ * b.zn_;
    }
    r.normalize();
    return r;
}

BezoutTriple gcd_bezout(const RingElem& a, const RingElem& b) {
    check_same(a.backend(), b.backend(), "gcd_bezout");
    const Backend& bk = a.backend();
    BezoutTriple t{RingElem::zero(bk), RingElem::zero(bk), RingElem::zero(bk)};
    if (bk.is_valuation()) {
        if (a.is_zero() && b.is_zero()) return t;
        if (a.is_zero()) {
            t.g = b.canonical();
            t.v = frac_div(t.g, b);
        } else if (b.is_zero()) {
            t.g = a.canonical();
            t.u = frac_div(t.g, a);
        } else {
            RingElem p = bk.prime();
            LocalValue va = valuation(p, a), vb = valuation(p, b);
            if (va <= vb) {
                t.g = a.canonical();
                t.u = frac_div(t.g, a);
            } else {
                t.g = b.canonical();
                t.v = frac_div(t.g, b);
            }
        }
    } else if (bk.id() == RingId::Z) {
        mpz_class g, u, v;
        mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a.z_num().get_mpz_t(),
                   b.z_num().get_mpz_t());
        t.g = RingElem::of_int(bk, g);
        t.u = RingElem::of_int(bk, u);
        t.v = RingElem::of_int(bk, v);
    } else {
        QPolXgcd x = qpol_xgcd(a.p_num(), b.p_num());
        t.g = RingElem::of_poly(bk, x.g);
        t.u = RingElem::of_poly(bk, x.u);
        t.v = RingElem::of_poly(bk, x.v);
    }
    assert(t.g == a * t.u + b * t.v);
    return t;
}

RingElem gcd(const RingElem& a, const RingElem& b) { return gcd_bezout(a, b).g; }

RingElem lcm(const RingElem& a, const RingElem& b) {
    if (a.is_zero() || b.is_zero()) return RingElem::zero(a.backend());
    return div_exact(a * b, gcd(a, b)).canonical();
}

RingElem colon(const RingElem& a, const RingElem& b) {
    if (a.is_zero() && b.is_zero()) throw DomainError("colon(0, 0) is undefined");
    return div_exact(a, gcd(a, b)).canonical();
}

bool divides(const RingElem& a, const RingElem& b) {
    check_same(a.backend(), b.backend(), "divides");
    if (b.is_zero()) return true;
    if (a.is_zero()) return false;
    const Backend& bk = a.backend();
    if (bk.is_valuation()) {
        RingElem p = bk.prime();
        return valuation(p, a) <= valuation(p, b);
    }
    if (bk.is_poly_base()) return b.p_num().divrem(a.p_num()).second.is_zero();
    return b.z_num() % a.z_num() == 0;
}

RingElem div_exact(const RingElem& a, const RingElem& b) {
    if (!divides(b, a))
        throw DomainError("exact division: " + b.to_string() + " does not divide " +
                          a.to_string());
    return frac_div(a, b);
}

RingElem pow(const RingElem& a, unsigned long e) {
    RingElem r = RingElem::one(a.backend());
    for (unsigned long i = 0; i < e; ++i) r = r * a;
    return r;
}

GoodFactorization good_factorization(const RingElem& a, const RingElem& b) {
    check_same(a.backend(), b.backend(), "good_factorization");
    if (a.is_zero()) throw DomainError("good_factorization of 0");
    RingElem c = a, d = RingElem::one(a.backend());
    RingElem g = gcd(c, b);
    while (!g.is_unit()) {
        d = d * g;
        c = div_exact(c, g);
        g = gcd(c, b);
    }
    return {c.canonical(), d.canonical()};
}

bool rad_member(const RingElem& a, const RingElem& b) {
    check_same(a.backend(), b.backend(), "rad_member");
    if (b.is_zero()) {
        // rad(0) is the Jacobson radical: zero on the global backends,
        // the maximal ideal on the localizations.
        if (b.backend().jacobson_radical_zero()) return a.is_zero();
        return !a.is_unit();
    }
    if (b.is_unit()) return true;
    return good_factorization(b, a).c.is_unit();
}

LocalValue valuation(const RingElem& p, const RingElem& a) {
    check_same(p.backend(), a.backend(), "valuation");
    if (!is_prime_elem(p))
        throw DomainError("valuation at non-prime " + p.to_string());
    if (a.is_zero()) return LocalValue::infinity();
    if (p.backend().is_poly_base()) {
        QPol f = p.p_num().monic();
        return LocalValue(p_val(f, a.p_num()) - p_val(f, a.p_den()));
    }
    mpz_class q = abs(p.z_num());
    return LocalValue(z_val(q, a.z_num()) - z_val(q, a.z_den()));
}

bool is_prime_elem(const RingElem& p) {
    if (p.backend().is_poly_base()) {
        if (p.p_den() != QPol(1L)) return false;
        return qpol_is_irreducible(p.p_num());
    }
    if (p.z_den() != 1) return false;
    return detail::probably_prime(abs(p.z_num()));
}

std::vector<std::pair<RingElem, int>> factorize(const RingElem& a) {
    const Backend& bk = a.backend();
    if (bk.is_valuation())
        throw CapabilityError("factorize: global backends only, got " + bk.name());
    if (a.is_zero()) throw DomainError("factorize(0)");
    std::vector<std::pair<RingElem, int>> out;
    if (bk.is_poly_base()) {
        for (const auto& [f, e] : qpol_factorize(a.p_num()))
            out.emplace_back(RingElem::of_poly(bk, f), e);
    } else {
        if (abs(a.z_num()) > 1)
            for (const auto& [q, e] : detail::factor_positive(abs(a.z_num())))
                out.emplace_back(RingElem::of_int(bk, q), e);
    }
    return out;
}

RingElem squarefree_part(const RingElem& b) {
    const Backend& bk = b.backend();
    if (bk.is_valuation())
        throw CapabilityError("squarefree_part: global backends only");
    if (b.is_zero()) throw DomainError("squarefree_part(0)");
    if (bk.is_poly_base()) return RingElem::of_poly(bk, qpol_squarefree_part(b.p_num()));
    RingElem r = RingElem::one(bk);
    for (const auto& [q, e] : factorize(b)) r = r * q;
    return r;
}

RingElem fresh_prime(const Backend& b, const std::vector<RingElem>& avoid) {
    if (b.is_valuation()) throw CapabilityError("fresh_prime: global backends only");
    auto clean = [&](const RingElem& cand) {
        for (const auto& e : avoid) {
            if (e.is_zero()) continue;
            if (divides(cand, e)) return false;
        }
        return true;
    };
    if (b.is_poly_base()) {
        // T, T+1, T-1, T+2, T-2, ...
        for (long k = 0;; ++k) {
            long c = (k == 0) ? 0 : ((k % 2 == 1) ? (k + 1) / 2 : -(k / 2));
            RingElem cand = RingElem::of_poly(b, QPol::var() + QPol(mpq_class(c)));
            if (clean(cand)) return cand;
        }
    }
    mpz_class p = 2;
    while (true) {
        RingElem cand = RingElem::of_int(b, p);
        if (clean(cand)) return cand;
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    }
}

int cmp(const RingElem& a, const RingElem& b) {
    check_same(a.backend(), b.backend(), "cmp");
    if (a.backend().is_poly_base()) {
        return qpol_cmp(a.p_num() * b.p_den(), b.p_num() * a.p_den());
    }
    mpz_class l = a.z_num() * b.z_den(), r = b.z_num() * a.z_den();
    return ::cmp(l, r);
}

RingElem parse_ring_elem(const Backend& b, const std::string& text, std::size_t& pos) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (b.is_poly_base()) return RingElem::of_poly(b, parse_qpol(text, pos));
    bool neg = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        neg = text[pos] == '-';
        ++pos;
    }
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) throw ParseError("expected an integer literal", start);
    mpz_class n(text.substr(start, pos - start));
    if (neg) n = -n;
    // localized elements may carry a denominator away from the maximal ideal
    if (b.is_valuation() && pos + 1 < text.size() && text[pos] == '/' &&
        std::isdigit(static_cast<unsigned char>(text[pos + 1]))) {
        std::size_t dstart = ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        return RingElem::of_int_fraction(b, n, mpz_class(text.substr(dstart, pos - dstart)));
    }
    return RingElem::of_int(b, n);
}

RingElem parse_ring_elem(const Backend& b, const std::string& text) {
    std::size_t pos = 0;
    RingElem e = parse_ring_elem(b, text, pos);
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos != text.size()) throw ParseError("trailing input after ring element", pos);
    return e;
}

RingElem embed_into_localization(const RingElem& a, const Backend& loc) {
    if (!loc.is_valuation())
        throw CapabilityError("embed_into_localization: target must be a localization");
    if (a.backend().is_valuation() || a.backend().is_poly_base() != loc.is_poly_base())
        throw BackendMismatch("embed_into_localization: " + a.backend().name() + " into " +
                              loc.name());
    if (loc.is_poly_base()) return RingElem::of_poly(loc, a.p_num());
    return RingElem::of_int(loc, a.z_num());
}

} // namespace bezmod
