#include "bezmod/gamma.hpp"

#include "bezmod/error.hpp"

namespace bezmod {

GammaElem GammaElem::of(const RingElem& a) {
    return ratio(a, RingElem::one(a.backend()));
}

GammaElem GammaElem::ratio(const RingElem& n, const RingElem& d) {
    if (d.is_zero()) throw DomainError("gamma ratio with v(0) denominator");
    if (n.is_zero()) return infinity(n.backend());
    RingElem g = gcd(n, d);
    return GammaElem(n.backend(), false, div_exact(n, g).canonical(),
                     div_exact(d, g).canonical());
}

GammaElem GammaElem::infinity(const Backend& b) {
    return GammaElem(b, true, RingElem::zero(b), RingElem::one(b));
}

GammaElem GammaElem::one(const Backend& b) {
    return GammaElem(b, false, RingElem::one(b), RingElem::one(b));
}

bool GammaElem::is_one() const { return !inf_ && n_.is_unit() && d_.is_unit(); }

bool GammaElem::is_integral() const { return !inf_ && d_.is_unit(); }

const RingElem& GammaElem::num() const {
    if (inf_) throw DomainError("Infinity has no numerator");
    return n_;
}

const RingElem& GammaElem::den() const {
    if (inf_) throw DomainError("Infinity has no denominator");
    return d_;
}

GammaElem GammaElem::operator*(const GammaElem& o) const {
    if (b_ != o.b_) throw BackendMismatch("gamma *: different backends");
    if (inf_ || o.inf_) return infinity(b_);
    return ratio(n_ * o.n_, d_ * o.d_);
}

GammaElem GammaElem::operator/(const GammaElem& o) const {
    if (b_ != o.b_) throw BackendMismatch("gamma /: different backends");
    if (o.inf_) throw DomainError("division by Infinity in Gamma");
    if (inf_) return infinity(b_);
    return ratio(n_ * o.d_, d_ * o.n_);
}

GammaElem GammaElem::inverse() const {
    if (inf_) throw DomainError("Infinity is not invertible in Gamma");
    return ratio(d_, n_);
}

bool GammaElem::operator==(const GammaElem& o) const {
    if (b_ != o.b_) return false;
    if (inf_ || o.inf_) return inf_ == o.inf_;
    return n_ == o.n_ && d_ == o.d_;
}

std::string GammaElem::to_string() const {
    if (inf_) return "inf";
    if (d_.is_unit()) return "v(" + n_.to_string() + ")";
    return "v(" + n_.to_string() + ")/v(" + d_.to_string() + ")";
}

bool gamma_leq(const GammaElem& x, const GammaElem& y) {
    if (x.backend() != y.backend()) throw BackendMismatch("gamma_leq: different backends");
    if (y.is_infinite()) return true;
    if (x.is_infinite()) return false;
    return divides(x.num() * y.den(), y.num() * x.den());
}

GammaElem gamma_meet(const GammaElem& x, const GammaElem& y) {
    if (x.backend() != y.backend()) throw BackendMismatch("gamma_meet: different backends");
    if (x.is_infinite()) return y;
    if (y.is_infinite()) return x;
    return GammaElem::ratio(gcd(x.num() * y.den(), y.num() * x.den()), x.den() * y.den());
}

GammaElem gamma_join(const GammaElem& x, const GammaElem& y) {
    if (x.backend() != y.backend()) throw BackendMismatch("gamma_join: different backends");
    if (x.is_infinite() || y.is_infinite()) return GammaElem::infinity(x.backend());
    return GammaElem::ratio(lcm(x.num() * y.den(), y.num() * x.den()), x.den() * y.den());
}

LocalValue gamma_localize(const GammaElem& x, const RingElem& p) {
    if (x.is_infinite()) return LocalValue::infinity();
    LocalValue n = valuation(p, x.num()), d = valuation(p, x.den());
    return LocalValue(n.value() - d.value());
}

} // namespace bezmod
