#include "bezmod/oracle.hpp"

#include "bezmod/error.hpp"

#include <algorithm>

namespace bezmod {

ModuleSpec ModuleSpec::free_module(const Backend& b, unsigned rank) {
    if (rank < 1) throw DomainError("free module rank must be at least 1");
    return ModuleSpec{Kind::Free, b, rank, RingElem::zero(b)};
}

ModuleSpec ModuleSpec::cyclic(const RingElem& c) {
    if (!c.backend().is_valuation())
        throw CapabilityError("cyclic quotients require a valuation backend");
    if (c.is_zero() || c.is_unit())
        throw DomainError("cyclic quotient modulus must be nonzero and not a unit");
    return ModuleSpec{Kind::Cyclic, c.backend(), 1, c};
}

ModuleSpec ModuleSpec::fraction_field(const Backend& b) {
    return ModuleSpec{Kind::FractionField, b, 1, RingElem::zero(b)};
}

std::string ModuleSpec::to_string() const {
    switch (kind) {
        case Kind::Free: return "free:" + std::to_string(rank);
        case Kind::Cyclic: return "cyclic:" + c.to_string();
        case Kind::FractionField: return "fraction_field";
    }
    return "?";
}

ModElem ModElem::zero(const ModuleSpec& m) {
    return ModElem{std::vector<RingElem>(m.components(), RingElem::zero(m.backend))};
}

std::string ModElem::to_string() const {
    if (comps.size() == 1) return comps[0].to_string();
    std::string out = "(";
    for (std::size_t i = 0; i < comps.size(); ++i)
        out += (i ? ", " : "") + comps[i].to_string();
    return out + ")";
}

namespace {

constexpr std::size_t kMaxUnknowns = 64;

ModElem scaled_elem(const ModElem& e, const RingElem& c) {
    ModElem r = e;
    for (auto& x : r.comps) x = x * c;
    return r;
}

void add_into(ModElem& acc, const ModElem& e) {
    for (std::size_t i = 0; i < acc.comps.size(); ++i) acc.comps[i] = acc.comps[i] + e.comps[i];
}

// multiplier a with v(a) = delta under the divisibility interpretation
RingElem index_multiplier(const GammaElem& delta, const Backend& b) {
    if (delta.is_infinite()) throw DomainError("Infinity index has no multiplier");
    if (!delta.is_integral())
        throw DomainError("index " + delta.to_string() + " is not realized by a ring element");
    (void)b;
    return delta.num();
}

} // namespace

LinearSystem to_linear_system(const PPFormula& f, const Assignment& params,
                              const ModuleSpec& m) {
    if (m.kind == ModuleSpec::Kind::FractionField)
        throw CapabilityError("fraction-field targets support only the index computation");
    if (f.backend != m.backend)
        throw BackendMismatch("formula backend " + f.backend.name() + " vs module over " +
                              m.backend.name());
    unsigned r = m.components();
    for (const auto& v : f.free_vars()) {
        auto it = params.find(v);
        if (it == params.end()) throw DomainError("free variable '" + v + "' unassigned");
        if (it->second.comps.size() != r)
            throw DomainError("value for '" + v + "' has wrong component count");
    }

    LinearSystem sys{f.backend, f.bound, f.bound.size(), {}, {}};
    std::map<Var, std::size_t> slot;
    for (std::size_t i = 0; i < f.bound.size(); ++i) slot[f.bound[i]] = i;
    std::size_t n_v = 0;
    for (const auto& a : f.atoms) n_v += a.is_eq() ? 0 : 1;
    std::size_t n = f.bound.size() + n_v;
    sys.coeff.assign(n, std::vector<RingElem>(f.atoms.size(), RingElem::zero(f.backend)));
    for (std::size_t i = 0; i < n_v; ++i) sys.unknowns.push_back("#z" + std::to_string(i));

    std::size_t zi = f.bound.size();
    for (std::size_t j = 0; j < f.atoms.size(); ++j) {
        const Atom& a = f.atoms[j];
        ModElem known = ModElem::zero(m);
        for (const auto& [v, c] : a.term.entries()) {
            auto it = slot.find(v);
            if (it != slot.end())
                sys.coeff[it->second][j] = c;
            else
                add_into(known, scaled_elem(params.at(v), c));
        }
        if (!a.is_eq()) sys.coeff[zi++][j] = -index_multiplier(*a.index, f.backend);
        for (auto& x : known.comps) x = -x;
        sys.rhs.push_back(std::move(known));
    }
    return sys;
}

namespace {

using Mat = std::vector<std::vector<RingElem>>;

// (row_i, row_j) := (a*row_i + b*row_j, c*row_i + d*row_j); ad - bc a unit
void combine_rows(Mat& M, std::size_t i, std::size_t j, const RingElem& a, const RingElem& b,
                  const RingElem& c, const RingElem& d) {
    for (std::size_t col = 0; col < M[i].size(); ++col) {
        RingElem x = M[i][col], y = M[j][col];
        M[i][col] = a * x + b * y;
        M[j][col] = c * x + d * y;
    }
}

void combine_cols(Mat& M, std::size_t i, std::size_t j, const RingElem& a, const RingElem& b,
                  const RingElem& c, const RingElem& d) {
    for (auto& row : M) {
        RingElem x = row[i], y = row[j];
        row[i] = a * x + b * y;
        row[j] = c * x + d * y;
    }
}

struct Diagonalized {
    Mat M;  // conditions x unknowns, diagonal with d1 | d2 | ...
    Mat B;  // conditions x components
    Mat Q;  // unknowns x unknowns, u = Q * u'
};

Diagonalized diagonalize(const LinearSystem& sys) {
    std::size_t n = sys.unknowns.size(), mc = sys.rhs.size();
    unsigned r = mc ? static_cast<unsigned>(sys.rhs[0].comps.size()) : 0;
    const Backend& bk = sys.backend;
    RingElem zero = RingElem::zero(bk), one = RingElem::one(bk);

    Diagonalized d;
    d.M.assign(mc, std::vector<RingElem>(n, zero));
    for (std::size_t i = 0; i < mc; ++i)
        for (std::size_t j = 0; j < n; ++j) d.M[i][j] = sys.coeff[j][i];
    d.B.assign(mc, std::vector<RingElem>(r, zero));
    for (std::size_t i = 0; i < mc; ++i)
        for (unsigned c = 0; c < r; ++c) d.B[i][c] = sys.rhs[i].comps[c];
    d.Q.assign(n, std::vector<RingElem>(n, zero));
    for (std::size_t i = 0; i < n; ++i) d.Q[i][i] = one;

    std::size_t dim = std::min(mc, n);
    for (std::size_t k = 0; k < dim; ++k) {
        std::size_t pi = mc, pj = n;
        for (std::size_t i = k; i < mc && pi == mc; ++i)
            for (std::size_t j = k; j < n; ++j)
                if (!d.M[i][j].is_zero()) {
                    pi = i;
                    pj = j;
                    break;
                }
        if (pi == mc) break;
        if (pi != k) {
            std::swap(d.M[pi], d.M[k]);
            std::swap(d.B[pi], d.B[k]);
        }
        if (pj != k) {
            for (auto& row : d.M) std::swap(row[pj], row[k]);
            for (auto& row : d.Q) std::swap(row[pj], row[k]);
        }
        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (std::size_t i = k + 1; i < mc; ++i) {
                if (d.M[i][k].is_zero()) continue;
                BezoutTriple t = gcd_bezout(d.M[k][k], d.M[i][k]);
                RingElem qk = div_exact(d.M[k][k], t.g), qi = div_exact(d.M[i][k], t.g);
                combine_rows(d.M, k, i, t.u, t.v, -qi, qk);
                combine_rows(d.B, k, i, t.u, t.v, -qi, qk);
                dirty = true;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                if (d.M[k][j].is_zero()) continue;
                BezoutTriple t = gcd_bezout(d.M[k][k], d.M[k][j]);
                RingElem qk = div_exact(d.M[k][k], t.g), qj = div_exact(d.M[k][j], t.g);
                combine_cols(d.M, k, j, t.u, t.v, -qj, qk);
                combine_cols(d.Q, k, j, t.u, t.v, -qj, qk);
                dirty = true;
            }
        }
    }

    // enforce the divisibility chain d1 | d2 | ...
    bool changed = true;
    int guard = 0;
    while (changed) {
        changed = false;
        if (++guard > 10000) throw Error("diagonalization failed to stabilize");
        for (std::size_t k = 0; k < dim; ++k) {
            for (std::size_t l = k + 1; l < dim; ++l) {
                const RingElem& dk = d.M[k][k];
                const RingElem& dl = d.M[l][l];
                if (divides(dk, dl)) continue;
                combine_cols(d.M, k, l, one, one, zero, one);
                combine_cols(d.Q, k, l, one, one, zero, one);
                BezoutTriple t = gcd_bezout(d.M[k][k], d.M[l][k]);
                RingElem qk = div_exact(d.M[k][k], t.g), ql = div_exact(d.M[l][k], t.g);
                combine_rows(d.M, k, l, t.u, t.v, -ql, qk);
                combine_rows(d.B, k, l, t.u, t.v, -ql, qk);
                RingElem w = div_exact(d.M[k][l], t.g);
                combine_cols(d.M, k, l, one, zero, -w, one);
                combine_cols(d.Q, k, l, one, zero, -w, one);
                changed = true;
            }
        }
    }
    return d;
}

} // namespace

SolveResult solvable(const LinearSystem& sys, const ModuleSpec& m) {
    if (m.kind == ModuleSpec::Kind::FractionField)
        throw CapabilityError("fraction-field targets support only the index computation");
    std::size_t n = sys.unknowns.size(), mc = sys.rhs.size();
    if (n > kMaxUnknowns)
        throw LimitError("linear system exceeds " + std::to_string(kMaxUnknowns) + " unknowns");
    unsigned r = m.components();
    const Backend& bk = sys.backend;
    RingElem zero = RingElem::zero(bk);
    bool cyc = m.kind == ModuleSpec::Kind::Cyclic;

    Diagonalized d = diagonalize(sys);
    std::size_t dim = std::min(mc, n);

    Mat uprime(n, std::vector<RingElem>(r, zero));
    for (std::size_t k = 0; k < mc; ++k) {
        RingElem dk = k < dim ? d.M[k][k] : zero;
        for (unsigned c = 0; c < r; ++c) {
            const RingElem& t = d.B[k][c];
            if (cyc) {
                BezoutTriple g = gcd_bezout(dk, m.c);
                if (!divides(g.g, t)) return {false, {}};
                if (!dk.is_zero()) uprime[k][c] = g.u * frac_div(t, g.g);
            } else {
                if (dk.is_zero()) {
                    if (!t.is_zero()) return {false, {}};
                } else {
                    if (!divides(dk, t)) return {false, {}};
                    uprime[k][c] = frac_div(t, dk);
                }
            }
        }
    }

    // u = Q * u'
    Mat u(n, std::vector<RingElem>(r, zero));
    for (std::size_t i = 0; i < n; ++i)
        for (unsigned c = 0; c < r; ++c) {
            RingElem s = zero;
            for (std::size_t j = 0; j < n; ++j) s = s + d.Q[i][j] * uprime[j][c];
            u[i][c] = s;
        }

    // witnesses are only reported after substitution back into the
    // untransformed system
    for (std::size_t j = 0; j < mc; ++j)
        for (unsigned c = 0; c < r; ++c) {
            RingElem s = zero;
            for (std::size_t i = 0; i < n; ++i) s = s + sys.coeff[i][j] * u[i][c];
            RingElem diff = s - sys.rhs[j].comps[c];
            bool ok = cyc ? divides(m.c, diff) : diff.is_zero();
            if (!ok) throw Error("internal: witness failed verification");
        }

    SolveResult res{true, {}};
    for (std::size_t i = 0; i < sys.n_bound; ++i)
        res.witness.emplace(sys.unknowns[i], ModElem{u[i]});
    return res;
}

bool eval_pp(const PPFormula& f, const Assignment& params, const ModuleSpec& m) {
    return solvable(to_linear_system(f, params, m), m).solvable;
}

namespace {

// subgroup {x : x.a = 0 & V_delta(x)} of a chain module, as a case tag
// plus exponent
struct SubDesc {
    enum class Kind { Zero, Power, Full } kind;
    long e = 0;
};

SubDesc describe(const SubgroupForm& s, const ModuleSpec& m, const RingElem& p) {
    LocalValue e = gamma_localize(s.delta, p);
    switch (m.kind) {
        case ModuleSpec::Kind::Free:
            if (!s.a.is_zero()) return {SubDesc::Kind::Zero, 0};
            if (e.is_infinite()) return {SubDesc::Kind::Zero, 0};
            return {SubDesc::Kind::Power, std::max(e.value(), 0L)};
        case ModuleSpec::Kind::FractionField:
            // Q(B) is divisible: V_delta(Q) = Q for every delta
            return s.a.is_zero() ? SubDesc{SubDesc::Kind::Full, 0}
                                 : SubDesc{SubDesc::Kind::Zero, 0};
        case ModuleSpec::Kind::Cyclic: {
            long k = valuation(p, m.c).value();
            long from_delta =
                e.is_infinite() ? k : std::clamp(e.value(), 0L, k);
            long from_torsion = 0;
            if (!s.a.is_zero()) {
                LocalValue va = valuation(p, s.a);
                from_torsion = std::clamp(k - va.value(), 0L, k);
            }
            return {SubDesc::Kind::Power, std::max(from_delta, from_torsion)};
        }
    }
    return {SubDesc::Kind::Zero, 0};
}

// subgroups of each shipped module form a chain, so the pair index is
// nontrivial exactly when phi's subgroup is not inside psi's
bool subset(const SubDesc& a, const SubDesc& b) {
    if (a.kind == SubDesc::Kind::Zero) return true;
    if (b.kind == SubDesc::Kind::Zero) return false;
    if (b.kind == SubDesc::Kind::Full) return true;
    if (a.kind == SubDesc::Kind::Full) return false;
    return a.e >= b.e;
}

} // namespace

bool pair_index_nontrivial(const SubgroupForm& phi, const SubgroupForm& psi,
                           const ModuleSpec& m) {
    if (!m.backend.is_valuation())
        throw CapabilityError("pair index computation requires a valuation backend");
    RingElem p = m.backend.prime();
    return !subset(describe(phi, m, p), describe(psi, m, p));
}

} // namespace bezmod
