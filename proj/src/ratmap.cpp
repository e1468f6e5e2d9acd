#include "fqdyn/ratmap.hpp"

#include <cmath>

namespace fqdyn {

Poly lift(const Poly& a, const FieldPtr& target) {
    if (a.ctx()->same_field(*target)) return a;
    std::vector<FElem> c;
    c.reserve(size_t(a.degree() + 1));
    for (int i = 0; i <= a.degree(); ++i) c.push_back(embed(a.coeff(i), target));
    return Poly::from_coeffs(target, c);
}

ProjPoint embed_point(const ProjPoint& x, const FieldPtr& target) {
    if (x.is_infinity()) return ProjPoint::infinity(target);
    return ProjPoint::finite(embed(x.value(), target));
}

RatMap::RatMap(const Poly& g, const Poly& h) {
    require_same_field(g.lc(), h.lc());
    if (h.is_zero()) raise(Errc::ZeroDenominator, "zero denominator");
    Poly gg = g, hh = h;
    Poly d = gcd(gg, hh);
    if (d.degree() > 0) {
        gg = gg / d;
        hh = hh / d;
    }
    FElem s = hh.lc().inv();
    g_ = gg * s;
    h_ = hh * s;
    d_ = std::max(g_.degree(), h_.degree());
    if (d_ < 1) raise(Errc::ConstantMap, "map is constant after reduction");
}

RatMap::RatMap(Poly g, Poly h, Trusted) : g_(std::move(g)), h_(std::move(h)) {
    d_ = std::max(g_.degree(), h_.degree());
}

ProjPoint eval_proj(const RatMap& R, const ProjPoint& x) {
    if (x.is_infinity()) {
        int dg = R.num().degree(), dh = R.den().degree();
        if (dg > dh) return ProjPoint::infinity(x.ctx());
        if (dg < dh) return ProjPoint::finite(x.ctx()->zero());
        FElem v = R.num().lc() / R.den().lc();
        return ProjPoint::finite(v.ctx()->same_field(*x.ctx()) && v.ctx()->m() == x.ctx()->m() ? v : embed(v, x.ctx()));
    }
    const FElem& a = x.value();
    FElem hv = eval(R.den(), a);
    if (hv.is_zero()) return ProjPoint::infinity(a.ctx());
    return ProjPoint::finite(eval(R.num(), a) / hv);
}

ProjPoint eval_proj(const RatMap& R, const FElem& x) { return eval_proj(R, ProjPoint::finite(x)); }

RatMap identity_map(const FieldPtr& ctx) { return RatMap(Poly::x(ctx), Poly::one(ctx)); }

namespace {

// sum_i P_i * g^i * h^(K-i) for K >= deg P: the cleared composition padded
// with the extra denominator power.
Poly clear_compose(const Poly& P, const Poly& g, const Poly& h, int K) {
    Poly out = compose_cleared(P, g, h);
    for (int i = P.degree(); i < K; ++i) out = out * h;
    return out;
}

} // namespace

RatMap compose(const RatMap& R, const RatMap& S, const Caps& caps) {
    if (!R.ctx()->same_field(*S.ctx())) raise(Errc::DomainError, "map field mismatch");
    const int64_t target = int64_t(R.degree()) * int64_t(S.degree());
    if (target > caps.degree_cap)
        raise(Errc::DegreeOverflow, "composition degree " + std::to_string(target) + " exceeds cap");
    const int K = R.degree();
    Poly num = clear_compose(R.num(), S.num(), S.den(), K);
    Poly den = clear_compose(R.den(), S.num(), S.den(), K);
    // Composition of nonconstant maps multiplies degrees, so the cleared pair
    // is already reduced; fall back to full reduction if that ever fails.
    int dmax = std::max(num.degree(), den.degree());
    if (dmax != target) return RatMap(num, den);
    FElem s = den.lc().inv();
    return RatMap(num * s, den * s, RatMap::Trusted{});
}

RatMap iterate(const RatMap& R, int n, const Caps& caps) {
    if (n < 0) raise(Errc::DomainError, "negative iterate");
    RatMap acc = identity_map(R.ctx());
    for (int i = 0; i < n; ++i) acc = compose(acc, R, caps);
    return acc;
}

namespace {

bool exponents_divisible(const Poly& f, int64_t p) {
    for (int i = 0; i <= f.degree(); ++i)
        if (i % p != 0 && !f.coeff(i).is_zero()) return false;
    return true;
}

} // namespace

PReduction p_reduction(const RatMap& R) {
    const int64_t p = R.ctx()->p();
    Poly g = R.num(), h = R.den();
    int e = 0;
    while (exponents_divisible(g, p) && exponents_divisible(h, p)) {
        g = pth_root(g);
        h = pth_root(h);
        ++e;
    }
    return PReduction{RatMap(g, h), e};
}

FElem to_reduced_value(const PReduction& red, const FElem& a) { return frobenius_inv(a, red.pexp); }

FElem to_reduced_value(const RatMap& R, const FElem& a) { return to_reduced_value(p_reduction(R), a); }

FElem from_reduced_value(const PReduction& red, const FElem& a) { return frobenius(a, red.pexp); }

std::pair<Poly, int> wronskian(const RatMap& reduced) {
    const Poly& g = reduced.num();
    const Poly& h = reduced.den();
    Poly W = derivative(g) * h - g * derivative(h);
    if (W.is_zero()) raise(Errc::InseparableUnreduced, "vanishing Wronskian: map is a p-th power");
    return {W, W.degree()};
}

int fiber_count(const RatMap& R, const FElem& beta) {
    const auto& bc = beta.ctx();
    Poly g = R.num(), h = R.den();
    if (!R.ctx()->same_field(*bc)) {
        if (bc->m() % R.ctx()->m() != 0) raise(Errc::NoEmbedding, "fiber point in incompatible field");
        g = lift(g, bc);
        h = lift(h, bc);
    }
    Poly F = g - h * beta;
    if (F.is_zero()) raise(Errc::Inconsistency, "constant map slipped through");
    if (F.degree() < 1) return 0;
    return distinct_root_count(F);
}

std::optional<FElem> finite_value_at_infinity(const RatMap& R) {
    int dg = R.num().degree(), dh = R.den().degree();
    if (dg > dh) return std::nullopt;
    if (dg < dh) return R.ctx()->zero();
    return R.num().lc(); // denominator is monic
}

bool monic_without_base_roots(const Poly& f) {
    if (f.degree() < 1 || !f.is_monic()) return false;
    const auto& ctx = f.ctx();
    BigInt q = 1;
    for (int i = 0; i < ctx->m(); ++i) q *= ctx->p();
    Poly xq = powmod(Poly::x(ctx), q, f);
    return gcd(xq - Poly::x(ctx), f).degree() == 0;
}

Poly pullback(const Poly& f, const RatMap& R, const Caps& caps) {
    if (!f.ctx()->same_field(*R.ctx())) raise(Errc::DomainError, "transform field mismatch");
    if (!monic_without_base_roots(f)) raise(Errc::NotInMq, "polynomial is not monic root-free");
    const int64_t target = int64_t(f.degree()) * int64_t(R.degree());
    if (target > caps.degree_cap)
        raise(Errc::DegreeOverflow, "transform degree " + std::to_string(target) + " exceeds cap");
    Poly out = clear_compose(f, R.num(), R.den(), f.degree());
    if (out.degree() != target) raise(Errc::Inconsistency, "transform degree dropped");
    return monic(out);
}

Poly pullback_iterate(const Poly& f, const RatMap& R, int n, const Caps& caps) {
    if (n < 0) raise(Errc::DomainError, "negative iterate");
    Poly acc = f;
    if (!monic_without_base_roots(acc)) raise(Errc::NotInMq, "polynomial is not monic root-free");
    for (int i = 0; i < n; ++i) acc = pullback(acc, R, caps);
    return acc;
}

// ---------------------------------------------------------------------------
// PGL(2, q)
// ---------------------------------------------------------------------------

Mobius Mobius::identity(const FieldPtr& ctx) {
    return Mobius{ctx->one(), ctx->zero(), ctx->zero(), ctx->one()};
}

Mobius mobius_inverse(const Mobius& A) {
    if (A.det().is_zero()) raise(Errc::SingularMatrix, "matrix is singular");
    return Mobius{A.d, -A.b, -A.c, A.a};
}

namespace {

// mu_A(x) = (a x + c) / (b x + d) as a rational map.
RatMap mobius_as_map(const Mobius& A) {
    if (A.det().is_zero()) raise(Errc::SingularMatrix, "matrix is singular");
    const auto& ctx = A.a.ctx();
    Poly num = Poly::from_coeffs(ctx, {A.c, A.a});
    Poly den = Poly::from_coeffs(ctx, {A.d, A.b});
    return RatMap(num, den);
}

} // namespace

Poly mobius_on_poly(const Mobius& A, const Poly& f) { return pullback(f, mobius_as_map(A)); }

FElem mobius_on_point(const Mobius& A, const FElem& alpha) {
    if (A.det().is_zero()) raise(Errc::SingularMatrix, "matrix is singular");
    const auto& xc = alpha.ctx();
    FElem a = embed(A.a, xc), b = embed(A.b, xc), c = embed(A.c, xc), d = embed(A.d, xc);
    FElem den = -b * alpha + a;
    if (den.is_zero()) raise(Errc::FixedPointClash, "point maps through infinity");
    return (d * alpha - c) / den;
}

RatMap mobius_on_map(const Mobius& A, const RatMap& R) {
    if (A.det().is_zero()) raise(Errc::SingularMatrix, "matrix is singular");
    const auto& ctx = R.ctx();
    if (!A.a.ctx()->same_field(*ctx)) raise(Errc::DomainError, "matrix entries outside the map field");
    Poly num = R.num() * A.a + R.den() * A.c;
    Poly den = R.num() * A.b + R.den() * A.d;
    return RatMap(num, den);
}

ConjugateResult conjugate_map(const Mobius& A, const Poly& g) {
    if (g.degree() < 1) raise(Errc::ConstantMap, "conjugating a constant");
    Mobius Ainv = mobius_inverse(A);
    RatMap gmap(g, Poly::one(g.ctx()));
    RatMap inner = compose(gmap, mobius_as_map(Ainv));
    RatMap out = mobius_on_map(A, inner);
    return ConjugateResult{out, out.is_polynomial()};
}

} // namespace fqdyn
