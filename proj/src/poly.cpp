#include "fqdyn/poly.hpp"

#include <algorithm>
#include <map>

#include "fqdyn/rng.hpp"

namespace fqdyn {

namespace {

int zi(const FieldCtx& ctx, const int64_t* coeff) {
    return ctx.zech()->log_[size_t(ctx.pack(coeff))];
}

std::vector<int32_t> to_logs(const FieldCtx& ctx, const std::vector<int64_t>& flat, int n) {
    const int m = ctx.m();
    std::vector<int32_t> out(size_t(n), 0);
    for (int i = 0; i < n; ++i) out[size_t(i)] = zi(ctx, flat.data() + size_t(i) * size_t(m));
    return out;
}

void ztrim(std::vector<int32_t>& a) {
    while (!a.empty() && a.back() == ZechTable::kZero) a.pop_back();
}

// multiply in place by a low-degree factor, scanning from the top so that
// every read sees the pre-update coefficients
void zmul_inplace_small(const ZechTable& zt, std::vector<int32_t>& a, const std::vector<int32_t>& b) {
    if (a.empty() || b.empty()) {
        a.clear();
        return;
    }
    const int na = int(a.size()), nb = int(b.size());
    a.resize(size_t(na + nb - 1), ZechTable::kZero);
    for (int i = na + nb - 2; i >= 0; --i) {
        int32_t s = ZechTable::kZero;
        const int jlo = std::max(0, i - na + 1), jhi = std::min(nb - 1, i);
        for (int j = jlo; j <= jhi; ++j) s = zt.add(s, zt.mul(b[size_t(j)], a[size_t(i - j)]));
        a[size_t(i)] = s;
    }
    ztrim(a);
}

std::vector<int32_t> zmul(const ZechTable& zt, const std::vector<int32_t>& a, const std::vector<int32_t>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<int32_t> out(a.size() + b.size() - 1, ZechTable::kZero);
    const int64_t qm1 = zt.q - 1;
    for (size_t i = 0; i < a.size(); ++i) {
        const int32_t ai = a[i];
        if (ai == ZechTable::kZero) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            const int32_t bj = b[j];
            if (bj == ZechTable::kZero) continue;
            int64_t s = int64_t(ai) + bj;
            if (s >= qm1) s -= qm1;
            out[i + j] = zt.add(out[i + j], int32_t(s));
        }
    }
    ztrim(out);
    return out;
}

// a := a mod b (b nonzero), quotient optionally collected
void zrem_inplace(const ZechTable& zt, std::vector<int32_t>& a, const std::vector<int32_t>& b,
                  std::vector<int32_t>* quot = nullptr) {
    const int64_t qm1 = zt.q - 1;
    const int32_t linv = zt.inv(b.back());
    if (quot) {
        if (a.size() >= b.size())
            quot->assign(a.size() - b.size() + 1, ZechTable::kZero);
        else
            quot->clear();
    }
    while (a.size() >= b.size()) {
        const int32_t c = zt.mul(a.back(), linv);
        const size_t shift = a.size() - b.size();
        if (c != ZechTable::kZero) {
            if (quot) (*quot)[shift] = c;
            for (size_t j = 0; j + 1 < b.size(); ++j) {
                const int32_t bj = b[j];
                if (bj == ZechTable::kZero) continue;
                int64_t s = int64_t(c) + bj;
                if (s >= qm1) s -= qm1;
                a[shift + j] = zt.sub(a[shift + j], int32_t(s));
            }
        }
        a.pop_back();
        ztrim(a);
        if (a.empty()) break;
    }
    if (quot) ztrim(*quot);
}

} // namespace

// ---------------------------------------------------------------------------
// Poly basics
// ---------------------------------------------------------------------------

void Poly::trim() {
    const int m = ctx_->m();
    while (n_ > 0 && ctx_->el_is_zero(c_.data() + size_t(n_ - 1) * size_t(m))) --n_;
    c_.resize(size_t(n_) * size_t(m));
}

Poly Poly::constant(const FElem& c) {
    Poly p(c.ctx());
    if (!c.is_zero()) {
        p.c_ = c.coeffs();
        p.n_ = 1;
    }
    return p;
}

Poly Poly::x(const FieldPtr& ctx) {
    Poly p(ctx);
    p.n_ = 2;
    p.c_.assign(size_t(2 * ctx->m()), 0);
    p.c_[size_t(ctx->m())] = 1;
    return p;
}

Poly Poly::from_coeffs(const FieldPtr& ctx, const std::vector<FElem>& coeffs) {
    Poly p(ctx);
    p.n_ = int(coeffs.size());
    p.c_.assign(size_t(p.n_) * size_t(ctx->m()), 0);
    for (int i = 0; i < p.n_; ++i) {
        if (!coeffs[size_t(i)].ctx()->same_field(*ctx)) raise(Errc::DomainError, "coefficient field mismatch");
        std::copy(coeffs[size_t(i)].coeffs().begin(), coeffs[size_t(i)].coeffs().end(),
                  p.c_.begin() + size_t(i) * size_t(ctx->m()));
    }
    p.trim();
    return p;
}

Poly Poly::from_int_coeffs(const FieldPtr& ctx, const std::vector<int64_t>& coeffs) {
    std::vector<FElem> v;
    v.reserve(coeffs.size());
    for (int64_t c : coeffs) v.push_back(ctx->from_int(c));
    return from_coeffs(ctx, v);
}

Poly Poly::linear_root(const FElem& r) {
    return from_coeffs(r.ctx(), {-r, r.ctx()->one()});
}

bool Poly::is_one() const { return n_ == 1 && ctx_->el_is_one(c_.data()); }

bool Poly::is_monic() const { return n_ > 0 && ctx_->el_is_one(c_.data() + size_t(n_ - 1) * size_t(ctx_->m())); }

FElem Poly::coeff(int i) const {
    if (i < 0 || i >= n_) return ctx_->zero();
    const int m = ctx_->m();
    return FElem(ctx_, std::vector<int64_t>(c_.begin() + size_t(i) * size_t(m), c_.begin() + size_t(i + 1) * size_t(m)));
}

FElem Poly::lc() const {
    if (n_ == 0) return ctx_->zero();
    return coeff(n_ - 1);
}

static void require_same_ctx(const Poly& a, const Poly& b) {
    if (!a.ctx()->same_field(*b.ctx())) raise(Errc::DomainError, "polynomials live in different fields");
}

Poly Poly::operator+(const Poly& o) const {
    require_same_ctx(*this, o);
    const int m = ctx_->m();
    Poly r(ctx_);
    r.n_ = std::max(n_, o.n_);
    r.c_.assign(size_t(r.n_) * size_t(m), 0);
    std::copy(c_.begin(), c_.end(), r.c_.begin());
    for (int i = 0; i < o.n_; ++i)
        ctx_->el_add(r.c_.data() + size_t(i) * size_t(m), o.c_.data() + size_t(i) * size_t(m),
                     r.c_.data() + size_t(i) * size_t(m));
    r.trim();
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    require_same_ctx(*this, o);
    const int m = ctx_->m();
    Poly r(ctx_);
    r.n_ = std::max(n_, o.n_);
    r.c_.assign(size_t(r.n_) * size_t(m), 0);
    std::copy(c_.begin(), c_.end(), r.c_.begin());
    for (int i = 0; i < o.n_; ++i)
        ctx_->el_sub(r.c_.data() + size_t(i) * size_t(m), o.c_.data() + size_t(i) * size_t(m),
                     r.c_.data() + size_t(i) * size_t(m));
    r.trim();
    return r;
}

Poly Poly::operator-() const {
    const int m = ctx_->m();
    Poly r(ctx_);
    r.n_ = n_;
    r.c_.assign(size_t(n_) * size_t(m), 0);
    for (int i = 0; i < n_; ++i)
        ctx_->el_neg(c_.data() + size_t(i) * size_t(m), r.c_.data() + size_t(i) * size_t(m));
    return r;
}

Poly Poly::operator*(const FElem& s) const {
    if (!s.ctx()->same_field(*ctx_)) raise(Errc::DomainError, "scalar field mismatch");
    if (s.is_zero() || n_ == 0) return Poly(ctx_);
    const int m = ctx_->m();
    Poly r(ctx_);
    r.n_ = n_;
    r.c_.assign(size_t(n_) * size_t(m), 0);
    for (int i = 0; i < n_; ++i)
        ctx_->el_mul(c_.data() + size_t(i) * size_t(m), s.data(), r.c_.data() + size_t(i) * size_t(m));
    r.trim();
    return r;
}

bool Poly::operator==(const Poly& o) const {
    require_same_ctx(*this, o);
    return n_ == o.n_ && c_ == o.c_;
}

Poly Poly::shifted(int k) const {
    if (n_ == 0 || k == 0) return *this;
    const int m = ctx_->m();
    Poly r(ctx_);
    r.n_ = n_ + k;
    r.c_.assign(size_t(r.n_) * size_t(m), 0);
    std::copy(c_.begin(), c_.end(), r.c_.begin() + size_t(k) * size_t(m));
    return r;
}

// ---------------------------------------------------------------------------
// Multiplication / division kernels
// ---------------------------------------------------------------------------

Poly mul_impl_(const Poly& a, const Poly& b) {
    const FieldCtx& ctx = *a.ctx_;
    const int m = ctx.m();
    if (a.n_ == 0 || b.n_ == 0) return Poly(a.ctx_);
    Poly r(a.ctx_);
    if (const ZechTable* zt = ctx.zech()) {
        auto za = to_logs(ctx, a.c_, a.n_);
        auto zb = to_logs(ctx, b.c_, b.n_);
        auto zr = zmul(*zt, za, zb);
        r.n_ = int(zr.size());
        r.c_.assign(size_t(r.n_) * size_t(m), 0);
        for (int i = 0; i < r.n_; ++i)
            if (zr[size_t(i)] != ZechTable::kZero) ctx.unpack(zt->exp_[size_t(zr[size_t(i)])], r.c_.data() + size_t(i) * size_t(m));
        return r;
    }
    r.n_ = a.n_ + b.n_ - 1;
    r.c_.assign(size_t(r.n_) * size_t(m), 0);
    if (m == 1) {
        const Barrett& br = ctx.barrett();
        const int64_t p = ctx.p();
        for (int i = 0; i < a.n_; ++i) {
            const uint64_t ai = uint64_t(a.c_[size_t(i)]);
            if (!ai) continue;
            for (int j = 0; j < b.n_; ++j) {
                const uint64_t bj = uint64_t(b.c_[size_t(j)]);
                if (!bj) continue;
                int64_t t = r.c_[size_t(i + j)] + int64_t(br.mul(ai, bj));
                r.c_[size_t(i + j)] = t >= p ? t - p : t;
            }
        }
    } else {
        std::vector<int64_t> tmp(size_t(m), 0);
        for (int i = 0; i < a.n_; ++i) {
            const int64_t* ai = a.c_.data() + size_t(i) * size_t(m);
            if (ctx.el_is_zero(ai)) continue;
            for (int j = 0; j < b.n_; ++j) {
                const int64_t* bj = b.c_.data() + size_t(j) * size_t(m);
                if (ctx.el_is_zero(bj)) continue;
                ctx.el_mul(ai, bj, tmp.data());
                int64_t* out = r.c_.data() + size_t(i + j) * size_t(m);
                ctx.el_add(out, tmp.data(), out);
            }
        }
    }
    r.trim();
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    require_same_ctx(*this, o);
    return mul_impl_(*this, o);
}

void divrem_impl_(const Poly& a, const Poly& b, Poly* qout, Poly* rout) {
    const FieldCtx& ctx = *a.ctx_;
    const int m = ctx.m();
    if (b.n_ == 0) raise(Errc::DivisionByZeroPoly, "division by the zero polynomial");
    if (const ZechTable* zt = ctx.zech()) {
        auto za = to_logs(ctx, a.c_, a.n_);
        auto zb = to_logs(ctx, b.c_, b.n_);
        std::vector<int32_t> zq;
        zrem_inplace(*zt, za, zb, &zq);
        auto unpack_poly = [&](const std::vector<int32_t>& zz) {
            Poly r(a.ctx_);
            r.n_ = int(zz.size());
            r.c_.assign(size_t(r.n_) * size_t(m), 0);
            for (int i = 0; i < r.n_; ++i)
                if (zz[size_t(i)] != ZechTable::kZero)
                    ctx.unpack(zt->exp_[size_t(zz[size_t(i)])], r.c_.data() + size_t(i) * size_t(m));
            return r;
        };
        if (qout) *qout = unpack_poly(zq);
        if (rout) *rout = unpack_poly(za);
        return;
    }
    Poly rem = a;
    Poly q(a.ctx_);
    if (a.n_ >= b.n_) {
        q.n_ = a.n_ - b.n_ + 1;
        q.c_.assign(size_t(q.n_) * size_t(m), 0);
    }
    std::vector<int64_t> lcinv(size_t(m), 0), c(size_t(m), 0), tmp(size_t(m), 0);
    ctx.el_inv(b.c_.data() + size_t(b.n_ - 1) * size_t(m), lcinv.data());
    while (rem.n_ >= b.n_) {
        ctx.el_mul(rem.c_.data() + size_t(rem.n_ - 1) * size_t(m), lcinv.data(), c.data());
        const int shift = rem.n_ - b.n_;
        if (!ctx.el_is_zero(c.data())) {
            if (q.n_ > 0) std::copy(c.begin(), c.end(), q.c_.begin() + size_t(shift) * size_t(m));
            for (int j = 0; j + 1 < b.n_; ++j) {
                const int64_t* bj = b.c_.data() + size_t(j) * size_t(m);
                if (ctx.el_is_zero(bj)) continue;
                ctx.el_mul(c.data(), bj, tmp.data());
                int64_t* out = rem.c_.data() + size_t(shift + j) * size_t(m);
                ctx.el_sub(out, tmp.data(), out);
            }
        }
        --rem.n_;
        rem.c_.resize(size_t(rem.n_) * size_t(m));
        rem.trim();
        if (rem.n_ == 0) break;
    }
    if (qout) {
        q.trim();
        *qout = std::move(q);
    }
    if (rout) *rout = std::move(rem);
}

std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
    require_same_ctx(a, b);
    Poly q, r;
    divrem_impl_(a, b, &q, &r);
    return {std::move(q), std::move(r)};
}

Poly operator/(const Poly& a, const Poly& b) {
    require_same_ctx(a, b);
    Poly q;
    divrem_impl_(a, b, &q, nullptr);
    return q;
}

Poly operator%(const Poly& a, const Poly& b) {
    require_same_ctx(a, b);
    Poly r;
    divrem_impl_(a, b, nullptr, &r);
    return r;
}

Poly monic(const Poly& a) {
    if (a.is_zero() || a.is_monic()) return a;
    return a * a.lc().inv();
}

Poly gcd(Poly a, Poly b) {
    require_same_ctx(a, b);
    const FieldCtx& ctx = *a.ctx();
    if (const ZechTable* zt = ctx.zech()) {
        const int m = ctx.m();
        auto za = to_logs(ctx, a.c_, a.n_);
        auto zb = to_logs(ctx, b.c_, b.n_);
        while (!zb.empty()) {
            zrem_inplace(*zt, za, zb);
            std::swap(za, zb);
        }
        if (!za.empty()) {
            // make monic in log domain
            const int32_t linv = zt->inv(za.back());
            for (auto& v : za) v = zt->mul(v, linv);
        }
        Poly r(a.ctx());
        r.n_ = int(za.size());
        r.c_.assign(size_t(r.n_) * size_t(m), 0);
        for (int i = 0; i < r.n_; ++i)
            if (za[size_t(i)] != ZechTable::kZero)
                ctx.unpack(zt->exp_[size_t(za[size_t(i)])], r.c_.data() + size_t(i) * size_t(m));
        return r;
    }
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

Poly compose_cleared(const Poly& P, const Poly& g, const Poly& h) {
    if (P.is_zero()) return P;
    if (!P.ctx()->same_field(*g.ctx()) || !P.ctx()->same_field(*h.ctx()))
        raise(Errc::DomainError, "composition field mismatch");
    const FieldCtx& ctx = *P.ctx();
    const int K = P.degree();
    const ZechTable* zt = ctx.zech();
    if (zt && K >= 8) {
        // Horner entirely in the log domain with in-place updates
        const int m = ctx.m();
        auto plog = [&](const Poly& p) {
            std::vector<int32_t> out(size_t(p.degree() + 1));
            for (int i = 0; i <= p.degree(); ++i) out[size_t(i)] = zt->log_[size_t(ctx.pack(p.coeff_data(i)))];
            return out;
        };
        std::vector<int32_t> zg = plog(g), zh = plog(h), zF = plog(P);
        ztrim(zg);
        ztrim(zh);
        std::vector<int32_t> acc{zF[size_t(K)]};
        ztrim(acc);
        std::vector<int32_t> hp = zh;
        const size_t final_size = size_t(K) * size_t(std::max(int(zg.size()), int(zh.size()))) + 2;
        acc.reserve(final_size);
        hp.reserve(final_size);
        for (int i = K - 1; i >= 0; --i) {
            zmul_inplace_small(*zt, acc, zg);
            const int32_t ci = zF[size_t(i)];
            if (ci != ZechTable::kZero) {
                if (acc.size() < hp.size()) acc.resize(hp.size(), ZechTable::kZero);
                for (size_t j = 0; j < hp.size(); ++j)
                    if (hp[j] != ZechTable::kZero) acc[j] = zt->add(acc[j], zt->mul(ci, hp[j]));
                ztrim(acc);
            }
            if (i > 0) zmul_inplace_small(*zt, hp, zh);
        }
        Poly r(P.ctx());
        r.n_ = int(acc.size());
        r.c_.assign(size_t(r.n_) * size_t(m), 0);
        for (int i = 0; i < r.n_; ++i)
            if (acc[size_t(i)] != ZechTable::kZero)
                ctx.unpack(zt->exp_[size_t(acc[size_t(i)])], r.c_.data() + size_t(i) * size_t(m));
        return r;
    }
    Poly acc = Poly::constant(P.coeff(K));
    Poly hp = h;
    for (int i = K - 1; i >= 0; --i) {
        acc = acc * g + hp * P.coeff(i);
        if (i > 0) hp = hp * h;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Calculus and radicals
// ---------------------------------------------------------------------------

Poly derivative(const Poly& a) {
    if (a.degree() <= 0) return Poly(a.ctx());
    const auto& ctx = a.ctx();
    std::vector<FElem> out;
    out.reserve(size_t(a.degree()));
    for (int i = 1; i <= a.degree(); ++i) out.push_back(a.coeff(i) * ctx->from_int(i));
    return Poly::from_coeffs(ctx, out);
}

Poly pth_root(const Poly& a) {
    const auto& ctx = a.ctx();
    const int64_t p = ctx->p();
    if (a.is_zero()) return a;
    std::vector<FElem> out(size_t(a.degree() / p) + 1, ctx->zero());
    for (int i = 0; i <= a.degree(); ++i) {
        FElem c = a.coeff(i);
        if (c.is_zero()) continue;
        if (i % p != 0) raise(Errc::NotAPthPower, "exponent " + std::to_string(i) + " not divisible by p");
        out[size_t(i / int(p))] = frobenius_inv(c, 1);
    }
    return Poly::from_coeffs(ctx, out);
}

Poly radical(const Poly& a) {
    if (a.is_zero()) raise(Errc::ZeroPolynomial, "radical of the zero polynomial");
    Poly f = monic(a);
    if (f.degree() == 0) return f;
    Poly d = derivative(f);
    if (d.is_zero()) return radical(pth_root(f));
    Poly g = gcd(f, d);
    Poly v = f / g; // product of the distinct factors with multiplicity prime to p
    // strip v-factors entirely; what is left has all multiplicities divisible by p
    Poly b = std::move(g);
    for (;;) {
        Poly h = gcd(b, v);
        if (h.degree() == 0) break;
        b = b / h;
    }
    if (b.degree() == 0) return v;
    return monic(v * radical(pth_root(b)));
}

int distinct_root_count(const Poly& a) {
    if (a.is_zero()) raise(Errc::ZeroPolynomial, "root count of the zero polynomial");
    return radical(a).degree();
}

FElem eval(const Poly& a, const FElem& x) {
    const auto& pc = a.ctx();
    const auto& xc = x.ctx();
    if (pc->same_field(*xc)) {
        FElem acc = xc->zero();
        for (int i = a.degree(); i >= 0; --i) acc = acc * x + a.coeff(i);
        return acc;
    }
    if (pc->p() != xc->p()) raise(Errc::NoEmbedding, "different characteristic");
    if (xc->m() % pc->m() == 0) {
        FElem acc = xc->zero();
        for (int i = a.degree(); i >= 0; --i) acc = acc * x + embed(a.coeff(i), xc);
        return acc;
    }
    if (pc->m() % xc->m() == 0) return eval(a, embed(x, pc));
    raise(Errc::NoEmbedding, "incompatible fields in eval");
}

Poly powmod(const Poly& base, const BigInt& e, const Poly& mod) {
    if (e < 0) raise(Errc::DomainError, "negative exponent");
    Poly acc = Poly::one(base.ctx());
    if (e == 0) return acc % mod;
    Poly b = base % mod;
    const int bits = int(boost::multiprecision::msb(e));
    for (int i = bits; i >= 0; --i) {
        acc = (acc * acc) % mod;
        if (boost::multiprecision::bit_test(e, unsigned(i))) acc = (acc * b) % mod;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

namespace {

BigInt field_size(const FieldCtx& ctx) {
    BigInt q = 1;
    for (int i = 0; i < ctx.m(); ++i) q *= ctx.p();
    return q;
}

// h := h^q mod f through repeated p-th powers.
Poly q_power_mod(const Poly& h, const Poly& f) {
    Poly r = h;
    const auto& ctx = f.ctx();
    for (int i = 0; i < ctx->m(); ++i) r = powmod(r, BigInt(ctx->p()), f);
    return r;
}

Poly random_poly_below(const FieldPtr& ctx, int deg_bound, std::mt19937_64& rng) {
    std::vector<FElem> c;
    c.reserve(size_t(deg_bound));
    for (int i = 0; i < deg_bound; ++i) {
        std::vector<int64_t> v(size_t(ctx->m()));
        for (auto& r : v) r = int64_t(rng_below(rng, uint64_t(ctx->p())));
        c.emplace_back(ctx, std::move(v));
    }
    return Poly::from_coeffs(ctx, c);
}

// Distinct-degree splitting of a monic squarefree polynomial.
std::vector<std::pair<Poly, int>> ddf(Poly f) {
    std::vector<std::pair<Poly, int>> out;
    const auto ctx = f.ctx();
    Poly h = Poly::x(ctx) % f;
    int i = 0;
    while (f.degree() > 0 && 2 * (i + 1) <= f.degree()) {
        ++i;
        h = q_power_mod(h, f);
        Poly g = gcd(h - Poly::x(ctx), f);
        if (g.degree() > 0) {
            out.emplace_back(g, i);
            f = f / g;
            h = h % f;
        }
    }
    if (f.degree() > 0) out.emplace_back(f, f.degree());
    return out;
}

void edf(const Poly& f, int k, std::mt19937_64& rng, std::vector<Poly>& out) {
    if (f.degree() == k) {
        out.push_back(monic(f));
        return;
    }
    const auto ctx = f.ctx();
    const BigInt q = field_size(*ctx);
    for (;;) {
        Poly t = random_poly_below(ctx, f.degree(), rng);
        if (t.degree() < 1) continue;
        Poly g;
        if (ctx->p() == 2) {
            // trace over F_2 of the degree-(m*k) residue algebra
            const int bits = ctx->m() * k;
            Poly s = t % f, acc = s;
            for (int i = 1; i < bits; ++i) {
                s = (s * s) % f;
                acc = acc + s;
            }
            g = gcd(acc, f);
        } else {
            BigInt e = 1;
            for (int i = 0; i < k; ++i) e *= q;
            e = (e - 1) / 2;
            Poly s = powmod(t, e, f) - Poly::one(ctx);
            g = gcd(s, f);
        }
        if (g.degree() > 0 && g.degree() < f.degree()) {
            edf(g, k, rng, out);
            edf(f / g, k, rng, out);
            return;
        }
    }
}

} // namespace

int poly_cmp(const Poly& a, const Poly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
    for (int i = a.degree(); i >= 0; --i) {
        int c = canonical_cmp(a.coeff(i), b.coeff(i));
        if (c != 0) return c;
    }
    return 0;
}

std::vector<FactorPair> factor(const Poly& a, uint64_t seed) {
    if (a.is_zero()) raise(Errc::ZeroPolynomial, "factor of the zero polynomial");
    std::vector<FactorPair> out;
    Poly f = monic(a);
    if (f.degree() < 1) return out;
    auto rng = make_rng(mix_seed({seed, uint64_t(f.degree()), 0xfac70ull}));
    Poly rad = radical(f);
    std::vector<Poly> irreducibles;
    for (auto& [part, k] : ddf(rad)) edf(part, k, rng, irreducibles);
    for (auto& q : irreducibles) {
        int mult = 0;
        for (;;) {
            auto [quot, rem] = divrem(f, q);
            if (!rem.is_zero()) break;
            f = quot;
            ++mult;
        }
        out.push_back({q, mult});
    }
    std::sort(out.begin(), out.end(), [](const FactorPair& x, const FactorPair& y) {
        return poly_cmp(x.factor, y.factor) < 0;
    });
    return out;
}

bool is_irreducible(const Poly& a) {
    if (a.degree() < 1) return false;
    Poly f = monic(a);
    const auto ctx = f.ctx();
    Poly h = Poly::x(ctx) % f;
    for (int i = 1; 2 * i <= f.degree(); ++i) {
        h = q_power_mod(h, f);
        if (gcd(h - Poly::x(ctx), f).degree() > 0) return false;
    }
    return true;
}

namespace {

// All roots of a monic product of distinct linear factors, by random splitting.
void split_linear(const Poly& f, std::mt19937_64& rng, std::vector<FElem>& out) {
    const auto ctx = f.ctx();
    if (f.degree() == 0) return;
    if (f.degree() == 1) {
        out.push_back(-f.coeff(0));
        return;
    }
    const BigInt q = field_size(*ctx);
    for (;;) {
        Poly t = random_poly_below(ctx, f.degree(), rng);
        if (t.is_zero()) continue;
        Poly g;
        if (ctx->p() == 2) {
            const int bits = ctx->m();
            Poly s = t % f, acc = s;
            for (int i = 1; i < bits; ++i) {
                s = (s * s) % f;
                acc = acc + s;
            }
            g = gcd(acc, f);
        } else {
            Poly s = powmod(t, (q - 1) / 2, f) - Poly::one(ctx);
            g = gcd(s, f);
        }
        if (g.degree() > 0 && g.degree() < f.degree()) {
            split_linear(g, rng, out);
            split_linear(f / g, rng, out);
            return;
        }
    }
}

} // namespace

std::vector<FElem> roots_in_field(const Poly& a, uint64_t seed) {
    if (a.is_zero()) raise(Errc::ZeroPolynomial, "roots of the zero polynomial");
    const auto ctx = a.ctx();
    Poly r = radical(a);
    if (r.degree() < 1) return {};
    Poly xq = powmod(Poly::x(ctx), field_size(*ctx), r);
    Poly lin = gcd(xq - Poly::x(ctx), r);
    std::vector<FElem> roots;
    auto rng = make_rng(mix_seed({seed, uint64_t(a.degree()), 0x5b117ull}));
    split_linear(lin, rng, roots);
    std::sort(roots.begin(), roots.end(), [](const FElem& x, const FElem& y) { return canonical_cmp(x, y) < 0; });
    return roots;
}

std::vector<RootGroup> roots_in_closure(const Poly& a) {
    if (a.is_zero()) raise(Errc::ZeroPolynomial, "roots of the zero polynomial");
    const auto ctx = a.ctx();
    auto factors = factor(radical(a), ctx->seed());
    std::map<int, RootGroup> groups;
    auto rng = make_rng(mix_seed({ctx->seed(), uint64_t(a.degree()), 0xc1054eull}));
    for (auto& [q, mult] : factors) {
        const int k = q.degree();
        auto& grp = groups[k];
        if (grp.roots.empty()) {
            grp.ext_degree = k;
            grp.field = (k == 1) ? ctx : extension(ctx, k, ctx->seed());
        }
        if (k == 1) {
            grp.roots.push_back(-q.coeff(0));
            continue;
        }
        // lift coefficients and pick one root; its Frobenius orbit over the
        // base field gives the rest
        std::vector<FElem> lifted;
        for (int i = 0; i <= k; ++i) lifted.push_back(embed(q.coeff(i), grp.field));
        Poly f = Poly::from_coeffs(grp.field, lifted);
        // find a single root by random splitting, then take its Frobenius orbit
        const BigInt qsz = field_size(*grp.field);
        while (f.degree() > 1) {
            Poly t = random_poly_below(grp.field, f.degree(), rng);
            if (t.is_zero()) continue;
            Poly g;
            if (grp.field->p() == 2) {
                const int bits = grp.field->m();
                Poly s = t % f, acc = s;
                for (int i = 1; i < bits; ++i) {
                    s = (s * s) % f;
                    acc = acc + s;
                }
                g = gcd(acc, f);
            } else {
                Poly s = powmod(t, (qsz - 1) / 2, f) - Poly::one(grp.field);
                g = gcd(s, f);
            }
            if (g.degree() > 0 && g.degree() < f.degree()) f = (2 * g.degree() <= f.degree()) ? g : f / g;
        }
        FElem r = -f.coeff(0);
        for (int j = 0; j < k; ++j) {
            grp.roots.push_back(r);
            if (j + 1 < k) r = frobenius(r, ctx->m());
        }
    }
    std::vector<RootGroup> out;
    for (auto& [k, grp] : groups) {
        std::sort(grp.roots.begin(), grp.roots.end(),
                  [](const FElem& x, const FElem& y) { return canonical_cmp(x, y) < 0; });
        out.push_back(std::move(grp));
    }
    return out;
}

// ---------------------------------------------------------------------------
// PolyBuilder
// ---------------------------------------------------------------------------

PolyBuilder::PolyBuilder(FieldPtr ctx, int ncoeffs) : p_(std::move(ctx)) {
    p_.n_ = ncoeffs;
    p_.c_.assign(size_t(ncoeffs) * size_t(p_.ctx()->m()), 0);
}

void PolyBuilder::set(int i, const FElem& v) {
    std::copy(v.coeffs().begin(), v.coeffs().end(), p_.c_.begin() + size_t(i) * size_t(p_.ctx()->m()));
}

void PolyBuilder::add(int i, const FElem& v) {
    int64_t* dst = p_.c_.data() + size_t(i) * size_t(p_.ctx()->m());
    p_.ctx()->el_add(dst, v.data(), dst);
}

Poly PolyBuilder::build() {
    Poly out = std::move(p_);
    out.trim();
    return out;
}

} // namespace fqdyn
