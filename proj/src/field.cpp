#include "fqdyn/field.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "fqdyn/rng.hpp"

namespace fqdyn {

namespace {

// ---------------------------------------------------------------------------
// Dense F_p[x] helpers used for modulus search and element inversion.
// Coefficients ascending, no trailing zeros, zero polynomial = empty vector.
// ---------------------------------------------------------------------------
using Fpx = std::vector<int64_t>;

void fpx_trim(Fpx& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

int fpx_deg(const Fpx& f) { return int(f.size()) - 1; }

Fpx fpx_mul(const Fpx& a, const Fpx& b, const Barrett& br) {
    if (a.empty() || b.empty()) return {};
    Fpx out(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        uint64_t ai = uint64_t(a[i]);
        for (size_t j = 0; j < b.size(); ++j) {
            if (b[j] == 0) continue;
            uint64_t t = uint64_t(out[i + j]) + br.mul(ai, uint64_t(b[j]));
            out[i + j] = int64_t(t >= br.p ? t - br.p : t);
        }
    }
    fpx_trim(out);
    return out;
}

int64_t inv_mod_p(int64_t a, int64_t p) {
    int64_t t = 0, newt = 1, r = p, newr = a % p;
    while (newr != 0) {
        int64_t q = r / newr;
        std::tie(t, newt) = std::make_tuple(newt, t - q * newt);
        std::tie(r, newr) = std::make_tuple(newr, r - q * newr);
    }
    if (r != 1) raise(Errc::DomainError, "non-invertible residue");
    return ((t % p) + p) % p;
}

// Remainder of a modulo monic-or-not b (b nonzero).
void fpx_mod_inplace(Fpx& a, const Fpx& b, const Barrett& br) {
    int64_t p = int64_t(br.p);
    int64_t lcinv = inv_mod_p(b.back(), p);
    while (fpx_deg(a) >= fpx_deg(b)) {
        int64_t c = br.mul(uint64_t(a.back()), uint64_t(lcinv));
        int shift = fpx_deg(a) - fpx_deg(b);
        if (c != 0) {
            for (size_t j = 0; j < b.size(); ++j) {
                if (b[j] == 0) continue;
                int64_t t = a[size_t(shift) + j] - int64_t(br.mul(uint64_t(c), uint64_t(b[j])));
                if (t < 0) t += p;
                a[size_t(shift) + j] = t;
            }
        }
        a.pop_back();
        fpx_trim(a);
        if (a.empty()) break;
    }
}

Fpx fpx_mulmod(const Fpx& a, const Fpx& b, const Fpx& mod, const Barrett& br) {
    Fpx t = fpx_mul(a, b, br);
    fpx_mod_inplace(t, mod, br);
    return t;
}

Fpx fpx_powmod(Fpx base, uint64_t e, const Fpx& mod, const Barrett& br) {
    Fpx result{1};
    fpx_mod_inplace(base, mod, br);
    while (e) {
        if (e & 1) result = fpx_mulmod(result, base, mod, br);
        e >>= 1;
        if (e) base = fpx_mulmod(base, base, mod, br);
    }
    return result;
}

Fpx fpx_gcd(Fpx a, Fpx b, const Barrett& br) {
    while (!b.empty()) {
        fpx_mod_inplace(a, b, br);
        std::swap(a, b);
    }
    if (!a.empty() && a.back() != 1) {
        int64_t s = inv_mod_p(a.back(), int64_t(br.p));
        for (auto& c : a) c = int64_t(br.mul(uint64_t(c), uint64_t(s)));
    }
    return a;
}

// Distinct-degree sieve: no factor of degree <= n/2 implies irreducible.
bool fpx_irreducible(const Fpx& f, const Barrett& br) {
    int n = fpx_deg(f);
    if (n <= 0) return false;
    if (n == 1) return true;
    if (f[0] == 0) return false; // divisible by x
    Fpx h{0, 1}; // x
    for (int i = 1; i <= n / 2; ++i) {
        h = fpx_powmod(h, br.p, f, br);
        Fpx hx = h;
        // h - x
        if (hx.size() < 2) hx.resize(2, 0);
        hx[1] = (hx[1] - 1 % int64_t(br.p) + int64_t(br.p)) % int64_t(br.p);
        fpx_trim(hx);
        Fpx g = fpx_gcd(hx, f, br);
        if (fpx_deg(g) != 0) return false;
    }
    return true;
}

Fpx find_irreducible(int64_t p, int degree, uint64_t seed, const Barrett& br) {
    if (degree == 1) return Fpx{0, 1}; // x
    auto rng = make_rng(mix_seed({uint64_t(p), uint64_t(degree), seed, 0x4d4f44ull}));
    for (;;) {
        Fpx cand(size_t(degree) + 1, 0);
        cand[size_t(degree)] = 1;
        for (int i = 0; i < degree; ++i) cand[size_t(i)] = int64_t(rng_below(rng, uint64_t(p)));
        if (cand[0] == 0) continue;
        if (fpx_irreducible(cand, br)) return cand;
    }
}

std::vector<int64_t> factor_small(int64_t n) {
    std::vector<int64_t> primes;
    for (int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            primes.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) primes.push_back(n);
    return primes;
}

} // namespace

bool is_prime_i64(int64_t n) {
    if (n < 2) return false;
    for (int64_t d : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % d == 0) return n == d;
    }
    // deterministic Miller-Rabin for n < 3.3e24 with these bases
    int64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) d >>= 1, ++r;
    auto mulm = [&](int64_t a, int64_t b) {
        return int64_t((static_cast<unsigned __int128>(a) * uint64_t(b)) % uint64_t(n));
    };
    auto powm = [&](int64_t a, int64_t e) {
        int64_t acc = 1;
        while (e) {
            if (e & 1) acc = mulm(acc, a);
            a = mulm(a, a);
            e >>= 1;
        }
        return acc;
    };
    for (int64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        int64_t x = powm(a % n, d);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < r; ++i) {
            x = mulm(x, x);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// FieldCtx construction
// ---------------------------------------------------------------------------

namespace {

void build_zech(FieldCtx& ctx, ZechTable& zt);

struct RegistryKey {
    int64_t p;
    int m;
    uint64_t seed;
    auto operator<=>(const RegistryKey&) const = default;
};

std::mutex g_registry_mu;
std::map<RegistryKey, FieldPtr>& registry() {
    static std::map<RegistryKey, FieldPtr> r;
    return r;
}

} // namespace

FieldPtr make_ctx_(int64_t p, std::vector<int64_t> modulus, uint64_t seed) {
    auto ctx = std::shared_ptr<FieldCtx>(new FieldCtx());
    ctx->p_ = p;
    ctx->m_ = int(modulus.size()) - 1;
    ctx->mod_ = std::move(modulus);
    ctx->seed_ = seed;
    ctx->br_.init(uint64_t(p));
    // q when it fits
    long double q = 1;
    int64_t qi = 1;
    bool fits = true;
    for (int i = 0; i < ctx->m_; ++i) {
        q *= static_cast<long double>(p);
        if (fits && qi <= (int64_t(1) << 62) / p)
            qi *= p;
        else
            fits = false;
    }
    if (fits) ctx->q_ = qi;
    if (fits && qi <= kZechLimit && qi > 2) {
        auto zt = std::make_unique<ZechTable>();
        build_zech(*ctx, *zt);
        ctx->zech_ = std::move(zt);
    }
    return ctx;
}

FieldPtr prime_field(int64_t p) {
    if (p < 2 || p >= (int64_t(1) << 31) || !is_prime_i64(p))
        raise(Errc::CompositeModulus, "p must be a prime below 2^31, got " + std::to_string(p));
    RegistryKey key{p, 1, 0};
    std::lock_guard<std::mutex> lock(g_registry_mu);
    auto& reg = registry();
    auto it = reg.find(key);
    if (it != reg.end()) return it->second;
    auto ctx = make_ctx_(p, {0, 1}, 0);
    reg.emplace(key, ctx);
    return ctx;
}

FieldPtr extension(const FieldPtr& base, int k, uint64_t seed) {
    if (k < 1) raise(Errc::DomainError, "extension degree must be >= 1");
    int M = base->m() * k;
    RegistryKey key{base->p(), M, seed};
    {
        std::lock_guard<std::mutex> lock(g_registry_mu);
        auto it = registry().find(key);
        if (it != registry().end()) return it->second;
    }
    Barrett br;
    br.init(uint64_t(base->p()));
    auto mod = find_irreducible(base->p(), M, seed, br);
    auto ctx = make_ctx_(base->p(), std::move(mod), seed);
    std::lock_guard<std::mutex> lock(g_registry_mu);
    auto [it, inserted] = registry().emplace(key, ctx);
    return it->second;
}

FieldPtr field_with_modulus(int64_t p, std::vector<int64_t> modulus, uint64_t seed) {
    if (p < 2 || p >= (int64_t(1) << 31) || !is_prime_i64(p))
        raise(Errc::CompositeModulus, "p must be a prime below 2^31");
    for (auto& c : modulus) c = ((c % p) + p) % p;
    while (!modulus.empty() && modulus.back() == 0) modulus.pop_back();
    if (modulus.size() < 2) raise(Errc::DomainError, "modulus must have degree >= 1");
    if (modulus.back() != 1) raise(Errc::DomainError, "modulus must be monic");
    Barrett br;
    br.init(uint64_t(p));
    if (!fpx_irreducible(modulus, br)) raise(Errc::CompositeModulus, "modulus is reducible");
    return make_ctx_(p, std::move(modulus), seed);
}

double FieldCtx::log2q() const { return double(m_) * std::log2(double(p_)); }

// ---------------------------------------------------------------------------
// Span-level element arithmetic
// ---------------------------------------------------------------------------

void FieldCtx::el_zero(int64_t* o) const { std::fill(o, o + m_, 0); }

void FieldCtx::el_one(int64_t* o) const {
    std::fill(o, o + m_, 0);
    o[0] = 1;
}

bool FieldCtx::el_is_zero(const int64_t* a) const {
    for (int i = 0; i < m_; ++i)
        if (a[i] != 0) return false;
    return true;
}

bool FieldCtx::el_is_one(const int64_t* a) const {
    if (a[0] != 1) return false;
    for (int i = 1; i < m_; ++i)
        if (a[i] != 0) return false;
    return true;
}

void FieldCtx::el_add(const int64_t* a, const int64_t* b, int64_t* o) const {
    for (int i = 0; i < m_; ++i) {
        int64_t t = a[i] + b[i];
        o[i] = t >= p_ ? t - p_ : t;
    }
}

void FieldCtx::el_sub(const int64_t* a, const int64_t* b, int64_t* o) const {
    for (int i = 0; i < m_; ++i) {
        int64_t t = a[i] - b[i];
        o[i] = t < 0 ? t + p_ : t;
    }
}

void FieldCtx::el_neg(const int64_t* a, int64_t* o) const {
    for (int i = 0; i < m_; ++i) o[i] = a[i] ? p_ - a[i] : 0;
}

void FieldCtx::el_scalar_mul(const int64_t* a, int64_t s, int64_t* o) const {
    for (int i = 0; i < m_; ++i) o[i] = int64_t(br_.mul(uint64_t(a[i]), uint64_t(s)));
}

void FieldCtx::el_mul(const int64_t* a, const int64_t* b, int64_t* o) const {
    if (m_ == 1) {
        o[0] = int64_t(br_.mul(uint64_t(a[0]), uint64_t(b[0])));
        return;
    }
    thread_local std::vector<int64_t> scratch;
    if (int(scratch.size()) < 2 * m_ - 1) scratch.resize(size_t(2 * m_ - 1));
    std::fill(scratch.begin(), scratch.begin() + size_t(2 * m_ - 1), 0);
    // lazy accumulation: for small p the raw products fit comfortably in
    // 63 bits across a whole row, so reduce once per output coefficient
    const bool lazy = p_ < (int64_t(1) << 20) && m_ < (1 << 18);
    if (lazy) {
        for (int i = 0; i < m_; ++i) {
            const int64_t ai = a[i];
            if (ai == 0) continue;
            int64_t* row = scratch.data() + i;
            for (int j = 0; j < m_; ++j) row[j] += ai * b[j];
        }
        for (int i = 2 * m_ - 2; i >= m_; --i) {
            int64_t c = int64_t(br_.reduce(uint64_t(scratch[size_t(i)])));
            if (c == 0) continue;
            const int64_t cneg = p_ - c;
            int64_t* row = scratch.data() + (i - m_);
            for (int j = 0; j < m_; ++j) row[j] += cneg * mod_[size_t(j)];
        }
        for (int i = 0; i < m_; ++i) o[i] = int64_t(br_.reduce(uint64_t(scratch[size_t(i)])));
        return;
    }
    for (int i = 0; i < m_; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < m_; ++j) {
            if (b[j] == 0) continue;
            int64_t t = scratch[size_t(i + j)] + int64_t(br_.mul(uint64_t(a[i]), uint64_t(b[j])));
            scratch[size_t(i + j)] = t >= p_ ? t - p_ : t;
        }
    }
    // reduce by the monic modulus
    for (int i = 2 * m_ - 2; i >= m_; --i) {
        int64_t c = scratch[size_t(i)];
        if (c == 0) continue;
        for (int j = 0; j < m_; ++j) {
            if (mod_[size_t(j)] == 0) continue;
            int64_t t = scratch[size_t(i - m_ + j)] - int64_t(br_.mul(uint64_t(c), uint64_t(mod_[size_t(j)])));
            scratch[size_t(i - m_ + j)] = t < 0 ? t + p_ : t;
        }
    }
    std::copy(scratch.begin(), scratch.begin() + m_, o);
}

void FieldCtx::el_inv(const int64_t* a, int64_t* o) const {
    if (el_is_zero(a)) raise(Errc::DomainError, "inverse of zero");
    if (m_ == 1) {
        o[0] = inv_mod_p(a[0], p_);
        return;
    }
    // in-place extended Euclid between the element and the modulus, with
    // explicit degree tracking and no allocations in the loop
    thread_local std::vector<int64_t> r0, r1, s0, s1;
    const size_t n = size_t(m_) + 1;
    if (r0.size() < n) {
        r0.resize(n);
        r1.resize(n);
        s0.resize(n);
        s1.resize(n);
    }
    std::copy(mod_.begin(), mod_.end(), r0.begin());
    std::copy(a, a + m_, r1.begin());
    std::fill(s0.begin(), s0.begin() + n, 0);
    std::fill(s1.begin(), s1.begin() + n, 0);
    s1[0] = 1;
    int d0 = m_;
    int d1 = m_ - 1;
    while (d1 >= 0 && r1[size_t(d1)] == 0) --d1;
    int ds0 = -1, ds1 = 0;

    while (d1 >= 0) {
        const int64_t lcinv = inv_mod_p(r1[size_t(d1)], p_);
        while (d0 >= d1) {
            const int64_t c = int64_t(br_.mul(uint64_t(r0[size_t(d0)]), uint64_t(lcinv)));
            const int shift = d0 - d1;
            if (c != 0) {
                for (int j = 0; j <= d1; ++j) {
                    int64_t t = r0[size_t(shift + j)] - int64_t(br_.mul(uint64_t(c), uint64_t(r1[size_t(j)])));
                    r0[size_t(shift + j)] = t < 0 ? t + p_ : t;
                }
                for (int j = 0; j <= ds1; ++j) {
                    int64_t t = s0[size_t(shift + j)] - int64_t(br_.mul(uint64_t(c), uint64_t(s1[size_t(j)])));
                    s0[size_t(shift + j)] = t < 0 ? t + p_ : t;
                }
                ds0 = std::max(ds0, shift + ds1);
            }
            --d0;
            while (d0 >= 0 && r0[size_t(d0)] == 0) --d0;
            if (d0 < 0) break;
        }
        std::swap(r0, r1);
        std::swap(d0, d1);
        std::swap(s0, s1);
        std::swap(ds0, ds1);
    }
    // r0 is the (constant) gcd and s0 * a = r0 modulo the modulus
    const int64_t scale = inv_mod_p(d0 == 0 ? r0[0] : 1, p_);
    std::fill(o, o + m_, 0);
    for (int j = 0; j <= std::min(ds0, m_ - 1); ++j)
        o[j] = int64_t(br_.mul(uint64_t(s0[size_t(j)]), uint64_t(scale)));
}

void FieldCtx::el_pow(const int64_t* a, uint64_t e, int64_t* o) const {
    std::vector<int64_t> base(a, a + m_), acc(size_t(m_), 0);
    acc[0] = 1;
    while (e) {
        if (e & 1) el_mul(acc.data(), base.data(), acc.data());
        e >>= 1;
        if (e) el_mul(base.data(), base.data(), base.data());
    }
    std::copy(acc.begin(), acc.end(), o);
}

int64_t FieldCtx::pack(const int64_t* a) const {
    int64_t id = 0;
    for (int i = m_ - 1; i >= 0; --i) id = id * p_ + a[i];
    return id;
}

void FieldCtx::unpack(int64_t id, int64_t* o) const {
    for (int i = 0; i < m_; ++i) {
        o[i] = id % p_;
        id /= p_;
    }
}

namespace {

void build_zech(FieldCtx& ctx, ZechTable& zt) {
    const int64_t q = *ctx.q_i64();
    const int64_t p = ctx.p();
    const int m = ctx.m();
    zt.q = q;
    zt.p = p;
    zt.m = m;
    zt.log_.assign(size_t(q), ZechTable::kZero);
    zt.exp_.assign(size_t(q - 1), 0);
    zt.zech_.assign(size_t(q - 1), ZechTable::kZero);
    zt.log_m1 = (p == 2) ? 0 : int32_t((q - 1) / 2);

    auto primes = factor_small(q - 1);
    std::vector<int64_t> cand(size_t(m), 0), acc(size_t(m), 0), tmp(size_t(m), 0);
    // deterministic generator scan in pack order
    int64_t gen_id = -1;
    for (int64_t id = 2; id < q; ++id) {
        ctx.unpack(id, cand.data());
        bool ok = true;
        for (int64_t r : primes) {
            ctx.el_pow(cand.data(), uint64_t((q - 1) / r), tmp.data());
            if (ctx.el_is_one(tmp.data())) {
                ok = false;
                break;
            }
        }
        if (ok) {
            gen_id = id;
            break;
        }
    }
    if (gen_id < 0) raise(Errc::Inconsistency, "no multiplicative generator found");
    ctx.unpack(gen_id, cand.data());
    ctx.el_one(acc.data());
    for (int64_t k = 0; k < q - 1; ++k) {
        int64_t id = ctx.pack(acc.data());
        zt.exp_[size_t(k)] = int32_t(id);
        zt.log_[size_t(id)] = int32_t(k);
        ctx.el_mul(acc.data(), cand.data(), acc.data());
    }
    for (int64_t k = 0; k < q - 1; ++k) {
        int64_t id = zt.exp_[size_t(k)];
        int64_t c0 = id % p;
        int64_t id1 = id - c0 + ((c0 + 1) % p);
        zt.zech_[size_t(k)] = id1 == 0 ? ZechTable::kZero : zt.log_[size_t(id1)];
    }
}

} // namespace

FElem FieldCtx::zero() const { return FElem(shared_from_this(), std::vector<int64_t>(size_t(m_), 0)); }

FElem FieldCtx::one() const {
    std::vector<int64_t> c(size_t(m_), 0);
    c[0] = 1;
    return FElem(shared_from_this(), std::move(c));
}

FElem FieldCtx::from_int(int64_t v) const {
    std::vector<int64_t> c(size_t(m_), 0);
    c[0] = ((v % p_) + p_) % p_;
    return FElem(shared_from_this(), std::move(c));
}

FElem FieldCtx::from_coeffs(std::vector<int64_t> c) const {
    if (int(c.size()) > m_) raise(Errc::DomainError, "too many coefficients for this field");
    c.resize(size_t(m_), 0);
    for (auto& x : c) x = ((x % p_) + p_) % p_;
    return FElem(shared_from_this(), std::move(c));
}

FElem FieldCtx::gen() const {
    if (m_ == 1) return one();
    std::vector<int64_t> c(size_t(m_), 0);
    c[1] = 1;
    return FElem(shared_from_this(), std::move(c));
}

std::vector<FElem> FieldCtx::all_elements() const {
    auto q = q_i64();
    if (!q || *q > (int64_t(1) << 26)) raise(Errc::OrbitCapExceeded, "field too large to enumerate");
    std::vector<FElem> out;
    out.reserve(size_t(*q));
    std::vector<int64_t> c(size_t(m_), 0);
    for (int64_t id = 0; id < *q; ++id) {
        unpack(id, c.data());
        out.emplace_back(shared_from_this(), c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// FElem
// ---------------------------------------------------------------------------

FElem::FElem(FieldPtr ctx, std::vector<int64_t> coeffs) : ctx_(std::move(ctx)), c_(std::move(coeffs)) {
    if (int(c_.size()) != ctx_->m()) raise(Errc::DomainError, "coefficient vector has wrong length");
}

bool FElem::in_prime_field() const {
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

std::optional<int64_t> FElem::as_int() const {
    if (!in_prime_field()) return std::nullopt;
    return c_[0];
}

void require_same_field(const FElem& a, const FElem& b) {
    if (!a.ctx()->same_field(*b.ctx())) raise(Errc::DomainError, "elements live in different fields");
}

FElem FElem::operator+(const FElem& o) const {
    require_same_field(*this, o);
    std::vector<int64_t> r(c_.size());
    ctx_->el_add(c_.data(), o.c_.data(), r.data());
    return FElem(ctx_, std::move(r));
}

FElem FElem::operator-(const FElem& o) const {
    require_same_field(*this, o);
    std::vector<int64_t> r(c_.size());
    ctx_->el_sub(c_.data(), o.c_.data(), r.data());
    return FElem(ctx_, std::move(r));
}

FElem FElem::operator-() const {
    std::vector<int64_t> r(c_.size());
    ctx_->el_neg(c_.data(), r.data());
    return FElem(ctx_, std::move(r));
}

FElem FElem::operator*(const FElem& o) const {
    require_same_field(*this, o);
    std::vector<int64_t> r(c_.size());
    ctx_->el_mul(c_.data(), o.c_.data(), r.data());
    return FElem(ctx_, std::move(r));
}

FElem FElem::inv() const {
    std::vector<int64_t> r(c_.size());
    ctx_->el_inv(c_.data(), r.data());
    return FElem(ctx_, std::move(r));
}

FElem FElem::operator/(const FElem& o) const { return *this * o.inv(); }

FElem FElem::pow(uint64_t e) const {
    std::vector<int64_t> r(c_.size());
    ctx_->el_pow(c_.data(), e, r.data());
    return FElem(ctx_, std::move(r));
}

bool FElem::operator==(const FElem& o) const {
    require_same_field(*this, o);
    return c_ == o.c_;
}

FElem frobenius(const FElem& x, int64_t k) {
    if (k < 0) raise(Errc::DomainError, "frobenius exponent must be >= 0");
    const auto& ctx = x.ctx();
    int m = ctx->m();
    int64_t steps = k % m;
    if (steps == 0) return x;
    if (const ZechTable* zt = ctx->zech()) {
        int64_t id = ctx->pack(x.data());
        int32_t lg = zt->log_[size_t(id)];
        if (lg == ZechTable::kZero) return x; // zero is fixed
        // exponent p^steps mod (q-1)
        int64_t e = 1, qm1 = zt->q - 1;
        for (int64_t i = 0; i < steps; ++i) e = int64_t((static_cast<unsigned __int128>(e) * uint64_t(ctx->p())) % uint64_t(qm1));
        int64_t nl = int64_t((static_cast<unsigned __int128>(uint64_t(lg)) * uint64_t(e)) % uint64_t(qm1));
        std::vector<int64_t> c(size_t(m), 0);
        ctx->unpack(zt->exp_[size_t(nl)], c.data());
        return FElem(ctx, std::move(c));
    }
    FElem y = x;
    for (int64_t i = 0; i < steps; ++i) y = y.pow(uint64_t(ctx->p()));
    return y;
}

FElem frobenius_inv(const FElem& x, int64_t k) {
    if (k < 0) raise(Errc::DomainError, "frobenius exponent must be >= 0");
    int m = x.ctx()->m();
    int64_t steps = k % m;
    return steps == 0 ? x : frobenius(x, m - steps);
}

int minimal_degree(const FElem& x, int sub_m) {
    int m = x.ctx()->m();
    if (sub_m < 1 || m % sub_m != 0) raise(Errc::DomainError, "sub_m must divide m");
    FElem y = x;
    for (int t = 1;; ++t) {
        y = frobenius(y, sub_m);
        if (y == x) return t;
    }
}

int canonical_cmp(const FElem& a, const FElem& b) {
    require_same_field(a, b);
    const auto& ca = a.coeffs();
    const auto& cb = b.coeffs();
    for (int i = int(ca.size()) - 1; i >= 0; --i) {
        if (ca[size_t(i)] != cb[size_t(i)]) return ca[size_t(i)] < cb[size_t(i)] ? -1 : 1;
    }
    return 0;
}

} // namespace fqdyn
