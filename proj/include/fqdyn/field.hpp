#ifndef FQDYN_FIELD_HPP
#define FQDYN_FIELD_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "fqdyn/error.hpp"

namespace fqdyn {

class FieldCtx;
class FElem;
using FieldPtr = std::shared_ptr<const FieldCtx>;

// Barrett reducer mod p < 2^31; valid for inputs below 2^62.
struct Barrett {
    uint64_t p = 0;
    uint64_t magic = 0; // floor(2^64 / p)

    void init(uint64_t prime) {
        p = prime;
        magic = p > 1 ? (~uint64_t(0)) / p : 0;
    }
    uint64_t reduce(uint64_t a) const {
        uint64_t q = uint64_t((static_cast<unsigned __int128>(a) * magic) >> 64);
        uint64_t r = a - q * p;
        if (r >= p) r -= p;
        return r;
    }
    uint64_t mul(uint64_t a, uint64_t b) const { return reduce(a * b); }
};

// Discrete-log tables for small fields. Elements are identified with their
// packed index sum(c_i * p^i) < q; arithmetic runs in the log domain with
// kZero marking the zero element.
struct ZechTable {
    static constexpr int32_t kZero = -1;

    int64_t q = 0;
    int64_t p = 0;
    int m = 0;
    int32_t log_m1 = 0;              // log(-1); 0 in characteristic 2
    std::vector<int32_t> log_;       // packed id -> log (log_[0] = kZero)
    std::vector<int32_t> exp_;       // log -> packed id
    std::vector<int32_t> zech_;      // zech_[k] = log(1 + g^k), kZero if g^k = -1

    int32_t mul(int32_t a, int32_t b) const {
        if (a == kZero || b == kZero) return kZero;
        int64_t s = int64_t(a) + b;
        if (s >= q - 1) s -= q - 1;
        return int32_t(s);
    }
    int32_t inv(int32_t a) const {
        if (a == kZero) raise(Errc::DomainError, "inverse of zero");
        return a == 0 ? 0 : int32_t(q - 1 - a);
    }
    int32_t add(int32_t a, int32_t b) const {
        if (a == kZero) return b;
        if (b == kZero) return a;
        int64_t k = int64_t(a) - b; // a + b = b * (1 + g^(a-b))
        if (k < 0) k += q - 1;
        int32_t z = zech_[size_t(k)];
        if (z == kZero) return kZero;
        int64_t s = int64_t(b) + z;
        if (s >= q - 1) s -= q - 1;
        return int32_t(s);
    }
    int32_t neg(int32_t a) const {
        if (a == kZero) return kZero;
        int64_t s = int64_t(a) + log_m1;
        if (s >= q - 1) s -= q - 1;
        return int32_t(s);
    }
    int32_t sub(int32_t a, int32_t b) const { return add(a, neg(b)); }
};

// Upper bound on field size for which log/Zech tables are built.
inline constexpr int64_t kZechLimit = int64_t(1) << 18;

// A concrete model of F_{p^m}: the prime p and a monic irreducible modulus of
// degree m over F_p. Elements are residue vectors of length m (little-endian
// in the modulus root). Contexts are immutable; the embedding cache is the
// only mutable state and is mutex-guarded.
class FieldCtx : public std::enable_shared_from_this<FieldCtx> {
  public:
    int64_t p() const { return p_; }
    int m() const { return m_; }
    const std::vector<int64_t>& modulus() const { return mod_; }
    uint64_t seed() const { return seed_; }

    bool same_field(const FieldCtx& o) const { return p_ == o.p_ && mod_ == o.mod_; }
    double log2q() const;
    // p^m when it fits in 63 bits.
    std::optional<int64_t> q_i64() const { return q_; }

    const Barrett& barrett() const { return br_; }
    const ZechTable* zech() const { return zech_ ? zech_.get() : nullptr; }

    // Span-level coefficient ops; every span has length m.
    void el_zero(int64_t* o) const;
    void el_one(int64_t* o) const;
    bool el_is_zero(const int64_t* a) const;
    bool el_is_one(const int64_t* a) const;
    void el_add(const int64_t* a, const int64_t* b, int64_t* o) const;
    void el_sub(const int64_t* a, const int64_t* b, int64_t* o) const;
    void el_neg(const int64_t* a, int64_t* o) const;
    void el_mul(const int64_t* a, const int64_t* b, int64_t* o) const;
    void el_inv(const int64_t* a, int64_t* o) const;
    void el_pow(const int64_t* a, uint64_t e, int64_t* o) const;
    void el_scalar_mul(const int64_t* a, int64_t s, int64_t* o) const; // s in [0,p)

    int64_t pack(const int64_t* a) const;     // only when q fits
    void unpack(int64_t id, int64_t* o) const;

    FElem zero() const;
    FElem one() const;
    FElem from_int(int64_t v) const;                  // reduced mod p, prime subfield
    FElem from_coeffs(std::vector<int64_t> c) const;  // length <= m, residues reduced
    FElem gen() const;                                // the modulus root t (m > 1), else 1

    // All elements in pack order; only for fields with q fitting in memory.
    std::vector<FElem> all_elements() const;

    ~FieldCtx() = default;

  private:
    FieldCtx() = default;
    friend FieldPtr make_ctx_(int64_t p, std::vector<int64_t> modulus, uint64_t seed);

    int64_t p_ = 0;
    int m_ = 0;
    std::vector<int64_t> mod_; // length m+1, monic
    uint64_t seed_ = 0;
    std::optional<int64_t> q_;
    Barrett br_;
    std::unique_ptr<ZechTable> zech_;

    mutable std::mutex embed_mu_;
    // (src m, src modulus) -> flattened powers w^0..w^{src_m-1} of the image
    // of the source modulus root, each a block of m residues.
    mutable std::map<std::pair<int, std::vector<int64_t>>, std::vector<int64_t>> embed_cache_;

    friend FElem embed(const FElem&, const FieldPtr&);
};

// Context for F_p (modulus x). Throws CompositeModulus unless p is prime.
FieldPtr prime_field(int64_t p);

// Context for F_{p^{m*k}} built over the prime field with a deterministic
// seeded modulus search. Contexts with equal (p, m*k, seed) are identical and
// shared through a process-wide registry.
FieldPtr extension(const FieldPtr& base, int k, uint64_t seed);

// Context with an explicitly given monic modulus (checked irreducible).
FieldPtr field_with_modulus(int64_t p, std::vector<int64_t> modulus, uint64_t seed = 0);

bool is_prime_i64(int64_t n);

class FElem {
  public:
    FElem() = default;
    FElem(FieldPtr ctx, std::vector<int64_t> coeffs);

    const FieldPtr& ctx() const { return ctx_; }
    const std::vector<int64_t>& coeffs() const { return c_; }
    const int64_t* data() const { return c_.data(); }

    bool is_zero() const { return ctx_->el_is_zero(c_.data()); }
    bool is_one() const { return ctx_->el_is_one(c_.data()); }
    // Whether the element lies in the prime subfield.
    bool in_prime_field() const;
    // Integer value when in the prime subfield.
    std::optional<int64_t> as_int() const;

    FElem operator+(const FElem& o) const;
    FElem operator-(const FElem& o) const;
    FElem operator-() const;
    FElem operator*(const FElem& o) const;
    FElem operator/(const FElem& o) const;
    FElem inv() const;
    FElem pow(uint64_t e) const;

    bool operator==(const FElem& o) const;
    bool operator!=(const FElem& o) const { return !(*this == o); }

  private:
    FieldPtr ctx_;
    std::vector<int64_t> c_;
};

// x^{p^k}.
FElem frobenius(const FElem& x, int64_t k);
// The unique y with y^{p^k} = x.
FElem frobenius_inv(const FElem& x, int64_t k);

// Least t >= 1 with x^{(p^sub_m)^t} = x; equals [F_{p^sub_m}(x) : F_{p^sub_m}].
// sub_m must divide m.
int minimal_degree(const FElem& x, int sub_m);

// Total order: lexicographic on coefficients from highest index down.
// Negative/zero/positive like strcmp; requires the same field.
int canonical_cmp(const FElem& a, const FElem& b);

// Injective homomorphism fixing F_p into target; requires m | m(target) and
// equal p. Deterministic: the source modulus root maps to the least root of
// the source modulus in target under canonical_cmp. Cached per (source,
// target). Implemented in embed.cpp.
FElem embed(const FElem& x, const FieldPtr& target);

// Inverse of embed on its image: the element y of `small` with
// embed(y, ctx(x)) = x, or nullopt when x lies outside the embedded subfield.
std::optional<FElem> project(const FElem& x, const FieldPtr& small);

// Throws DomainError unless both elements live in the literal same field.
void require_same_field(const FElem& a, const FElem& b);

} // namespace fqdyn

#endif
