#ifndef FQDYN_POLY_HPP
#define FQDYN_POLY_HPP

#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fqdyn/field.hpp"

namespace fqdyn {

using BigInt = boost::multiprecision::cpp_int;

// Dense univariate polynomial over a FieldCtx. Coefficients are stored as a
// flat residue matrix (coefficient-major, m residues each, ascending powers)
// with no trailing zero coefficient; the zero polynomial is empty.
class Poly {
  public:
    Poly() = default;
    explicit Poly(FieldPtr ctx) : ctx_(std::move(ctx)) {}

    static Poly zero(FieldPtr ctx) { return Poly(std::move(ctx)); }
    static Poly constant(const FElem& c);
    static Poly one(const FieldPtr& ctx) { return constant(ctx->one()); }
    static Poly x(const FieldPtr& ctx);
    static Poly from_coeffs(const FieldPtr& ctx, const std::vector<FElem>& coeffs);
    static Poly from_int_coeffs(const FieldPtr& ctx, const std::vector<int64_t>& coeffs);
    // x - r
    static Poly linear_root(const FElem& r);

    const FieldPtr& ctx() const { return ctx_; }
    int degree() const { return n_ - 1; } // -1 for the zero polynomial
    bool is_zero() const { return n_ == 0; }
    bool is_one() const;
    bool is_monic() const;

    FElem coeff(int i) const; // zero beyond the degree
    FElem lc() const;
    const int64_t* coeff_data(int i) const { return c_.data() + size_t(i) * size_t(ctx_->m()); }

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const FElem& s) const;
    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    // multiply by x^k
    Poly shifted(int k) const;

    friend std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b);
    friend class PolyBuilder;

  private:
    FieldPtr ctx_;
    std::vector<int64_t> c_;
    int n_ = 0; // number of stored coefficients = degree+1

    void trim();
    friend Poly mul_impl_(const Poly& a, const Poly& b);
    friend void divrem_impl_(const Poly& a, const Poly& b, Poly* q, Poly* r);
    friend Poly gcd(Poly a, Poly b);
    friend Poly compose_cleared(const Poly& P, const Poly& g, const Poly& h);
};

// Incremental coefficient assembly without per-step normalization.
class PolyBuilder {
  public:
    PolyBuilder(FieldPtr ctx, int ncoeffs);
    void set(int i, const FElem& v);
    void add(int i, const FElem& v);
    Poly build();

  private:
    Poly p_;
};

std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b); // throws DivisionByZeroPoly
Poly operator/(const Poly& a, const Poly& b);               // exact or truncating division
Poly operator%(const Poly& a, const Poly& b);

Poly monic(const Poly& a);
Poly gcd(Poly a, Poly b); // monic gcd; gcd(0,0) = 0

Poly derivative(const Poly& a);

// The unique b with b^p = a. Throws NotAPthPower when some exponent with a
// nonzero coefficient is not divisible by p.
Poly pth_root(const Poly& a);

// Monic squarefree polynomial with the same roots over the closure.
Poly radical(const Poly& a); // throws ZeroPolynomial
// deg(radical(a)) = number of distinct roots over the closure.
int distinct_root_count(const Poly& a);

FElem eval(const Poly& a, const FElem& x); // embeds across compatible fields

// h^{deg P} * P(g/h): the numerator of P composed with g/h. Its roots are the
// affine points x with h(x) != 0 and P(R(x)) = 0; poles are never roots. The
// degree may drop when the leading combination cancels.
Poly compose_cleared(const Poly& P, const Poly& g, const Poly& h);

Poly powmod(const Poly& base, const BigInt& e, const Poly& mod);

struct FactorPair {
    Poly factor; // monic irreducible
    int multiplicity;
};

// Complete factorization over the coefficient field. Factors sorted by
// (degree, canonical coefficient order); the product over factors with
// multiplicities reproduces monic(a).
std::vector<FactorPair> factor(const Poly& a, uint64_t seed = 0);

bool is_irreducible(const Poly& a);

// Roots of a lying inside its own coefficient field, sorted canonically.
std::vector<FElem> roots_in_field(const Poly& a, uint64_t seed = 0);

struct RootGroup {
    int ext_degree; // k: the roots live in extension(ctx, k, ctx->seed())
    FieldPtr field;
    std::vector<FElem> roots;
};

// Distinct roots of a over the closure, grouped by the extension degree of
// the field they generate. Total root count equals distinct_root_count(a).
std::vector<RootGroup> roots_in_closure(const Poly& a);

// Orders by degree, then canonical coefficient comparison from the top.
int poly_cmp(const Poly& a, const Poly& b);

} // namespace fqdyn

#endif
