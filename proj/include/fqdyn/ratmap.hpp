#ifndef FQDYN_RATMAP_HPP
#define FQDYN_RATMAP_HPP

#include <optional>

#include "fqdyn/caps.hpp"
#include "fqdyn/poly.hpp"

namespace fqdyn {

// A point of the projective line over some field: either finite or infinity.
class ProjPoint {
  public:
    static ProjPoint finite(FElem v) {
        FieldPtr c = v.ctx();
        return ProjPoint(std::move(c), std::move(v));
    }
    static ProjPoint infinity(FieldPtr ctx) { return ProjPoint(std::move(ctx), std::nullopt); }

    bool is_infinity() const { return !v_.has_value(); }
    const FElem& value() const {
        if (!v_) raise(Errc::DomainError, "value() on the point at infinity");
        return *v_;
    }
    const FieldPtr& ctx() const { return ctx_; }

    bool operator==(const ProjPoint& o) const {
        if (is_infinity() != o.is_infinity()) return false;
        return is_infinity() ? ctx_->same_field(*o.ctx_) : *v_ == *o.v_;
    }
    bool operator!=(const ProjPoint& o) const { return !(*this == o); }

  private:
    ProjPoint(FieldPtr ctx, std::optional<FElem> v) : ctx_(std::move(ctx)), v_(std::move(v)) {}
    FieldPtr ctx_;
    std::optional<FElem> v_;
};

ProjPoint embed_point(const ProjPoint& x, const FieldPtr& target);

// Rational map R = g/h with gcd(g,h) = 1, h monic, of degree max(deg g, deg h).
class RatMap {
  public:
    RatMap() = default;
    // Reduces the fraction and normalizes the denominator monic.
    RatMap(const Poly& g, const Poly& h);

    const Poly& num() const { return g_; }
    const Poly& den() const { return h_; }
    int degree() const { return d_; }
    const FieldPtr& ctx() const { return g_.ctx(); }
    bool is_polynomial() const { return h_.degree() == 0; }

    bool operator==(const RatMap& o) const { return g_ == o.g_ && h_ == o.h_; }
    bool operator!=(const RatMap& o) const { return !(*this == o); }

  private:
    Poly g_, h_;
    int d_ = 0;
    struct Trusted {};
    RatMap(Poly g, Poly h, Trusted);
    friend RatMap compose(const RatMap&, const RatMap&, const Caps&);
};

// Projective evaluation; poles map to infinity, infinity follows the leading
// coefficients.
ProjPoint eval_proj(const RatMap& R, const ProjPoint& x);
ProjPoint eval_proj(const RatMap& R, const FElem& x);

RatMap identity_map(const FieldPtr& ctx);
RatMap compose(const RatMap& R, const RatMap& S, const Caps& caps = {}); // R after S
RatMap iterate(const RatMap& R, int n, const Caps& caps = {});

// R = base^{p^pexp} (multiplicative power) with base not itself a p-th power.
struct PReduction {
    RatMap base;
    int pexp = 0;
    int d() const { return base.degree(); }
};
PReduction p_reduction(const RatMap& R);

// The field automorphisms relating fibers of R to fibers of its reduction:
// to_reduced_value(R, a) = sigma_R(a), from_reduced_value inverts it.
FElem to_reduced_value(const RatMap& R, const FElem& a);
FElem to_reduced_value(const PReduction& red, const FElem& a);
FElem from_reduced_value(const PReduction& red, const FElem& a);

// W = g'h - g h' of a reduced map of degree > 1, and its degree (<= 2d-2).
// Throws InseparableUnreduced when W vanishes.
std::pair<Poly, int> wronskian(const RatMap& reduced);

// Number of distinct points in the fiber over beta: distinct roots of
// g - beta*h. Always <= degree of the p-reduction.
int fiber_count(const RatMap& R, const FElem& beta);

// The finite value of R at infinity, when there is one. Equivalently the
// unique gamma with deg(g - gamma*h) < deg(R).
std::optional<FElem> finite_value_at_infinity(const RatMap& R);

// Monic with positive degree and without roots in the coefficient field.
bool monic_without_base_roots(const Poly& f);

// h^{deg f} * f(g/h), monicized: the polynomial whose roots are the
// R-preimages of the roots of f. Requires monic_without_base_roots(f), which
// also guarantees deg = deg(f)*deg(R) with no drop.
Poly pullback(const Poly& f, const RatMap& R, const Caps& caps = {});
Poly pullback_iterate(const Poly& f, const RatMap& R, int n, const Caps& caps = {});

// Class of an invertible 2x2 matrix over the base field.
struct Mobius {
    FElem a, b, c, d;

    FElem det() const { return a * d - b * c; }
    static Mobius identity(const FieldPtr& ctx);
};

Mobius mobius_inverse(const Mobius& A); // adjugate; SingularMatrix when det = 0

// The three actions: on admissible polynomials, on points outside the base
// field, and on rational maps.
Poly mobius_on_poly(const Mobius& A, const Poly& f);
FElem mobius_on_point(const Mobius& A, const FElem& alpha);
RatMap mobius_on_map(const Mobius& A, const RatMap& R);

struct ConjugateResult {
    RatMap map;
    bool is_polynomial;
};
// The conjugate map x -> mu_A(g(mu_A^{-1}(x))) of a polynomial g.
ConjugateResult conjugate_map(const Mobius& A, const Poly& g);

// Embeds coefficients into a compatible larger field.
Poly lift(const Poly& a, const FieldPtr& target);

} // namespace fqdyn

#endif
