#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fqdyn/poly.hpp"
#include "fqdyn/rng.hpp"

using namespace fqdyn;

namespace {

Poly P(const FieldPtr& ctx, std::vector<int64_t> asc) { return Poly::from_int_coeffs(ctx, asc); }

// Independent oracle: count distinct roots of `a` by exhaustive evaluation in
// F_{q^1..q^kmax}; valid when every root lies within degree kmax.
int count_roots_exhaustive(const Poly& a, int kmax) {
    int count = 0;
    for (int k = 1; k <= kmax; ++k) {
        auto ext = k == 1 ? a.ctx() : extension(a.ctx(), k, a.ctx()->seed());
        for (const auto& x : ext->all_elements()) {
            if (minimal_degree(x, a.ctx()->m()) != k) continue; // new points only
            if (eval(a, x).is_zero()) ++count;
        }
    }
    return count;
}

} // namespace

TEST_CASE("arithmetic ring identities") {
    auto f2 = prime_field(2);
    CHECK(P(f2, {1, 1}) * P(f2, {1, 1}) == P(f2, {1, 0, 1})); // (x+1)^2 = x^2+1

    auto f3 = prime_field(3);
    auto [q, r] = divrem(P(f3, {1, 0, 0, 0, 1}), P(f3, {0, 1, 0, 1}));
    CHECK(q == P(f3, {0, 1}));
    CHECK(r == P(f3, {1, 0, 2}));
    // multiply back
    CHECK(q * P(f3, {0, 1, 0, 1}) + r == P(f3, {1, 0, 0, 0, 1}));

    Poly a = P(f3, {2, 1, 2});
    CHECK(a + Poly::zero(f3) == a);
    CHECK_THROWS_AS(divrem(a, Poly::zero(f3)), Error);
}

TEST_CASE("gcd") {
    auto f3 = prime_field(3);
    CHECK(gcd(P(f3, {2, 0, 1}), P(f3, {2, 1})) == P(f3, {2, 1}));      // gcd(x^2-1, x-1) = x-1... x-1 = x+2
    CHECK(gcd(P(f3, {1, 0, 1}), P(f3, {2, 0, 1})) == Poly::one(f3));   // difference is a unit
    CHECK(gcd(P(f3, {0, 2}), Poly::zero(f3)) == P(f3, {0, 1}));        // gcd(a, 0) = monic(a)
}

TEST_CASE("derivative in characteristic p") {
    auto f3 = prime_field(3);
    CHECK(derivative(P(f3, {0, 0, 1})) == P(f3, {0, 2}));
    auto f2 = prime_field(2);
    CHECK(derivative(P(f2, {0, 0, 1})).is_zero());
    CHECK(derivative(P(f2, {0, 1, 0, 1})) == P(f2, {1, 0, 1}));
}

TEST_CASE("pth_root") {
    auto f2 = prime_field(2);
    CHECK(pth_root(P(f2, {0, 0, 1})) == P(f2, {0, 1}));
    CHECK(pth_root(P(f2, {1, 0, 1})) == P(f2, {1, 1}));
    CHECK_THROWS_AS(pth_root(P(f2, {0, 1, 1})), Error);
    // coefficients get their p-th roots: over F_4, (t x)^2 = t^2 x^2
    auto f4 = extension(f2, 2, 0);
    FElem t = f4->gen();
    Poly tx = Poly::from_coeffs(f4, {f4->zero(), t});
    Poly sq = tx * tx;
    CHECK(pth_root(sq) == tx);
}

TEST_CASE("radical and distinct_root_count") {
    auto f3 = prime_field(3);
    CHECK(radical(P(f3, {0, 0, 1})) == P(f3, {0, 1}));
    CHECK(distinct_root_count(P(f3, {0, 0, 1})) == 1);
    CHECK(radical(P(f3, {1, 1, 1})) == P(f3, {2, 1})); // (x-1)^2 = x^2+x+1 mod 3
    CHECK(distinct_root_count(P(f3, {1, 1, 1})) == 1);

    auto f5 = prime_field(5);
    Poly g = P(f5, {2, 0, 2, 0, 1}); // x^4+2x^2+2, squarefree: gcd with derivative is 1
    CHECK(gcd(g, derivative(g)) == Poly::one(f5));
    CHECK(radical(g) == g);
    CHECK(distinct_root_count(g) == 4);
    CHECK(distinct_root_count(g) == count_roots_exhaustive(g, 4));

    CHECK_THROWS_AS(radical(Poly::zero(f5)), Error);

    // char-p tricky case: multiplicity divisible by p
    auto f2 = prime_field(2);
    Poly h = P(f2, {1, 1});
    Poly pow8 = h * h * h * h * h * h * h * h * P(f2, {1, 1, 1});
    CHECK(radical(pow8) == P(f2, {1, 1}) * P(f2, {1, 1, 1}));
}

TEST_CASE("radical properties (seeded random)") {
    auto rng = make_rng(11);
    for (int64_t p : {2, 3, 5}) {
        auto ctx = prime_field(p);
        for (int iter = 0; iter < 60; ++iter) {
            std::vector<int64_t> c(size_t(2 + rng_below(rng, 9)));
            for (auto& v : c) v = int64_t(rng_below(rng, uint64_t(p)));
            Poly a = Poly::from_int_coeffs(ctx, c);
            if (a.is_zero()) continue;
            Poly r = radical(a);
            // radical(a) divides a; idempotent; squarefree
            if (a.degree() > 0) CHECK((a % r).is_zero());
            CHECK(radical(r) == r);
            if (!derivative(r).is_zero()) CHECK(gcd(r, derivative(r)) == Poly::one(ctx));
        }
    }
}

TEST_CASE("factor fixed examples") {
    auto f3 = prime_field(3);
    Poly x4p1 = P(f3, {1, 0, 0, 0, 1});
    auto fs = factor(x4p1);
    REQUIRE(fs.size() == 2);
    CHECK(fs[0].factor == P(f3, {2, 1, 1}));
    CHECK(fs[0].multiplicity == 1);
    CHECK(fs[1].factor == P(f3, {2, 2, 1}));
    CHECK(fs[1].multiplicity == 1);
    CHECK(fs[0].factor * fs[1].factor == x4p1); // expand the product

    auto f2 = prime_field(2);
    auto fs2 = factor(P(f2, {1, 0, 1, 0, 1}));
    REQUIRE(fs2.size() == 1);
    CHECK(fs2[0].factor == P(f2, {1, 1, 1}));
    CHECK(fs2[0].multiplicity == 2);
    CHECK(fs2[0].factor * fs2[0].factor == P(f2, {1, 0, 1, 0, 1})); // square and compare

    auto fs3 = factor(P(f2, {1, 1, 1}));
    REQUIRE(fs3.size() == 1);
    CHECK(fs3[0].multiplicity == 1);
    CHECK(is_irreducible(P(f2, {1, 1, 1})));
}

TEST_CASE("factor reconstructs input and factors are irreducible (seeded)") {
    auto rng = make_rng(23);
    for (auto [p, m] : {std::pair<int64_t, int>{2, 1}, {3, 1}, {5, 1}, {2, 2}, {3, 2}}) {
        auto base = prime_field(p);
        auto ctx = m == 1 ? base : extension(base, m, 0);
        for (int iter = 0; iter < 25; ++iter) {
            std::vector<int64_t> flat(size_t((2 + rng_below(rng, 8)) * uint64_t(m)));
            std::vector<FElem> cs;
            for (size_t i = 0; i + size_t(m) <= flat.size(); i += size_t(m)) {
                std::vector<int64_t> c(size_t(m), 0);
                for (auto& v : c) v = int64_t(rng_below(rng, uint64_t(p)));
                cs.emplace_back(ctx, std::move(c));
            }
            Poly a = Poly::from_coeffs(ctx, cs);
            if (a.degree() < 1) continue;
            auto fs = factor(a, iter);
            Poly prod = Poly::one(ctx);
            for (auto& [q, e] : fs) {
                CHECK(q.is_monic());
                CHECK(is_irreducible(q));
                for (int j = 0; j < e; ++j) prod = prod * q;
            }
            CHECK(prod == monic(a));
        }
    }
}

TEST_CASE("roots_in_closure") {
    auto f3 = prime_field(3);
    // x^2+1 irreducible over F_3: two roots in F_9
    auto gs = roots_in_closure(P(f3, {1, 0, 1}));
    REQUIRE(gs.size() == 1);
    CHECK(gs[0].ext_degree == 2);
    CHECK(gs[0].roots.size() == 2);
    for (const auto& r : gs[0].roots) CHECK(eval(P(f3, {1, 0, 1}), r).is_zero());

    // x^2-1 over F_3: roots 1, 2
    auto gs2 = roots_in_closure(P(f3, {2, 0, 1}));
    REQUIRE(gs2.size() == 1);
    CHECK(gs2[0].ext_degree == 1);
    REQUIRE(gs2[0].roots.size() == 2);
    CHECK(gs2[0].roots[0] == f3->from_int(1));
    CHECK(gs2[0].roots[1] == f3->from_int(2));

    // x^2 over F_5: single root 0
    auto f5 = prime_field(5);
    auto gs3 = roots_in_closure(P(f5, {0, 0, 1}));
    REQUIRE(gs3.size() == 1);
    CHECK(gs3[0].roots.size() == 1);
    CHECK(gs3[0].roots[0].is_zero());
}

TEST_CASE("roots_in_closure counts match radical degree (seeded)") {
    auto rng = make_rng(5);
    for (int64_t p : {2, 3, 5}) {
        auto ctx = prime_field(p);
        for (int iter = 0; iter < 20; ++iter) {
            std::vector<int64_t> c(size_t(2 + rng_below(rng, 6)));
            for (auto& v : c) v = int64_t(rng_below(rng, uint64_t(p)));
            Poly a = Poly::from_int_coeffs(ctx, c);
            if (a.degree() < 1) continue;
            auto groups = roots_in_closure(a);
            int total = 0;
            for (auto& g : groups) {
                total += int(g.roots.size());
                for (const auto& r : g.roots) CHECK(eval(a, r).is_zero());
            }
            CHECK(total == distinct_root_count(a));
        }
    }
}

TEST_CASE("distinct root count is additive across coprime products (sampled)") {
    auto f5 = prime_field(5);
    auto rng = make_rng(19);
    for (int iter = 0; iter < 40; ++iter) {
        std::vector<int64_t> ca(size_t(2 + rng_below(rng, 4))), cb(size_t(2 + rng_below(rng, 4)));
        for (auto& v : ca) v = int64_t(rng_below(rng, 5));
        for (auto& v : cb) v = int64_t(rng_below(rng, 5));
        Poly a = Poly::from_int_coeffs(f5, ca), b = Poly::from_int_coeffs(f5, cb);
        if (a.degree() < 1 || b.degree() < 1) continue;
        if (gcd(a, b) != Poly::one(f5)) continue;
        CHECK(distinct_root_count(a * b) == distinct_root_count(a) + distinct_root_count(b));
    }
}

TEST_CASE("eval") {
    auto f5 = prime_field(5);
    CHECK(eval(P(f5, {1, 0, 1}), f5->from_int(2)).is_zero());
    CHECK(eval(P(f5, {3, 1}), f5->from_int(0)) == f5->from_int(3));
    CHECK(eval(Poly::zero(f5), f5->from_int(4)).is_zero());
    // cross-field: evaluate an F_3 polynomial at a point of F_9
    auto f3 = prime_field(3);
    auto f9 = extension(f3, 2, 0);
    FElem t = f9->gen();
    FElem v = eval(P(f3, {1, 0, 1}), t);
    CHECK(v == t * t + f9->one());
}
