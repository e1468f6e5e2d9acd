#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fqdyn/stats.hpp"
#include "fqdyn/rng.hpp"

using namespace fqdyn;

namespace {
Poly P(const FieldPtr& ctx, std::vector<int64_t> asc) { return Poly::from_int_coeffs(ctx, asc); }
RatMap make(const FieldPtr& ctx, std::vector<int64_t> g, std::vector<int64_t> h) {
    return RatMap(P(ctx, std::move(g)), P(ctx, std::move(h)));
}
} // namespace

TEST_CASE("admissibility of transforms") {
    auto f3 = prime_field(3);
    CHECK(monic_without_base_roots(P(f3, {1, 0, 1})));       // values 1,2,2
    CHECK_FALSE(monic_without_base_roots(P(f3, {2, 0, 1}))); // root 1
    auto f2 = prime_field(2);
    CHECK_FALSE(monic_without_base_roots(P(f2, {0, 1}))); // root 0
}

TEST_CASE("statistics records") {
    auto f3 = prime_field(3);
    Poly f = P(f3, {1, 0, 1});
    RatMap sq = make(f3, {0, 0, 1}, {1});

    StatRecord r1 = stats_at(f, sq, 1);
    CHECK(r1.delta == 4);
    CHECK(r1.M == 2);
    CHECK(r1.Ncount == 2);
    CHECK(r1.A == Rat(2));

    StatRecord r0 = stats_at(f, sq, 0);
    CHECK(r0.delta == 2);
    CHECK(r0.M == 2);
    CHECK(r0.Ncount == 1);
    CHECK(r0.A == Rat(2));

    // quartic transform under x/(x^2+1)
    RatMap r = make(f3, {0, 1}, {1, 0, 1});
    Poly f2 = P(f3, {2, 1, 1});
    StatRecord rec = stats_at(f2, r, 1);
    CHECK(rec.delta == pullback(f2, r).degree()); // squarefree here
    CHECK(rec.A * Rat(rec.Ncount) == Rat(rec.delta));
}

TEST_CASE("root identity and radical equality") {
    auto f3 = prime_field(3);
    Poly f = P(f3, {1, 0, 1});
    RatMap sq = make(f3, {0, 0, 1}, {1});
    auto c1 = delta_consistency(f, sq, 1);
    CHECK(c1.lhs == 4);
    CHECK(c1.rhs == 4);
    CHECK(c1.equal);
    CHECK(c1.radicals_match);

    auto c0 = delta_consistency(f, sq, 0);
    CHECK(c0.lhs == radical(f).degree());
    CHECK(c0.equal);

    // precondition: f must have no roots in the base field
    auto f5 = prime_field(5);
    CHECK_THROWS_AS(delta_consistency(P(f5, {1, 0, 1}), make(f5, {1, 0, 1}, {1}), 1), Error);
}

TEST_CASE("root identity on seeded samples") {
    auto rng = make_rng(97);
    Caps caps;
    for (int64_t q : {2, 3, 5}) {
        auto ctx = prime_field(q);
        int done = 0;
        for (int iter = 0; iter < 200 && done < 8; ++iter) {
            std::vector<int64_t> fc{int64_t(rng_below(rng, uint64_t(q))), int64_t(rng_below(rng, uint64_t(q))), 1};
            Poly f = Poly::from_int_coeffs(ctx, fc);
            if (!monic_without_base_roots(f)) continue;
            std::vector<int64_t> gc(3), hc(3);
            for (auto& v : gc) v = int64_t(rng_below(rng, uint64_t(q)));
            for (auto& v : hc) v = int64_t(rng_below(rng, uint64_t(q)));
            Poly g = Poly::from_int_coeffs(ctx, gc), h = Poly::from_int_coeffs(ctx, hc);
            if (g.is_zero() || h.is_zero() || gcd(g, h).degree() > 0) continue;
            if (std::max(g.degree(), h.degree()) < 1) continue;
            RatMap R(g, h);
            for (int n = 0; n <= 2; ++n) {
                auto c = delta_consistency(f, R, n, caps);
                CHECK(c.equal);
                CHECK(c.radicals_match);
            }
            ++done;
        }
        CHECK(done > 0);
    }
}

TEST_CASE("growth report") {
    auto f3 = prime_field(3);
    Poly f = P(f3, {1, 0, 1});
    RatMap sq = make(f3, {0, 0, 1}, {1});
    auto rep = growth_report(f, sq, 6);
    REQUIRE(rep.records.size() == 7);
    // delta(n) = 2^(n+1) for this pair
    for (int n = 0; n <= 6; ++n) CHECK(rep.records[size_t(n)].delta == (2 << n));
    CHECK(rep.product_bound_ok);
    CHECK(rep.log_lower_bound_ok);
    CHECK(rep.fits.at("delta").verdict == "exponential-like");

    auto small = growth_report(f, sq, 3);
    CHECK(small.fits.at("delta").verdict == "inconclusive"); // < 4 points rule
}

TEST_CASE("conjugation invariance") {
    auto f3 = prime_field(3);
    Poly f = P(f3, {1, 0, 1});
    Poly g = P(f3, {0, 0, 1});

    auto id = conjugate_invariance(f, g, Mobius::identity(f3), 3);
    CHECK(id.equal);

    Mobius A{f3->one(), f3->one(), f3->zero(), f3->one()};
    auto chk = conjugate_invariance(f, g, A, 3);
    CHECK(chk.equal);
    REQUIRE(chk.lhs.size() == 4);
    for (size_t i = 0; i < chk.lhs.size(); ++i) {
        CHECK(chk.lhs[i].delta == chk.rhs[i].delta);
        CHECK(chk.lhs[i].M == chk.rhs[i].M);
        CHECK(chk.lhs[i].Ncount == chk.rhs[i].Ncount);
        CHECK(chk.lhs[i].A == chk.rhs[i].A);
    }

    Mobius S{f3->one(), f3->one(), f3->one(), f3->one()};
    CHECK_THROWS_AS(conjugate_invariance(f, g, S, 2), Error);
}

TEST_CASE("conjugation invariance on seeded samples") {
    auto f5 = prime_field(5);
    auto rng = make_rng(13);
    int done = 0;
    for (int iter = 0; iter < 100 && done < 10; ++iter) {
        std::vector<int64_t> fc{int64_t(rng_below(rng, 5)), int64_t(rng_below(rng, 5)), 1};
        Poly f = Poly::from_int_coeffs(f5, fc);
        if (!monic_without_base_roots(f)) continue;
        std::vector<int64_t> gc{int64_t(rng_below(rng, 5)), int64_t(rng_below(rng, 5)), 1};
        Poly g = Poly::from_int_coeffs(f5, gc);
        Mobius A{f5->from_int(int64_t(rng_below(rng, 5))), f5->from_int(int64_t(rng_below(rng, 5))),
                 f5->from_int(int64_t(rng_below(rng, 5))), f5->from_int(int64_t(rng_below(rng, 5)))};
        if (A.det().is_zero()) continue;
        auto chk = conjugate_invariance(f, g, A, 2);
        CHECK(chk.equal);
        ++done;
    }
    CHECK(done > 0);
}

TEST_CASE("bounded statistics when every root is critical") {
    // conjugate fixed-point family: R = (x^2 - N)/(2x - T) with T, N the
    // trace and norm of a generator alpha of F_9; alpha and its conjugate are
    // critical, and f = minpoly(alpha) is admissible
    auto f3 = prime_field(3);
    auto f9 = extension(f3, 2, 0);
    FElem alpha = f9->gen();
    FElem conj = frobenius(alpha, 1);
    FElem T = alpha + conj, N = alpha * conj;
    REQUIRE(T.in_prime_field());
    REQUIRE(N.in_prime_field());
    Poly g = P(f3, {-(*N.as_int()), 0, 1});
    Poly h = P(f3, {-(*T.as_int()), 2});
    RatMap r(g, h);
    REQUIRE(r.degree() == 2);

    auto rep = classify(r, alpha);
    CHECK(rep.critical);
    CHECK(rep.family == Family::II_a);

    Poly f = P(f3, {*N.as_int(), -(*T.as_int()), 1}); // minimal polynomial of alpha
    REQUIRE(monic_without_base_roots(f));
    for (int n = 0; n <= 6; ++n) {
        auto rec = stats_at(f, r, n);
        CHECK(rec.delta <= 2 * f.degree());
    }
}
