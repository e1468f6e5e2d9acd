#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fqdyn/dynamics.hpp"
#include "fqdyn/rng.hpp"

using namespace fqdyn;

namespace {

Poly P(const FieldPtr& ctx, std::vector<int64_t> asc) { return Poly::from_int_coeffs(ctx, asc); }

RatMap make(const FieldPtr& ctx, std::vector<int64_t> g, std::vector<int64_t> h) {
    return RatMap(P(ctx, std::move(g)), P(ctx, std::move(h)));
}

// Fully naive starred-count oracle: explicit roots at every level and
// periodicity of every node decided by its own forward orbit. Only viable at
// tiny scale; used to cross-validate the production enumeration.
int naive_acyclic_count(const RatMap& R, const FElem& alpha, int n, const Caps& caps) {
    std::vector<FElem> level{alpha};
    for (int depth = 1; depth <= n; ++depth) {
        std::vector<FElem> next;
        for (const auto& node : level) {
            Poly g = lift(R.num(), node.ctx()), h = lift(R.den(), node.ctx());
            Poly F = g - h * node;
            if (F.degree() >= 1)
                for (auto& grp : roots_in_closure(F))
                    for (auto& r : grp.roots) next.push_back(r);
        }
        level.clear();
        for (auto& nd : next) {
            OrbitRecord orb = forward_orbit(R, nd, caps);
            if (!orb.periodic()) level.push_back(std::move(nd));
        }
    }
    return int(level.size());
}

// Naive affine-chain preimage count: explicit roots at every level, no
// periodicity filtering.
int naive_delta(const RatMap& R, const FElem& alpha, int n) {
    std::vector<FElem> level{alpha};
    for (int depth = 1; depth <= n; ++depth) {
        std::vector<FElem> next;
        for (const auto& node : level) {
            Poly g = lift(R.num(), node.ctx()), h = lift(R.den(), node.ctx());
            Poly F = g - h * node;
            if (F.degree() >= 1)
                for (auto& grp : roots_in_closure(F))
                    for (auto& r : grp.roots) next.push_back(r);
        }
        level = std::move(next);
    }
    return int(level.size());
}

} // namespace

TEST_CASE("forward orbits") {
    auto f5 = prime_field(5);
    RatMap r = make(f5, {1, 0, 1}, {1}); // x^2+1
    auto o0 = forward_orbit(r, f5->from_int(0));
    CHECK(o0.tail_len == 0);
    CHECK(o0.cycle_len == 3);
    CHECK(o0.periodic());
    REQUIRE(o0.cycle.size() == 3);
    CHECK(o0.cycle[0] == ProjPoint::finite(f5->from_int(0)));
    CHECK(o0.cycle[1] == ProjPoint::finite(f5->from_int(1)));
    CHECK(o0.cycle[2] == ProjPoint::finite(f5->from_int(2)));

    auto o3 = forward_orbit(r, f5->from_int(3));
    CHECK(o3.tail_len == 1);
    CHECK(o3.cycle_len == 3);
    CHECK_FALSE(o3.periodic());

    auto f3 = prime_field(3);
    auto o2 = forward_orbit(make(f3, {0, 0, 1}, {1}), f3->from_int(2));
    CHECK(o2.tail_len == 1);
    CHECK(o2.cycle_len == 1);

    // orbit through a pole reaches infinity
    RatMap inv2 = make(f3, {1}, {0, 0, 1}); // 1/x^2
    auto oi = forward_orbit(inv2, f3->from_int(0));
    CHECK(oi.contains_infinity);
    CHECK(oi.periodic());
    CHECK(oi.cycle_len == 2);

    Caps tiny;
    tiny.orbit_log2_cap = 1.0;
    CHECK_THROWS_AS(forward_orbit(r, f5->from_int(0), tiny), Error);
}

TEST_CASE("preimages") {
    auto f5 = prime_field(5);
    RatMap r = make(f5, {1, 0, 1}, {1});
    auto p0 = preimages(r, f5->from_int(0));
    REQUIRE(p0.size() == 1);
    CHECK(p0[0].ext_degree == 1);
    REQUIRE(p0[0].roots.size() == 2);
    CHECK(p0[0].roots[0] == f5->from_int(2));
    CHECK(p0[0].roots[1] == f5->from_int(3));

    auto p1 = preimages(r, f5->from_int(1));
    REQUIRE(p1.size() == 1);
    REQUIRE(p1[0].roots.size() == 1);
    CHECK(p1[0].roots[0].is_zero());

    auto f3 = prime_field(3);
    auto p2 = preimages(make(f3, {0, 1}, {1, 0, 1}), f3->from_int(0));
    REQUIRE(p2.size() == 1);
    REQUIRE(p2[0].roots.size() == 1);
    CHECK(p2[0].roots[0].is_zero());
}

TEST_CASE("preimage count oracle") {
    auto f5 = prime_field(5);
    RatMap r = make(f5, {1, 0, 1}, {1});
    CHECK(delta_oracle(r, f5->from_int(0), 0) == 1);
    CHECK(delta_oracle(r, f5->from_int(0), 3) == 7);

    auto f3 = prime_field(3);
    RatMap sq = make(f3, {0, 0, 1}, {1});
    CHECK(delta_oracle(sq, f3->from_int(1), 5) == 32);

    // chains must stay affine: (x+2)/(x^2+2) over F_5 at 1 has pole chains
    // feeding back through infinity, which are not solutions
    RatMap w = make(f5, {2, 1}, {2, 0, 1});
    DeltaOracle oracle(w);
    CHECK(oracle.at(f5->from_int(1), 1) == 2);
    CHECK(oracle.at(f5->from_int(1), 2) == 3);
    CHECK(oracle.at(f5->from_int(1), 3) == 5);
    CHECK(oracle.at(f5->from_int(1), 4) == 9);

    // on maps whose infinity chain never reaches alpha, the pullback route
    // agrees with the distinct roots of g_n - alpha*h_n
    for (auto [gc, hc] : std::vector<std::pair<std::vector<int64_t>, std::vector<int64_t>>>{
             {{1, 0, 1}, {1}}, {{0, 1}, {1, 0, 1}}, {{2, 0, 1}, {0, 1}}}) {
        RatMap m2 = make(f5, gc, hc);
        for (int64_t a = 0; a < 5; ++a) {
            FElem alpha = f5->from_int(a);
            OrbitRecord inf = forward_orbit(m2, ProjPoint::infinity(f5));
            bool leak = false;
            for (int s = 1; s <= inf.tail_len; ++s)
                if (!inf.points[size_t(s)].is_infinity() && inf.points[size_t(s)].value() == alpha) leak = true;
            if (leak) continue;
            for (int nn = 0; nn <= 4; ++nn) {
                RatMap rn = iterate(m2, nn);
                Poly F = rn.num() - rn.den() * alpha;
                int composite = nn == 0 ? 1 : (F.degree() < 1 ? 0 : distinct_root_count(F));
                CHECK(delta_oracle(m2, alpha, nn) == composite);
            }
        }
    }
}

TEST_CASE("acyclic preimage counts") {
    auto f5 = prime_field(5);
    RatMap r = make(f5, {1, 0, 1}, {1});
    CHECK(acyclic_preimage_count(r, f5->from_int(0), 0) == 1);
    CHECK(acyclic_preimage_count(r, f5->from_int(0), 1) == 1); // preimage 2 is on the cycle

    auto f3 = prime_field(3);
    RatMap sq = make(f3, {0, 0, 1}, {1});
    CHECK(acyclic_preimage_count(sq, f3->from_int(2), 1) == 2);

    // pole chains never enter the counts: (x+2)/(x^2+2) over F_5 at 1
    RatMap w = make(f5, {2, 1}, {2, 0, 1});
    CHECK(acyclic_preimage_count(w, f5->from_int(1), 1) == 1);
    CHECK(acyclic_preimage_count(w, f5->from_int(1), 2) == 1);
    CHECK(acyclic_preimage_count(w, f5->from_int(1), 3) == 2);

    Caps caps;
    CHECK_THROWS_AS(acyclic_preimage_count(r, f5->from_int(0), 99, caps), Error);
}

TEST_CASE("delta oracle agrees with naive level enumeration (seeded)") {
    Caps caps;
    auto rng = make_rng(71);
    for (int64_t q : {2, 3, 5}) {
        auto ctx = prime_field(q);
        int done = 0;
        for (int iter = 0; iter < 80 && done < 10; ++iter) {
            std::vector<int64_t> gc(3), hc(3);
            for (auto& v : gc) v = int64_t(rng_below(rng, uint64_t(q)));
            for (auto& v : hc) v = int64_t(rng_below(rng, uint64_t(q)));
            Poly g = Poly::from_int_coeffs(ctx, gc), h = Poly::from_int_coeffs(ctx, hc);
            if (h.is_zero() || g.is_zero() || gcd(g, h).degree() > 0) continue;
            if (std::max(g.degree(), h.degree()) < 2) continue;
            RatMap R(g, h);
            FElem alpha = ctx->from_int(int64_t(rng_below(rng, uint64_t(q))));
            for (int n = 0; n <= 3; ++n) CHECK(delta_oracle(R, alpha, n, caps) == naive_delta(R, alpha, n));
            ++done;
        }
        CHECK(done > 0);
    }
}

TEST_CASE("acyclic counts agree with the fully naive enumeration (seeded)") {
    Caps caps;
    auto rng = make_rng(31);
    for (int64_t q : {2, 3}) {
        auto ctx = prime_field(q);
        int done = 0;
        for (int iter = 0; iter < 60 && done < 12; ++iter) {
            std::vector<int64_t> gc(3), hc(3);
            for (auto& v : gc) v = int64_t(rng_below(rng, uint64_t(q)));
            for (auto& v : hc) v = int64_t(rng_below(rng, uint64_t(q)));
            Poly g = Poly::from_int_coeffs(ctx, gc), h = Poly::from_int_coeffs(ctx, hc);
            if (h.is_zero() || g.is_zero() || gcd(g, h).degree() > 0) continue;
            if (std::max(g.degree(), h.degree()) < 2) continue;
            RatMap R(g, h);
            if (R.degree() < 2) continue;
            for (int64_t a = 0; a < q; ++a) {
                FElem alpha = ctx->from_int(a);
                for (int n = 0; n <= 3; ++n)
                    CHECK(acyclic_preimage_count(R, alpha, n, caps) == naive_acyclic_count(R, alpha, n, caps));
            }
            ++done;
        }
        CHECK(done > 0);
    }
}

TEST_CASE("deficiency tables") {
    auto f5 = prime_field(5);
    auto t1 = deficiency_table(make(f5, {1, 0, 1}, {1}));
    CHECK(t1.d == 2);
    CHECK(t1.dprime == 1);
    REQUIRE(t1.entries.size() == 1);
    CHECK(t1.entries[0].gamma == f5->from_int(1));
    CHECK(t1.entries[0].T == 2);
    CHECK(t1.entries[0].r == 1);
    CHECK(t1.entries[0].weight == 1);
    CHECK_FALSE(t1.entries[0].is_trivial);

    auto f3 = prime_field(3);
    auto t2 = deficiency_table(make(f3, {0, 1}, {1, 0, 1}));
    CHECK(t2.dprime == 2);
    REQUIRE(t2.entries.size() == 3);
    // sorted: 0 (trivial), 1, 2
    CHECK(t2.entries[0].gamma.is_zero());
    CHECK(t2.entries[0].is_trivial);
    CHECK(t2.entries[0].T == 1);
    CHECK(t2.entries[0].r == 1);
    CHECK(t2.entries[1].gamma == f3->from_int(1));
    CHECK(t2.entries[1].T == 2);
    CHECK(t2.entries[2].gamma == f3->from_int(2));
    CHECK(t2.entries[2].T == 2);

    auto f2 = prime_field(2);
    auto t3 = deficiency_table(make(f2, {0, 1, 1}, {1}));
    CHECK(t3.entries.empty());

    // gap sum bound: sum of (T - r) over non-trivial entries <= d'
    CHECK(t1.nontrivial_gap_sum() <= t1.dprime);
    CHECK(t2.nontrivial_gap_sum() <= t2.dprime);
}

TEST_CASE("depth tables") {
    auto f5 = prime_field(5);
    auto t1 = depth_table(make(f5, {1, 0, 1}, {1}), f5->from_int(0));
    REQUIRE(t1.rows.size() == 3);
    CHECK(t1.periodic);
    CHECK(t1.rows[0].alpha_i == f5->from_int(1));
    CHECK(t1.rows[1].alpha_i == f5->from_int(2));
    CHECK(t1.rows[2].alpha_i == f5->from_int(0));
    CHECK(t1.rows[0].n == std::map<int, int>{{1, 2}});
    CHECK(t1.rows[1].n == std::map<int, int>{{1, 1}});
    CHECK(t1.rows[2].n == std::map<int, int>{{1, 1}});
    CHECK(t1.max_depth() == 1);

    auto f3 = prime_field(3);
    auto t2 = depth_table(make(f3, {0, 0, 1}, {1}), f3->from_int(2));
    REQUIRE(t2.rows.size() == 1);
    CHECK_FALSE(t2.periodic);
    CHECK(t2.rows[0].n.empty());

    auto t3 = depth_table(make(f3, {0, 1}, {1, 0, 1}), f3->from_int(0));
    REQUIRE(t3.rows.size() == 1);
    CHECK(t3.periodic);
    CHECK(t3.rows[0].n == std::map<int, int>{{1, 2}});
}

TEST_CASE("outside-scope configurations") {
    auto f3 = prime_field(3);
    // cycle through infinity: 1/x^2 at 0
    RatMap inv2 = make(f3, {1}, {0, 0, 1});
    CHECK_THROWS_AS(depth_table(inv2, f3->from_int(0)), Error);
    auto rep = classify(inv2, f3->from_int(0));
    CHECK(rep.outside_scope);
    CHECK(rep.family == Family::OutsideScope);
    CHECK(rep.flags.cycle_through_infinity);
}

TEST_CASE("maps whose infinity chain feeds the target stay in scope") {
    // (x+2)/(x^2+2) over F_5 at 1: R(inf) = 0 -> 1 = alpha, yet the affine
    // bookkeeping is exact because pole chains are not solutions
    auto f5 = prime_field(5);
    RatMap w = make(f5, {2, 1}, {2, 0, 1});
    auto t = depth_table(w, f5->from_int(1));
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].n == std::map<int, int>{{1, 1}, {2, 1}});
    CHECK(growth_constant(t) == Rat(1, 2));
    for (int m = 1; m <= 4; ++m)
        CHECK(BigInt(acyclic_preimage_count(w, f5->from_int(1), m)) == acyclic_count_formula(t, m));
    // bounded error against c*d^n
    for (int nn = 1; nn <= 6; ++nn) {
        int dd = delta_oracle(w, f5->from_int(1), nn);
        CHECK(Rat(dd) - Rat(1, 2) * Rat(BigInt(1) << nn) == Rat(1));
    }
}

TEST_CASE("growth constants") {
    auto f5 = prime_field(5);
    Rat c1 = growth_constant(make(f5, {1, 0, 1}, {1}), f5->from_int(0));
    CHECK(c1 == Rat(6, 7));

    auto f3 = prime_field(3);
    CHECK(growth_constant(make(f3, {0, 0, 1}, {1}), f3->from_int(1)) == Rat(1));
    CHECK(growth_constant(make(f3, {0, 1}, {1, 0, 1}), f3->from_int(0)) == Rat(0));
}

TEST_CASE("total deficiency") {
    auto f5 = prime_field(5);
    RatMap r = make(f5, {1, 0, 1}, {1});
    CHECK(total_deficiency(r, f5->from_int(0)) == 1);
    CHECK(total_deficiency(r, f5->from_int(1)) == 2);
    auto f3 = prime_field(3);
    CHECK(total_deficiency(make(f3, {0, 0, 1}, {1}), f3->from_int(2)) == 0);
}

TEST_CASE("predictions") {
    auto f5 = prime_field(5);
    RatMap r = make(f5, {1, 0, 1}, {1});
    auto p9 = predicted_count(r, f5->from_int(0), 9);
    CHECK(p9.estimate == Rat(6, 7) * Rat(512));
    CHECK_FALSE(p9.guaranteed_exact); // periodic

    auto f3 = prime_field(3);
    RatMap sq = make(f3, {0, 0, 1}, {1});
    auto p4 = predicted_count(sq, f3->from_int(2), 4);
    CHECK(p4.estimate == Rat(16));
    CHECK(p4.guaranteed_exact);
    CHECK(delta_oracle(sq, f3->from_int(2), 4) == 16);

    auto p0 = predicted_count(sq, f3->from_int(2), 0);
    CHECK(p0.estimate == Rat(1));
    CHECK(p0.guaranteed_exact);
}

TEST_CASE("acyclic formula matches the oracle on the worked examples") {
    auto f5 = prime_field(5);
    RatMap r = make(f5, {1, 0, 1}, {1});
    auto t = depth_table(r, f5->from_int(0));
    for (int m = 1; m <= 4; ++m)
        CHECK(BigInt(acyclic_preimage_count(r, f5->from_int(0), m)) == acyclic_count_formula(t, m));

    auto f3 = prime_field(3);
    RatMap r2 = make(f3, {0, 1}, {1, 0, 1});
    for (int64_t a = 0; a < 3; ++a) {
        auto t2 = depth_table(r2, f3->from_int(a));
        for (int m = 1; m <= 4; ++m)
            CHECK(BigInt(acyclic_preimage_count(r2, f3->from_int(a), m)) == acyclic_count_formula(t2, m));
    }
}

TEST_CASE("classification of the worked examples") {
    auto f3 = prime_field(3);
    RatMap r = make(f3, {0, 1}, {1, 0, 1}); // x/(x^2+1)

    auto rep0 = classify(r, f3->from_int(0));
    CHECK(rep0.critical);
    CHECK(rep0.family == Family::II_g);
    CHECK(rep0.c == Rat(0));
    CHECK(rep0.reversed_orbit_finite == Finiteness::Finite);
    REQUIRE(rep0.reversed_orbit_elements.size() == 1);
    CHECK(rep0.reversed_orbit_elements[0].is_zero());

    auto rep1 = classify(r, f3->from_int(1));
    CHECK(rep1.critical);
    CHECK(rep1.family == Family::II_d);
    CHECK(rep1.N == 2);
    REQUIRE(rep1.reversed_orbit_elements.size() == 2);
    CHECK(rep1.reversed_orbit_elements[0] == f3->from_int(1));
    CHECK(rep1.reversed_orbit_elements[1] == f3->from_int(2));

    auto f5 = prime_field(5);
    auto rep2 = classify(make(f5, {1, 0, 1}, {1}), f5->from_int(0));
    CHECK_FALSE(rep2.critical);
    CHECK(rep2.family == Family::NonCritical);
    CHECK(rep2.c == Rat(6, 7));
    CHECK(rep2.reversed_orbit_finite == Finiteness::Infinite);

    // criticality forces small fibers: delta <= 2 for n <= 6 here
    for (int n = 0; n <= 6; ++n) CHECK(delta_oracle(r, f3->from_int(0), n) <= 2);
}

TEST_CASE("d = 1 maps") {
    auto f2 = prime_field(2);
    auto f4 = extension(f2, 2, 0);
    RatMap sq = make(f2, {0, 0, 1}, {1}); // x^2, reduction degree 1
    FElem t = f4->gen();
    auto rep = classify(sq, t);
    CHECK(rep.critical);
    CHECK(rep.d == 1);
    CHECK(rep.family == Family::D1);
    CHECK(rep.periodic); // t -> t+1 -> t
    CHECK(rep.N == 2);
    CHECK(rep.reversed_orbit_finite == Finiteness::Finite);
    // the backward orbit of t under x^2 is its Frobenius cycle
    CHECK(rep.reversed_orbit_elements.size() == 2);

    for (int n = 0; n <= 8; ++n) CHECK(delta_oracle(sq, t, n) <= 2);
}

TEST_CASE("conjugate points share kappa and the grouped bound holds") {
    auto f3 = prime_field(3);
    auto f9 = extension(f3, 2, 0);
    RatMap r = make(f3, {1, 0, 1}, {0, 1}); // (x^2+1)/x
    auto dt = deficiency_table(r);
    FElem a = f9->gen();
    int e = minimal_degree(a, 1);
    REQUIRE(e == 2);
    FElem conj = frobenius(a, 1);
    int k1 = total_deficiency(r, a);
    int k2 = total_deficiency(r, conj);
    CHECK(k1 == k2);
    bool trivial_hit = trivial_in_reversed_orbit(r, a, Caps{});
    int eps = trivial_hit ? 2 * dt.d - 1 : dt.dprime;
    auto periodic = [&](const FElem& x) { return forward_orbit(r, x).periodic() ? 1 : 0; };
    CHECK(k1 + k2 <= eps + periodic(a) + periodic(conj));
    // kappa <= d'/e + delta for e > 1
    CHECK(k1 <= dt.dprime / e + periodic(a));
}
