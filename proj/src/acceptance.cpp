#include "fqdyn/acceptance.hpp"

#include <atomic>
#include <functional>
#include <mutex>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

#include "fqdyn/io.hpp"
#include "fqdyn/rng.hpp"
#include "fqdyn/stats.hpp"

namespace fqdyn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

BigInt bigpow(int64_t b, int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

// index-deterministic parallel loop over pure per-item work
void parallel_for(int count, const std::function<void(int)>& body) {
    const int jobs = std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), 8u);
    if (jobs <= 1 || count < 4) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> threads;
    std::exception_ptr first_error;
    std::mutex err_mu;
    for (int t = 0; t < jobs; ++t)
        threads.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

Poly P(const FieldPtr& ctx, std::vector<int64_t> asc) { return Poly::from_int_coeffs(ctx, asc); }

FieldPtr base_field_for(int64_t q) {
    if (q == 9) return extension(prime_field(3), 2, 0);
    return prime_field(q);
}

FElem random_elem(const FieldPtr& ctx, std::mt19937_64& rng) {
    std::vector<int64_t> c(size_t(ctx->m()), 0);
    for (auto& v : c) v = int64_t(rng_below(rng, uint64_t(ctx->p())));
    return FElem(ctx, std::move(c));
}

Poly random_poly(const FieldPtr& ctx, int deg_max, std::mt19937_64& rng) {
    std::vector<FElem> c;
    for (int i = 0; i <= deg_max; ++i) c.push_back(random_elem(ctx, rng));
    return Poly::from_coeffs(ctx, c);
}

struct SamplePair {
    RatMap R;
    FElem alpha;
    int e = 1;
    int d = 0, dprime = 0;
    DepthTable table;
    Rat c;
    bool periodic = false;
    bool trivial_hit = false;
    int64_t q = 0;
};

// Seeded sample of maps and points across q in {2,3,5,7,9}, D <= 3, with the
// requested distribution of extension degrees for alpha.
std::vector<SamplePair> build_pool(int count, const std::vector<int>& e_choices, uint64_t seed,
                                   const Caps& caps) {
    std::vector<SamplePair> pool;
    auto rng = make_rng(seed);
    const std::vector<int64_t> qs{2, 3, 5, 7, 9};
    int attempts = 0;
    while (int(pool.size()) < count && attempts < count * 300) {
        ++attempts;
        int64_t q = qs[size_t(rng_below(rng, qs.size()))];
        auto base = base_field_for(q);
        int D = rng_below(rng, 10) < 7 ? 2 : 3;
        int e = e_choices[size_t(rng_below(rng, e_choices.size()))];

        Poly g = random_poly(base, D, rng);
        Poly h = random_poly(base, int(rng_below(rng, uint64_t(D + 1))), rng);
        if (g.is_zero() || h.is_zero()) continue;
        if (std::max(g.degree(), h.degree()) != D) continue;
        if (gcd(g, h).degree() > 0) continue;
        RatMap R(g, h);
        PReduction red = p_reduction(R);
        if (red.d() < 2) continue;

        auto actx = e == 1 ? base : extension(base, e, 0);
        FElem alpha = random_elem(actx, rng);
        if (minimal_degree(alpha, base->m()) != e) continue;

        SamplePair sp{R, alpha, e, red.d(), wronskian(red.base).second, {}, Rat(0), false, false, q};
        try {
            sp.table = depth_table(R, alpha, caps);
        } catch (const Error& err) {
            if (err.code() == Errc::OutsideScope) continue;
            throw;
        }
        sp.c = growth_constant(sp.table);
        sp.periodic = sp.table.periodic;
        sp.trivial_hit = trivial_in_reversed_orbit(R, alpha, caps);
        pool.push_back(std::move(sp));
    }
    return pool;
}

// -------------------------------------------------------------------------
// criterion 1: exact constant and counts for x^2+1 over F_5 at 0
// -------------------------------------------------------------------------
CriterionResult criterion1(const Caps& caps) {
    CriterionResult res{1, "exact constant F_5 x^2+1 at 0", false, false, ""};
    auto t0 = Clock::now();
    auto f5 = prime_field(5);
    RatMap R(P(f5, {1, 0, 1}), P(f5, {1}));
    FElem zero = f5->from_int(0);
    bool ok = growth_constant(R, zero, caps) == Rat(6, 7);
    DeltaOracle oracle(R, caps);
    std::ostringstream details;
    for (int k = 1; k <= 3; ++k) {
        BigInt expect = (6 * bigpow(8, k) + 1) / 7;
        int got = oracle.at(zero, 3 * k);
        if (BigInt(got) != expect) ok = false;
        details << "delta(" << 3 * k << ")=" << got << " ";
    }
    double dt = seconds_since(t0);
    details << "c=6/7 time=" << dt << "s";
    res.pass = ok && dt < 5.0;
    res.details = details.str();
    return res;
}

// -------------------------------------------------------------------------
// criterion 2: the depth-count identity, oracle vs formula
// -------------------------------------------------------------------------
CriterionResult criterion2(const std::vector<SamplePair>& pool, const Caps& caps, int min_samples) {
    CriterionResult res{2, "acyclic count identity to depth 4", false, false, ""};
    std::atomic<int> checked{0}, failures{0};
    parallel_for(int(pool.size()), [&](int i) {
        const auto& sp = pool[size_t(i)];
        for (int m = 1; m <= 4; ++m) {
            BigInt formula = acyclic_count_formula(sp.table, m);
            int oracle = acyclic_preimage_count(sp.R, sp.alpha, m, caps);
            if (BigInt(oracle) != formula) ++failures;
            ++checked;
        }
    });
    std::ostringstream details;
    details << pool.size() << " pairs, " << checked << " identities, " << failures << " failures";
    res.pass = int(pool.size()) >= min_samples && failures == 0;
    res.details = details.str();
    return res;
}

// -------------------------------------------------------------------------
// criterion 3: sharpness of the growth estimate
// -------------------------------------------------------------------------
CriterionResult criterion3(const std::vector<SamplePair>& pool, const Caps& caps, double scale) {
    CriterionResult res{3, "growth estimate sharpness", false, false, ""};
    const int nmax_periodic = scale >= 1.0 ? 10 : 7;
    std::atomic<int> exact_checked{0}, exact_failures{0}, periodic_checked{0}, periodic_failures{0};
    parallel_for(int(pool.size()), [&](int idx) {
        const auto& sp = pool[size_t(idx)];
        DeltaOracle oracle(sp.R, caps);
        if (!sp.periodic) {
            if (sp.c == 0) return; // critical pairs are covered by criterion 5
            int deepest = sp.table.max_depth();
            if (deepest > 8) return;
            for (int n = deepest; n <= 8; ++n) {
                Rat expect = sp.c * Rat(bigpow(sp.d, n));
                if (Rat(oracle.at(sp.alpha, n)) != expect) ++exact_failures;
                ++exact_checked;
            }
        } else {
            // |delta(n) - c d^n| is eventually periodic in n with period N;
            // its maximum over a window covering a full period is never
            // exceeded afterwards
            const int N = int(sp.table.rows.size());
            const int J = sp.table.max_depth();
            const int K = std::min(nmax_periodic, std::max(5, J + N));
            if (K >= nmax_periodic) return;
            Rat m1(0), m2(0);
            for (int n = 0; n <= nmax_periodic; ++n) {
                Rat err = Rat(oracle.at(sp.alpha, n)) - sp.c * Rat(bigpow(sp.d, n));
                if (err < 0) err = -err;
                if (n <= K)
                    m1 = std::max(m1, err);
                else
                    m2 = std::max(m2, err);
            }
            if (m2 > m1) ++periodic_failures;
            ++periodic_checked;
        }
    });
    std::ostringstream details;
    details << "exact: " << exact_checked << " checks/" << exact_failures << " failures; periodic: "
            << periodic_checked << " pairs/" << periodic_failures << " failures";
    res.pass = exact_failures == 0 && periodic_failures == 0 && exact_checked > 0 && periodic_checked > 0;
    res.details = details.str();
    return res;
}

// -------------------------------------------------------------------------
// criterion 4: lower bounds on the growth constant, by branch
// -------------------------------------------------------------------------
CriterionResult criterion4(const std::vector<SamplePair>& pool, const std::vector<SamplePair>& ext_pool) {
    CriterionResult res{4, "growth constant branch bounds", false, false, ""};
    int violations = 0, nonper = 0, per = 0, highe = 0;
    auto check_pair = [&](const SamplePair& sp) {
        if (sp.c == 0) return; // critical
        const int d = sp.d, dp = sp.dprime, e = sp.e;
        if (!(sp.c > 0 && sp.c <= 1)) ++violations;
        if (!sp.periodic) {
            ++nonper;
            if (sp.c < Rat(1, d * d) - Rat(1, int64_t(d) * d * d)) ++violations;
            if (e > 1) {
                Rat bound = Rat(1) - Rat(dp, int64_t(d) * e);
                if (sp.c < bound || bound < Rat(1, d)) ++violations;
            } else if (!sp.trivial_hit) {
                int md = std::min(d - 1, dp);
                Rat bound = Rat(1) - Rat(md, d) - Rat(dp - md, int64_t(d) * d);
                if (sp.c < bound || bound < Rat(1, int64_t(d) * d)) ++violations;
            }
        } else {
            ++per;
            if (sp.c < Rat(1, 4 * int64_t(d) * d)) ++violations;
            if (e > 2) {
                ++highe;
                Rat bound = Rat(1) - Rat(dp, int64_t(e) * (d - 1));
                if (sp.c < bound || bound < Rat(1, 3)) ++violations;
            } else if (e == 2) {
                if (sp.c < Rat(1, int64_t(d) * d) - Rat(1, int64_t(d) * d * d)) ++violations;
            }
        }
    };
    for (const auto& sp : pool) check_pair(sp);
    for (const auto& sp : ext_pool) check_pair(sp);
    std::ostringstream details;
    details << nonper << " non-periodic + " << per << " periodic pairs (" << highe
            << " with e>2), " << violations << " violations";
    res.pass = violations == 0 && nonper > 0 && per > 0 && highe > 0;
    res.details = details.str();
    return res;
}

// -------------------------------------------------------------------------
// criterion 5: the critical families
// -------------------------------------------------------------------------
struct FamilyInstance {
    RatMap R;
    FElem alpha;
    std::vector<FElem> expected_orbit; // empty means skip the set comparison
};

Poly linpow(const FElem& root, int e) {
    Poly acc = Poly::one(root.ctx());
    Poly lin = Poly::linear_root(root);
    for (int i = 0; i < e; ++i) acc = acc * lin;
    return acc;
}

// project a polynomial with subfield coefficients down to the base
Poly project_poly(const Poly& p, const FieldPtr& base) {
    std::vector<FElem> c;
    for (int i = 0; i <= p.degree(); ++i) {
        auto down = project(p.coeff(i), base);
        if (!down) raise(Errc::Inconsistency, "coefficient outside the base field");
        c.push_back(*down);
    }
    return Poly::from_coeffs(base, c);
}

struct InstanceOutcome {
    bool classified = false;      // critical with the expected family label
    bool orbit_ok = false;        // enumerated reversed orbit matches
    bool delta_ok = false;        // delta(n) <= 2 for n <= 10
    int max_delta = 0;
    std::string err;
};

InstanceOutcome check_instance(Family fam, const FamilyInstance& inst, const Caps& caps) {
    InstanceOutcome out;
    CritReport rep;
    try {
        rep = classify(inst.R, inst.alpha, caps);
    } catch (const Error& e) {
        out.err = e.what();
        return out;
    }
    if (!rep.critical || rep.family != fam) {
        out.err = std::string("classified as ") + family_name(rep.family);
        return out;
    }
    out.classified = true;
    out.orbit_ok = true;
    if (!inst.expected_orbit.empty()) {
        std::vector<FElem> want = inst.expected_orbit;
        std::sort(want.begin(), want.end(), [](const FElem& a, const FElem& b) { return canonical_cmp(a, b) < 0; });
        if (want.size() != rep.reversed_orbit_elements.size()) {
            out.orbit_ok = false;
            out.err = "reversed orbit size mismatch";
        } else {
            for (size_t i = 0; i < want.size(); ++i)
                if (!(want[i] == rep.reversed_orbit_elements[i])) {
                    out.orbit_ok = false;
                    out.err = "reversed orbit element mismatch";
                }
        }
    }
    DeltaOracle oracle(inst.R, caps);
    out.delta_ok = true;
    for (int n = 0; n <= 10; ++n) {
        int dv = oracle.at(inst.alpha, n);
        out.max_delta = std::max(out.max_delta, dv);
        if (dv > 2) out.delta_ok = false;
    }
    if (!out.delta_ok && out.err.empty())
        out.err = "delta reached " + std::to_string(out.max_delta);
    return out;
}

CriterionResult criterion5(const Caps& caps) {
    CriterionResult res{5, "critical family instantiation", false, false, ""};
    std::ostringstream details;
    int families_ok = 0, families_total = 0, known_defects = 0;

    for (int64_t q : {3, 5, 7}) {
        auto base = prime_field(q);
        auto ext = extension(base, 2, 0);
        const int D = 2;
        FElem zero = base->zero(), one = base->one();

        auto elems = base->all_elements();
        auto try_family = [&](Family fam, const char* label, auto&& generator) {
            ++families_total;
            std::string err = "no instance found";
            for (auto inst = generator(); inst.has_value(); inst = generator()) {
                InstanceOutcome out = check_instance(fam, *inst, caps);
                if (out.classified && out.orbit_ok && out.delta_ok) {
                    ++families_ok;
                    return;
                }
                // II_i attains delta = 3 = |reversed orbit|, contradicting
                // the quoted bound; everything else about it verifies
                if (fam == Family::II_i && out.classified && out.orbit_ok && out.max_delta == 3) {
                    ++known_defects;
                    details << "q=" << q << " II_i: delta=3 (known defect of the source bound); ";
                    return;
                }
                err = out.err;
            }
            details << "q=" << q << " " << label << ": " << err << "; ";
        };

        // D1: reduction degree 1, R = (x^p + 1)/(x^p + 2)
        {
            ++families_total;
            std::vector<int64_t> mono(size_t(q) + 1, 0);
            mono[size_t(q)] = 1;
            Poly xp = Poly::from_int_coeffs(base, mono);
            RatMap R(xp + Poly::one(base), xp + Poly::constant(base->from_int(2)));
            CritReport rep = classify(R, zero, caps);
            bool ok = rep.critical && rep.family == Family::D1 && rep.d == 1 &&
                      rep.reversed_orbit_finite == Finiteness::Finite;
            DeltaOracle oracle(R, caps);
            for (int n = 0; n <= 10 && ok; ++n) ok = oracle.at(zero, n) <= 2;
            if (ok)
                ++families_ok;
            else
                details << "q=" << q << " D1 failed; ";
        }

        // I_a: R = alpha + lambda/h, alpha = 0 non-periodic
        {
            size_t i = 0;
            std::vector<FamilyInstance> cands;
            for (int64_t a1 = 0; a1 < q; ++a1)
                for (int64_t a0 = 1; a0 < q; ++a0)
                    cands.push_back(FamilyInstance{RatMap(Poly::one(base), P(base, {a0, a1, 1})), zero, {zero}});
            try_family(Family::I_a, "I_a", [&]() -> std::optional<FamilyInstance> {
                if (i >= cands.size()) return std::nullopt;
                return cands[i++];
            });
        }

        // I_b: R = beta + lambda/((x-beta)^D - lambda/(beta-alpha)), alpha = 0
        {
            std::vector<FamilyInstance> cands;
            for (int64_t b = 1; b < q; ++b)
                for (int64_t l = 1; l < q; ++l) {
                    FElem beta = base->from_int(b), lambda = base->from_int(l);
                    Poly den = linpow(beta, D) - Poly::constant(lambda / beta);
                    cands.push_back(
                        FamilyInstance{RatMap(den * beta + Poly::constant(lambda), den), zero, {zero, beta}});
                }
            size_t i = 0;
            try_family(Family::I_b, "I_b", [&]() -> std::optional<FamilyInstance> {
                if (i >= cands.size()) return std::nullopt;
                return cands[i++];
            });
        }

        // II_a and II_b: conjugate fixed point / two-cycle
        {
            std::vector<FamilyInstance> ca, cb;
            for (const auto& alpha : ext->all_elements()) {
                if (minimal_degree(alpha, 1) != 2) continue;
                FElem conj = frobenius(alpha, 1);
                Poly da = linpow(alpha, D), dc = linpow(conj, D);
                Poly den = da - dc;
                // normalized over the extension, the coefficients drop to the
                // base field (the raw numerator and denominator are only
                // anti-symmetric under conjugation)
                RatMap ra(da * conj - dc * alpha, den);
                RatMap rb(da * alpha - dc * conj, den);
                ca.push_back(FamilyInstance{
                    RatMap(project_poly(ra.num(), base), project_poly(ra.den(), base)), alpha, {alpha}});
                cb.push_back(FamilyInstance{
                    RatMap(project_poly(rb.num(), base), project_poly(rb.den(), base)), alpha, {alpha, conj}});
                if (ca.size() >= 4) break;
            }
            size_t ia = 0, ib = 0;
            try_family(Family::II_a, "II_a", [&]() -> std::optional<FamilyInstance> {
                if (ia >= ca.size()) return std::nullopt;
                return ca[ia++];
            });
            try_family(Family::II_b, "II_b", [&]() -> std::optional<FamilyInstance> {
                if (ib >= cb.size()) return std::nullopt;
                return cb[ib++];
            });
        }

        // II_c: three-cycle, d = 2
        {
            std::vector<FamilyInstance> cands;
            FElem two = base->from_int(2);
            for (int64_t y1 = 0; y1 < q; ++y1)
                for (int64_t y2 = 0; y2 < q; ++y2) {
                    if (y1 == y2) continue;
                    FElem Y1 = base->from_int(y1), Y2 = base->from_int(y2);
                    Poly d1 = linpow(Y1, D), d2 = linpow(Y2, D);
                    Poly num = d1 * Y1 - d2 * (Y1 + Y2);
                    Poly den = d1 - d2 * two;
                    if (den.is_zero()) continue;
                    cands.push_back(FamilyInstance{RatMap(num, den), Y1, {Y1, Y2, (Y1 + Y2) / two}});
                }
            size_t i = 0;
            try_family(Family::II_c, "II_c", [&]() -> std::optional<FamilyInstance> {
                if (i >= cands.size()) return std::nullopt;
                return cands[i++];
            });
        }

        // II_d: two-cycle {alpha, beta} with one-point fibers
        {
            std::vector<FamilyInstance> cands;
            for (int64_t b = 1; b < q; ++b)
                for (int64_t l = 1; l < q; ++l)
                    for (int A = 1; A <= D; ++A) {
                        FElem beta = base->from_int(b), lambda = base->from_int(l);
                        int B = D;
                        Poly pa = linpow(zero, A) * linpow(beta, 0);
                        Poly pb = linpow(beta, B);
                        Poly num = pa * zero - pb * (beta * lambda);
                        Poly den = pa - pb * lambda;
                        if (den.is_zero() || num.is_zero()) continue;
                        if (std::max(num.degree(), den.degree()) != D) continue;
                        cands.push_back(FamilyInstance{RatMap(num, den), zero, {zero, beta}});
                    }
            size_t i = 0;
            try_family(Family::II_d, "II_d", [&]() -> std::optional<FamilyInstance> {
                if (i >= cands.size()) return std::nullopt;
                return cands[i++];
            });
        }

        // II_e, II_f, II_i: quadratic two-cycles and fixed points with deeper
        // deficiency; II_g, II_h: fixed-point families
        {
            std::vector<FamilyInstance> ce, cf, cg, ch, ci;
            FElem two = base->from_int(2), four = base->from_int(4);
            for (int64_t b = 1; b < q; ++b) {
                FElem beta = base->from_int(b);
                FElem amb = zero - beta;
                // II_e
                {
                    Poly lin = Poly::from_coeffs(base, {-beta, two});
                    Poly den = lin * lin + Poly::constant(amb.pow(2));
                    ce.push_back(FamilyInstance{RatMap(den * beta + Poly::constant(amb.pow(3)), den), zero,
                                                {zero, beta, beta / two}});
                }
                // II_f
                {
                    Poly den = linpow(zero, D) + Poly::constant(amb.pow(2));
                    cf.push_back(FamilyInstance{RatMap(den * beta + Poly::constant(two * amb.pow(3)), den), zero,
                                                {zero, beta, zero - beta}});
                }
                // II_i
                {
                    Poly lin = Poly::from_coeffs(base, {-beta, two});
                    Poly den = lin * lin * four - Poly::constant(two * amb.pow(2));
                    ci.push_back(FamilyInstance{RatMap(den * (beta / two) + Poly::constant(amb.pow(3)), den),
                                                zero,
                                                {zero, beta, beta / two}});
                }
                // II_h: R = (beta(x-beta)^A x^(D-A) - 0)/((x-beta)^A x^(D-A) - lambda)
                for (int64_t l = 1; l < q; ++l) {
                    FElem lambda = base->from_int(l);
                    Poly core = Poly::linear_root(beta) * Poly::x(base);
                    ch.push_back(FamilyInstance{RatMap(core * beta, core - Poly::constant(lambda)), zero,
                                                {zero, beta}});
                }
            }
            // II_g: R = x^A/h with a fixed point at 0
            for (int64_t a1 = 0; a1 < q; ++a1)
                for (int64_t a0 = 1; a0 < q; ++a0)
                    cg.push_back(FamilyInstance{RatMap(Poly::x(base), P(base, {a0, a1, 1})), zero, {zero}});
            auto drive = [&](Family fam, const char* label, std::vector<FamilyInstance>& cands) {
                size_t i = 0;
                try_family(fam, label, [&]() -> std::optional<FamilyInstance> {
                    if (i >= cands.size()) return std::nullopt;
                    return cands[i++];
                });
            };
            drive(Family::II_e, "II_e", ce);
            drive(Family::II_f, "II_f", cf);
            drive(Family::II_g, "II_g", cg);
            drive(Family::II_h, "II_h", ch);
            drive(Family::II_i, "II_i", ci);
        }
    }

    // a reduced map with p-power exponent: II_g at the cube of the transform
    {
        ++families_total;
        auto f3 = prime_field(3);
        Poly g = Poly::x(f3), h = P(f3, {1, 1, 1});
        Poly g3 = g * g * g, h3 = h * h * h;
        // (x/(x^2+x+1))^3 as a multiplicative power: D = 6, d = 2
        RatMap R(g3, h3);
        CritReport rep = classify(R, f3->zero(), caps);
        bool ok = rep.critical && rep.family == Family::II_g && rep.d == 2 && R.degree() == 6;
        if (ok)
            ++families_ok;
        else
            details << "II_g p-power case failed; ";
    }

    res.pass = families_ok == families_total;
    res.known_defect = !res.pass && families_ok + known_defects == families_total && known_defects > 0;
    std::ostringstream head;
    head << families_ok << "/" << families_total << " family instances fully verified";
    if (known_defects > 0) head << ", " << known_defects << " failing only the delta<=2 sub-check";
    res.details = head.str() + (details.str().empty() ? "" : " [" + details.str() + "]");
    return res;
}

// -------------------------------------------------------------------------
// criterion 6: deficiency bookkeeping bounds
// -------------------------------------------------------------------------
CriterionResult criterion6(const std::vector<SamplePair>& pool, const std::vector<SamplePair>& ext_pool,
                           const Caps& caps) {
    CriterionResult res{6, "deficiency bounds", false, false, ""};
    std::atomic<int> violations{0}, grouped{0}, highe{0};
    auto check = [&](const SamplePair& sp) {
        DeficiencyTable dt = deficiency_table(sp.R);
        if (dt.nontrivial_gap_sum() > dt.dprime || dt.dprime > 2 * dt.d - 2) ++violations;

        // grouped bound across the cycle rows: sum of kappa over the distinct
        // periodic elements is at most eps + N
        if (sp.periodic) {
            int ksum_rows = 0;
            for (size_t i = 0; i < sp.table.rows.size(); ++i) ksum_rows += sp.table.row_sum(i);
            int eps_rows = sp.trivial_hit ? 2 * dt.d - 1 : dt.dprime;
            if (ksum_rows > eps_rows + int(sp.table.rows.size())) ++violations;
        }

        // kappa and delta per conjugate of alpha
        const auto& base = sp.R.ctx();
        std::vector<FElem> conj;
        FElem cur = sp.alpha;
        for (int i = 0; i < sp.e; ++i) {
            conj.push_back(cur);
            cur = frobenius(cur, base->m());
        }
        int ksum = 0, dsum = 0;
        bool trivial_any = false;
        for (const auto& a : conj) {
            DepthTable t = depth_table(sp.R, a, caps);
            int kappa = 0;
            for (const auto& [j, w] : t.alpha_row().n) kappa += w;
            ksum += kappa;
            dsum += t.periodic ? 1 : 0;
            if (trivial_in_reversed_orbit(sp.R, a, caps)) trivial_any = true;
            if (sp.e > 1) {
                ++highe;
                // kappa <= d'/e + delta
                if (int64_t(kappa) * sp.e > dt.dprime + (t.periodic ? sp.e : 0)) ++violations;
            }
        }
        int eps = trivial_any ? 2 * dt.d - 1 : dt.dprime;
        if (ksum > eps + dsum) ++violations;
        ++grouped;
    };
    parallel_for(int(pool.size()), [&](int i) { check(pool[size_t(i)]); });
    parallel_for(int(ext_pool.size()), [&](int i) { check(ext_pool[size_t(i)]); });
    std::ostringstream details;
    details << grouped << " conjugate groups (" << highe << " rows with e>1), " << violations
            << " violations";
    res.pass = violations == 0 && grouped > 0 && highe > 0;
    res.details = details.str();
    return res;
}

// -------------------------------------------------------------------------
// criterion 7: root identity and conjugation invariance
// -------------------------------------------------------------------------
CriterionResult criterion7(double scale, const Caps& caps) {
    CriterionResult res{7, "transform root identity and conjugation invariance", false, false, ""};
    const int target = std::max(10, int(50 * scale));
    auto rng = make_rng(0x7007);
    int rt_done = 0, rt_fail = 0;
    const std::vector<int64_t> qs{2, 3, 5, 7, 9};
    int guard = 0;
    while (rt_done < target && guard++ < target * 400) {
        int64_t q = qs[size_t(rng_below(rng, qs.size()))];
        auto base = base_field_for(q);
        int degf = 2 + int(rng_below(rng, 2));
        std::vector<FElem> fc;
        for (int i = 0; i < degf; ++i) fc.push_back(random_elem(base, rng));
        fc.push_back(base->one());
        Poly f = Poly::from_coeffs(base, fc);
        if (!monic_without_base_roots(f)) continue;
        int D = 1 + int(rng_below(rng, 3));
        Poly g = random_poly(base, D, rng);
        Poly h = random_poly(base, int(rng_below(rng, uint64_t(D + 1))), rng);
        if (g.is_zero() || h.is_zero() || gcd(g, h).degree() > 0) continue;
        if (std::max(g.degree(), h.degree()) != D) continue;
        RatMap R(g, h);
        int n = 1 + int(rng_below(rng, 3));
        auto c = delta_consistency(f, R, n, caps);
        if (!c.equal || !c.radicals_match) ++rt_fail;
        ++rt_done;
    }

    int cj_done = 0, cj_fail = 0;
    guard = 0;
    while (cj_done < target && guard++ < target * 400) {
        int64_t q = qs[size_t(rng_below(rng, qs.size()))];
        auto base = base_field_for(q);
        int degf = 2 + int(rng_below(rng, 2));
        std::vector<FElem> fc;
        for (int i = 0; i < degf; ++i) fc.push_back(random_elem(base, rng));
        fc.push_back(base->one());
        Poly f = Poly::from_coeffs(base, fc);
        if (!monic_without_base_roots(f)) continue;
        Poly g = random_poly(base, 2, rng);
        if (g.degree() < 1) continue;
        Mobius A{random_elem(base, rng), random_elem(base, rng), random_elem(base, rng),
                 random_elem(base, rng)};
        if (A.det().is_zero()) continue;
        auto chk = conjugate_invariance(f, g, A, 3, caps);
        if (!chk.equal) ++cj_fail;
        ++cj_done;
    }
    std::ostringstream details;
    details << "root identity: " << rt_done << " runs/" << rt_fail << " failures; conjugation: " << cj_done
            << " runs/" << cj_fail << " failures";
    res.pass = rt_fail == 0 && cj_fail == 0 && rt_done >= target && cj_done >= target;
    res.details = details.str();
    return res;
}

// -------------------------------------------------------------------------
// criterion 8: growth internals
// -------------------------------------------------------------------------
CriterionResult criterion8(double scale, const Caps& caps) {
    CriterionResult res{8, "growth internals", false, false, ""};
    auto f3 = prime_field(3);
    Poly f = P(f3, {1, 0, 1});
    RatMap sq(P(f3, {0, 0, 1}), Poly::one(f3));
    auto rep = growth_report(f, sq, 8, caps);
    bool ok = rep.product_bound_ok && rep.log_lower_bound_ok;
    for (int n = 0; n <= 8; ++n)
        if (rep.records[size_t(n)].delta != (2 << n)) ok = false;

    // bounds on random records
    auto rng = make_rng(0x880);
    const int target = std::max(5, int(12 * scale));
    int done = 0, guard = 0;
    while (done < target && guard++ < target * 200) {
        int64_t q = std::vector<int64_t>{2, 3, 5}[size_t(rng_below(rng, 3))];
        auto base = prime_field(q);
        std::vector<FElem> fc{random_elem(base, rng), random_elem(base, rng), base->one()};
        Poly ff = Poly::from_coeffs(base, fc);
        if (!monic_without_base_roots(ff)) continue;
        Poly g = random_poly(base, 2, rng);
        Poly h = random_poly(base, int(rng_below(rng, 3)), rng);
        if (g.is_zero() || h.is_zero() || gcd(g, h).degree() > 0) continue;
        if (std::max(g.degree(), h.degree()) != 2) continue;
        auto grep = growth_report(ff, RatMap(g, h), 5, caps);
        if (!grep.product_bound_ok || !grep.log_lower_bound_ok) ok = false;
        ++done;
    }
    std::ostringstream details;
    details << "delta(n)=2^(n+1) verified to n=8; bounds on " << done << " sampled reports";
    res.pass = ok && done >= target;
    res.details = details.str();
    return res;
}

// -------------------------------------------------------------------------
// criterion 9: kernel performance floor
// -------------------------------------------------------------------------
CriterionResult criterion9(const Caps& caps) {
    CriterionResult res{9, "kernel performance floor", false, false, ""};
    auto rng = make_rng(0x99);
    double worst_classify = 0;
    int classified = 0;
    for (int64_t q : {16, 25, 27, 47, 49}) {
        FieldPtr base;
        if (q == 16) base = extension(prime_field(2), 4, 0);
        else if (q == 25) base = extension(prime_field(5), 2, 0);
        else if (q == 27) base = extension(prime_field(3), 3, 0);
        else if (q == 49) base = extension(prime_field(7), 2, 0);
        else base = prime_field(q);
        for (int iter = 0; iter < 3; ++iter) {
            Poly g = random_poly(base, 4, rng);
            Poly h = random_poly(base, int(rng_below(rng, 5)), rng);
            if (g.is_zero() || h.is_zero() || gcd(g, h).degree() > 0) continue;
            if (std::max(g.degree(), h.degree()) != 4) continue;
            RatMap R(g, h);
            FElem alpha = random_elem(base, rng);
            auto t0 = Clock::now();
            try {
                classify(R, alpha, caps);
            } catch (const Error&) {
                // outside-scope classifications still count toward timing
            }
            worst_classify = std::max(worst_classify, seconds_since(t0));
            ++classified;
        }
    }

    auto f49 = extension(prime_field(7), 2, 0);
    Poly g = random_poly(f49, 2, rng);
    while (g.degree() != 2) g = random_poly(f49, 2, rng);
    RatMap R(g, Poly::one(f49));
    auto t0 = Clock::now();
    int dv = delta_oracle(R, random_elem(f49, rng), 10, caps);
    double oracle_time = seconds_since(t0);
    std::ostringstream details;
    details << classified << " classify calls, worst " << worst_classify << "s; delta(D=2,n=10)=" << dv
            << " in " << oracle_time << "s";
    res.pass = worst_classify < 1.0 && oracle_time < 10.0 && classified >= 10;
    res.details = details.str();
    return res;
}

} // namespace

std::vector<CriterionResult> run_acceptance(double scale, std::ostream& log) {
    Caps caps;
    const int pool_size = std::max(24, int(240 * scale));
    auto t0 = Clock::now();
    auto pool = build_pool(pool_size, {1, 1, 1, 2}, 0xACCE97, caps);
    auto ext_pool = build_pool(std::max(8, int(40 * scale)), {3, 4}, 0xE34, caps);
    log << "sample pool: " << pool.size() << " + " << ext_pool.size() << " pairs in "
        << seconds_since(t0) << "s\n";

    std::vector<CriterionResult> results;
    auto timed = [&](auto&& fn) {
        auto t1 = Clock::now();
        CriterionResult r = fn();
        const auto& res = results.emplace_back(std::move(r));
        log << "criterion " << res.id << " ["
            << (res.pass ? "PASS" : (res.known_defect ? "FAIL, known source defect" : "FAIL")) << "] "
            << res.name << ": " << res.details << " (" << seconds_since(t1) << "s)\n";
    };
    timed([&] { return criterion1(caps); });
    timed([&] { return criterion2(pool, caps, scale >= 1.0 ? 200 : 10); });
    timed([&] { return criterion3(pool, caps, scale); });
    timed([&] { return criterion4(pool, ext_pool); });
    timed([&] { return criterion5(caps); });
    timed([&] { return criterion6(pool, ext_pool, caps); });
    timed([&] { return criterion7(scale, caps); });
    timed([&] { return criterion8(scale, caps); });
    timed([&] { return criterion9(caps); });
    return results;
}

} // namespace fqdyn
