#include "fqdyn/dynamics.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

namespace fqdyn {

using BigInt = boost::multiprecision::cpp_int;

namespace {

BigInt bigpow(int64_t b, int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

// g, h lifted once into a working field; evaluation without per-step embeds.
struct MapEval {
    Poly g, h;
    FieldPtr ctx;

    MapEval(const RatMap& R, const FieldPtr& c) : g(lift(R.num(), c)), h(lift(R.den(), c)), ctx(c) {}

    ProjPoint operator()(const ProjPoint& x) const {
        if (x.is_infinity()) {
            if (g.degree() > h.degree()) return ProjPoint::infinity(ctx);
            if (g.degree() < h.degree()) return ProjPoint::finite(ctx->zero());
            return ProjPoint::finite(g.lc() / h.lc());
        }
        FElem hv = eval(h, x.value());
        if (hv.is_zero()) return ProjPoint::infinity(ctx);
        return ProjPoint::finite(eval(g, x.value()) / hv);
    }
};

// Allocation-free orbit stepper on flat residue buffers. Evaluates the lifted
// numerator and denominator by Horner and divides, so one inversion per step.
class FlatWalker {
  public:
    FlatWalker(const RatMap& R, const FieldPtr& ctx) : ctx_(ctx), m_(ctx->m()) {
        load(lift(R.num(), ctx), g_, dg_);
        load(lift(R.den(), ctx), h_, dh_);
        acc_.resize(size_t(m_));
        tmp_.resize(size_t(m_));
        gv_.resize(size_t(m_));
    }

    // out must not alias in; returns false when the image is infinity
    bool step(const int64_t* in, bool in_inf, int64_t* out) {
        if (in_inf) {
            if (dg_ > dh_) return false;
            if (dg_ < dh_) {
                ctx_->el_zero(out);
                return true;
            }
            ctx_->el_inv(h_.data() + size_t(dh_) * size_t(m_), tmp_.data());
            ctx_->el_mul(g_.data() + size_t(dg_) * size_t(m_), tmp_.data(), out);
            return true;
        }
        horner(h_, dh_, in, acc_.data());
        if (ctx_->el_is_zero(acc_.data())) return false; // pole
        horner(g_, dg_, in, gv_.data());
        ctx_->el_inv(acc_.data(), tmp_.data());
        ctx_->el_mul(gv_.data(), tmp_.data(), out);
        return true;
    }

  private:
    void load(const Poly& p, std::vector<int64_t>& dst, int& deg) {
        deg = p.degree();
        dst.assign(size_t(std::max(deg, 0) + 1) * size_t(m_), 0);
        for (int i = 0; i <= deg; ++i)
            std::copy(p.coeff_data(i), p.coeff_data(i) + m_, dst.data() + size_t(i) * size_t(m_));
    }
    void horner(const std::vector<int64_t>& c, int deg, const int64_t* x, int64_t* out) {
        std::copy(c.data() + size_t(deg) * size_t(m_), c.data() + size_t(deg + 1) * size_t(m_), out);
        for (int i = deg - 1; i >= 0; --i) {
            ctx_->el_mul(out, x, out);
            ctx_->el_add(out, c.data() + size_t(i) * size_t(m_), out);
        }
    }

    FieldPtr ctx_;
    int m_;
    std::vector<int64_t> g_, h_;
    int dg_ = 0, dh_ = 0;
    std::vector<int64_t> acc_, tmp_, gv_;
};

uint64_t hash_limbs(const int64_t* a, int m, bool inf) {
    if (inf) return 0x1f1f1f1f2e2e2e2eULL; // single point at infinity
    uint64_t s = 0x9e3779b97f4a7c15ULL;
    for (int i = 0; i < m; ++i) {
        s ^= uint64_t(a[i]) + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
        s *= 0xff51afd7ed558ccdULL;
        s ^= s >> 33;
    }
    return s;
}

OrbitRecord walk_orbit(const RatMap& R, const ProjPoint& start, int64_t step_cap) {
    const FieldPtr& ctx = start.ctx();
    const int m = ctx->m();
    FlatWalker walker(R, ctx);

    std::vector<int64_t> arena;   // visited points, m residues each
    std::vector<uint8_t> inf_at;  // parallel infinity flags
    std::unordered_map<uint64_t, std::vector<int32_t>> seen;
    std::vector<int64_t> cur(size_t(m), 0), nxt(size_t(m), 0);
    bool cur_inf = start.is_infinity();
    if (!cur_inf) std::copy(start.value().data(), start.value().data() + m, cur.data());

    OrbitRecord rec;
    for (int64_t i = 0;; ++i) {
        uint64_t hs = hash_limbs(cur.data(), m, cur_inf);
        auto it = seen.find(hs);
        int found = -1;
        if (it != seen.end()) {
            for (int32_t idx : it->second) {
                if (inf_at[size_t(idx)] != (cur_inf ? 1 : 0)) continue;
                if (cur_inf || std::equal(cur.begin(), cur.end(), arena.begin() + size_t(idx) * size_t(m))) {
                    found = idx;
                    break;
                }
            }
        }
        if (found >= 0) {
            rec.tail_len = found;
            rec.cycle_len = int(i) - found;
            break;
        }
        if (i > step_cap) raise(Errc::OrbitCapExceeded, "orbit walk exceeded the step budget");
        seen[hs].push_back(int32_t(i));
        arena.insert(arena.end(), cur.begin(), cur.end());
        inf_at.push_back(cur_inf ? 1 : 0);
        if (cur_inf) rec.contains_infinity = true;
        bool finite = walker.step(cur.data(), cur_inf, nxt.data());
        cur_inf = !finite;
        if (finite) std::swap(cur, nxt);
    }

    const int total = int(inf_at.size());
    rec.points.reserve(size_t(total) + 1);
    for (int i = 0; i < total; ++i) {
        if (inf_at[size_t(i)])
            rec.points.push_back(ProjPoint::infinity(ctx));
        else
            rec.points.push_back(ProjPoint::finite(FElem(
                ctx, std::vector<int64_t>(arena.begin() + size_t(i) * size_t(m),
                                          arena.begin() + size_t(i + 1) * size_t(m)))));
    }
    rec.points.push_back(rec.points[size_t(rec.tail_len)]); // close the loop
    rec.cycle.assign(rec.points.begin() + rec.tail_len, rec.points.begin() + rec.tail_len + rec.cycle_len);
    return rec;
}

// Walks the orbit of an affine start and reports the first step s >= 1 at
// which a target is reached, together with the target index. Returns
// {-1, -1} when the orbit repeats, leaves the affine line, or exhausts the
// step budget before any hit. The first target hit is automatically clean:
// an earlier periodic point would put the whole remaining orbit on a cycle
// that meets the targets earlier or never.
std::pair<int, int> first_affine_hit(const RatMap& R, const FElem& start, const std::vector<FElem>& targets,
                                     int64_t step_cap) {
    const FieldPtr& ctx = start.ctx();
    const int m = ctx->m();
    FlatWalker walker(R, ctx);

    std::vector<int64_t> tflat(targets.size() * size_t(m));
    std::vector<uint64_t> thash(targets.size());
    for (size_t t = 0; t < targets.size(); ++t) {
        std::copy(targets[t].data(), targets[t].data() + m, tflat.data() + t * size_t(m));
        thash[t] = hash_limbs(targets[t].data(), m, false);
    }

    std::vector<int64_t> arena;
    std::unordered_map<uint64_t, std::vector<int32_t>> seen;
    std::vector<int64_t> cur(start.coeffs()), nxt(size_t(m), 0);

    for (int64_t s = 0;; ++s) {
        uint64_t hs = hash_limbs(cur.data(), m, false);
        if (s >= 1) {
            for (size_t t = 0; t < targets.size(); ++t)
                if (thash[t] == hs &&
                    std::equal(cur.begin(), cur.end(), tflat.data() + t * size_t(m)))
                    return {int(s), int(t)};
        }
        auto it = seen.find(hs);
        if (it != seen.end()) {
            for (int32_t idx : it->second)
                if (std::equal(cur.begin(), cur.end(), arena.begin() + size_t(idx) * size_t(m)))
                    return {-1, -1};
        }
        if (s > step_cap) raise(Errc::OrbitCapExceeded, "orbit walk exceeded the step budget");
        seen[hs].push_back(int32_t(s));
        arena.insert(arena.end(), cur.begin(), cur.end());
        if (!walker.step(cur.data(), false, nxt.data())) return {-1, -1}; // into infinity
        std::swap(cur, nxt);
    }
}

} // namespace

OrbitRecord forward_orbit(const RatMap& R, const ProjPoint& alpha, const Caps& caps) {
    if (alpha.ctx()->log2q() > caps.orbit_log2_cap)
        raise(Errc::OrbitCapExceeded, "field larger than the orbit cap");
    int64_t qk = alpha.ctx()->q_i64().value_or(int64_t(1) << 62);
    return walk_orbit(R, alpha, qk + 2);
}

OrbitRecord forward_orbit(const RatMap& R, const FElem& alpha, const Caps& caps) {
    return forward_orbit(R, ProjPoint::finite(alpha), caps);
}

std::vector<RootGroup> preimages(const RatMap& R, const FElem& alpha) {
    const auto& ctx = alpha.ctx();
    Poly F = lift(R.num(), ctx) - lift(R.den(), ctx) * alpha;
    if (F.degree() < 1) return {};
    return roots_in_closure(F);
}

// ---------------------------------------------------------------------------
// Preimage-count oracles
// ---------------------------------------------------------------------------

DeltaOracle::DeltaOracle(RatMap R, Caps caps) : R_(std::move(R)), caps_(caps) {}

int DeltaOracle::at(const FElem& alpha, int n) {
    if (n < 0) raise(Errc::DomainError, "negative level");
    if (n == 0) return 1;
    auto key = std::make_pair(alpha.ctx().get(), alpha.coeffs());
    auto& chain = chains_[key];
    if (chain.empty()) chain.push_back(Poly::linear_root(alpha));
    if (!lifted_.count(alpha.ctx().get()))
        lifted_.emplace(alpha.ctx().get(), std::make_pair(lift(R_.num(), alpha.ctx()), lift(R_.den(), alpha.ctx())));
    const auto& [g, h] = lifted_.at(alpha.ctx().get());
    // chain[k] is the radical of the k-fold pullback: the transform only sees
    // root sets, so reducing to the squarefree part at each level preserves
    // every later count while keeping degrees at the true level width
    while (int(chain.size()) <= n) {
        const Poly& F = chain.back();
        if (int64_t(std::max(F.degree(), 0)) * R_.degree() > caps_.degree_cap)
            raise(Errc::DegreeOverflow, "pullback degree exceeds cap");
        Poly next = compose_cleared(F, g, h);
        if (next.is_zero()) raise(Errc::Inconsistency, "pullback chain vanished");
        chain.push_back(next.degree() >= 1 ? radical(next) : monic(next));
    }
    return std::max(chain[size_t(n)].degree(), 0);
}

int delta_oracle(const RatMap& R, const FElem& alpha, int n, const Caps& caps) {
    DeltaOracle o(R, caps);
    return o.at(alpha, n);
}

namespace {

// Periodic points in the preimage tree of alpha are exactly the elements of
// alpha's own cycle (the image of a periodic point is periodic, so a periodic
// preimage forces alpha onto its cycle). Membership against the embedded
// cycle therefore decides periodicity of any tree node.
struct CycleFilter {
    std::vector<ProjPoint> cycle; // in alpha's field; empty when alpha is not periodic
    std::map<const FieldCtx*, std::vector<ProjPoint>> embedded;

    bool is_periodic(const ProjPoint& node) {
        if (cycle.empty()) return false;
        auto key = node.ctx().get();
        auto it = embedded.find(key);
        if (it == embedded.end()) {
            std::vector<ProjPoint> e;
            e.reserve(cycle.size());
            for (const auto& c : cycle) e.push_back(embed_point(c, node.ctx()));
            it = embedded.emplace(key, std::move(e)).first;
        }
        for (const auto& c : it->second)
            if (c == node) return true;
        return false;
    }
};

} // namespace

int acyclic_preimage_count(const RatMap& R, const FElem& alpha, int n, const Caps& caps) {
    if (n < 0) raise(Errc::DomainError, "negative level");
    if (R.degree() > caps.star_max_d)
        raise(Errc::DegreeOverflow, "map degree exceeds the enumeration scale");
    if (n > caps.star_max_n) raise(Errc::DegreeOverflow, "level exceeds the enumeration scale");
    if (n == 0) return 1;

    const auto& actx = alpha.ctx();
    OrbitRecord orbit = forward_orbit(R, alpha, caps);
    CycleFilter filter;
    if (orbit.periodic()) filter.cycle = orbit.cycle;

    std::map<const FieldCtx*, std::pair<Poly, Poly>> lifted; // ctx -> (g, h)
    auto get_lifted = [&](const FieldPtr& ctx) -> const std::pair<Poly, Poly>& {
        auto it = lifted.find(ctx.get());
        if (it == lifted.end()) it = lifted.emplace(ctx.get(), std::make_pair(lift(R.num(), ctx), lift(R.den(), ctx))).first;
        return it->second;
    };

    std::vector<FElem> level{alpha};
    for (int depth = 1; depth < n; ++depth) {
        std::vector<FElem> next;
        for (const auto& node : level) {
            const auto& [g, h] = get_lifted(node.ctx());
            Poly F = g - h * node;
            if (F.degree() >= 1)
                for (auto& grp : roots_in_closure(F))
                    for (auto& r : grp.roots) next.push_back(r);
        }
        level.clear();
        for (auto& nd : next)
            if (!filter.is_periodic(ProjPoint::finite(nd))) level.push_back(std::move(nd));
    }

    // Count distinct children of the remaining clean nodes. Children of a
    // clean non-root node are never periodic; for n = 1 the root itself may
    // have its cycle predecessor among the children.
    int64_t count = 0;
    for (const auto& node : level) {
        const auto& [g, h] = get_lifted(node.ctx());
        Poly F = g - h * node;
        if (F.degree() >= 1) count += distinct_root_count(F);
    }
    if (n == 1 && orbit.periodic()) {
        MapEval step(R, actx);
        for (const auto& c : orbit.cycle)
            if (!c.is_infinity() && step(c) == ProjPoint::finite(alpha)) --count;
    }
    return int(count);
}

// ---------------------------------------------------------------------------
// Deficiency table
// ---------------------------------------------------------------------------

int DeficiencyTable::weight_sum() const {
    return std::accumulate(entries.begin(), entries.end(), 0,
                           [](int acc, const DeficiencyEntry& e) { return acc + e.weight; });
}

int DeficiencyTable::nontrivial_gap_sum() const {
    int acc = 0;
    for (const auto& e : entries)
        if (!e.is_trivial) acc += e.T - e.r;
    return acc;
}

DeficiencyTable deficiency_table(const RatMap& R) {
    PReduction red = p_reduction(R);
    const int d = red.d();
    if (d <= 1) raise(Errc::DomainError, "deficiency table requires reduction degree > 1");
    auto [W, dprime] = wronskian(red.base);
    const auto& base = R.ctx();

    DeficiencyTable out;
    out.d = d;
    out.dprime = dprime;

    // candidate deficient values: images of the Wronskian roots plus the
    // degree-drop value, pulled back through the reduction twist
    struct Cand {
        FElem gamma;
        int k;
        bool trivial;
    };
    std::vector<Cand> cands;
    if (W.degree() >= 1) {
        for (auto& grp : roots_in_closure(W)) {
            MapEval tilde(red.base, grp.field);
            for (auto& w : grp.roots) {
                ProjPoint v = tilde(ProjPoint::finite(w));
                if (v.is_infinity()) continue; // pole of the reduced map
                FElem gamma = from_reduced_value(red, v.value());
                cands.push_back({gamma, 0, false});
            }
        }
    }
    if (auto tv = finite_value_at_infinity(R)) cands.push_back({*tv, 0, true});

    // canonical home: the registry field of the minimal degree over the base
    std::vector<DeficiencyEntry> entries;
    auto seen = std::vector<std::pair<int, std::vector<int64_t>>>{};
    for (auto& c : cands) {
        int k = minimal_degree(c.gamma, base->m());
        FieldPtr home = (k == 1) ? base : extension(base, k, base->seed());
        FElem g_home = c.gamma;
        if (!c.gamma.ctx()->same_field(*home)) {
            auto proj = project(c.gamma, home);
            if (!proj) raise(Errc::Inconsistency, "candidate does not project to its minimal field");
            g_home = *proj;
        }
        std::pair<int, std::vector<int64_t>> key{k, g_home.coeffs()};
        bool dup = false;
        for (auto& s : seen)
            if (s == key) {
                dup = true;
                // the degree-drop value can also arise from a Wronskian root;
                // keep the trivial flag in that case
                if (c.trivial)
                    for (auto& e : entries)
                        if (e.ext_degree == k && e.gamma.coeffs() == g_home.coeffs()) e.is_trivial = true;
                break;
            }
        if (dup) continue;
        seen.push_back(std::move(key));

        int r = fiber_count(R, g_home);
        FElem sg = to_reduced_value(red, g_home);
        Poly F = lift(red.base.num(), home) - lift(red.base.den(), home) * sg;
        int T = std::max(F.degree(), 0);
        int weight = d - r;
        if (weight < 1) continue; // not actually deficient
        entries.push_back(DeficiencyEntry{g_home, k, T, r, weight, c.trivial});
    }
    std::sort(entries.begin(), entries.end(), [](const DeficiencyEntry& a, const DeficiencyEntry& b) {
        if (a.ext_degree != b.ext_degree) return a.ext_degree < b.ext_degree;
        return a.gamma.coeffs() < b.gamma.coeffs();
    });
    out.entries = std::move(entries);
    return out;
}

// ---------------------------------------------------------------------------
// Depth table
// ---------------------------------------------------------------------------

int DepthTable::max_depth() const {
    int md = 0;
    for (const auto& row : rows)
        for (const auto& [j, w] : row.n)
            if (w > 0) md = std::max(md, j);
    return md;
}

int DepthTable::row_sum(size_t i) const {
    int s = 0;
    for (const auto& [j, w] : rows[i].n) s += w;
    return s;
}

namespace {

int lcm_int(int a, int b) { return a / std::gcd(a, b) * b; }

// Index of the first target equal to pt, or -1.
int target_index(const std::vector<FElem>& targets, const ProjPoint& pt) {
    if (pt.is_infinity()) return -1;
    for (size_t i = 0; i < targets.size(); ++i)
        if (targets[i] == pt.value()) return int(i);
    return -1;
}

} // namespace

DepthTable depth_table(const RatMap& R, const FElem& alpha, const Caps& caps) {
    PReduction red = p_reduction(R);
    const int d = red.d();
    if (d <= 1) raise(Errc::DomainError, "depth table requires reduction degree > 1");
    const auto& actx = alpha.ctx();
    const auto& base = R.ctx();
    if (actx->m() % base->m() != 0) raise(Errc::NoEmbedding, "alpha in an incompatible field");

    OrbitRecord orbit = forward_orbit(R, alpha, caps);

    DepthTable table;
    table.periodic = orbit.periodic();
    table.d = d;
    if (table.periodic) {
        const int N = orbit.cycle_len;
        for (int i = 1; i <= N; ++i) {
            const ProjPoint& pt = orbit.points[size_t(i)];
            if (pt.is_infinity()) raise(Errc::OutsideScope, "cycle passes through infinity");
            table.rows.push_back(DepthRow{pt.value(), {}});
        }
    } else {
        table.rows.push_back(DepthRow{alpha, {}});
    }

    std::vector<FElem> targets;
    for (const auto& row : table.rows) targets.push_back(row.alpha_i);

    for (size_t i = 0; i < table.rows.size(); ++i) {
        int n1 = d - fiber_count(R, table.rows[i].alpha_i) + (table.periodic ? 1 : 0);
        if (n1 > 0) table.rows[i].n[1] = n1;
    }

    DeficiencyTable dt = deficiency_table(R);
    const int ke = actx->m() / base->m();
    // deficient values conjugate over alpha's field walk to the same target
    // at the same step with equal weights, so one representative per class
    // carries the whole class
    std::set<std::pair<int, std::vector<int64_t>>> consumed;
    for (const auto& entry : dt.entries) {
        if (consumed.count({entry.ext_degree, entry.gamma.coeffs()})) continue;
        int class_size = 0;
        FElem cur = entry.gamma;
        do {
            consumed.insert({entry.ext_degree, cur.coeffs()});
            cur = frobenius(cur, int64_t(base->m()) * ke);
            ++class_size;
        } while (!(cur == entry.gamma));

        const int L = lcm_int(entry.ext_degree, ke);
        FieldPtr wctx;
        if (L == entry.ext_degree)
            wctx = entry.gamma.ctx();
        else if (L == ke)
            wctx = actx;
        else
            wctx = extension(base, L, base->seed());
        FElem gw = embed(entry.gamma, wctx);
        std::vector<FElem> tw;
        tw.reserve(targets.size());
        for (const auto& t : targets) tw.push_back(embed(t, wctx));

        // cycle elements gather only through the j = 1 convention
        if (target_index(tw, ProjPoint::finite(gw)) >= 0) continue;
        auto [s, ti] = first_affine_hit(R, gw, tw, caps.walk_step_cap);
        if (s >= 1) table.rows[size_t(ti)].n[s + 1] += entry.weight * class_size;
    }
    return table;
}

BigInt acyclic_count_formula(const DepthTable& t, int m) {
    const auto& row = t.alpha_row();
    BigInt acc = bigpow(t.d, m);
    for (const auto& [j, w] : row.n) {
        if (j > m) continue;
        acc -= BigInt(w) * bigpow(t.d, m - j);
    }
    return acc;
}

Rat growth_constant(const DepthTable& t) {
    if (!t.periodic) {
        Rat c(1);
        for (const auto& [j, w] : t.rows[0].n) c -= Rat(BigInt(w), bigpow(t.d, j));
        if (c < 0 || c > 1) raise(Errc::Inconsistency, "growth constant out of range");
        return c;
    }
    const int N = int(t.rows.size());
    Rat num(0);
    for (int i = 1; i <= N; ++i) {
        Rat theta(1);
        for (const auto& [j, w] : t.rows[size_t(i - 1)].n) theta -= Rat(BigInt(w), bigpow(t.d, j));
        num += Rat(bigpow(t.d, i)) * theta;
    }
    Rat c = num / Rat(bigpow(t.d, N) - 1);
    if (c < 0 || c > 1) raise(Errc::Inconsistency, "growth constant out of range");
    return c;
}

Rat growth_constant(const RatMap& R, const FElem& alpha, const Caps& caps) {
    return growth_constant(depth_table(R, alpha, caps));
}

int total_deficiency(const RatMap& R, const FElem& alpha, const Caps& caps) {
    DepthTable t = depth_table(R, alpha, caps);
    int s = 0;
    for (const auto& [j, w] : t.alpha_row().n) s += w;
    return s;
}

Prediction predicted_count(const RatMap& R, const FElem& alpha, int n, const Caps& caps) {
    if (n < 0) raise(Errc::DomainError, "negative level");
    DepthTable t = depth_table(R, alpha, caps);
    Rat c = growth_constant(t);
    Rat est = c * Rat(bigpow(t.d, n));
    bool exact = false;
    if (!t.periodic) {
        int deepest = 0;
        for (const auto& [j, w] : t.rows[0].n)
            if (w > 0) deepest = std::max(deepest, j);
        exact = n >= deepest;
    }
    return Prediction{est, exact};
}

bool trivial_in_reversed_orbit(const RatMap& R, const FElem& alpha, const Caps& caps) {
    auto tv = finite_value_at_infinity(R);
    if (!tv) return false;
    OrbitRecord orbit = forward_orbit(R, alpha, caps);
    std::vector<FElem> targets;
    if (orbit.periodic())
        for (const auto& c : orbit.cycle) {
            if (c.is_infinity()) return false; // outside the affine bookkeeping anyway
            targets.push_back(c.value());
        }
    else
        targets.push_back(alpha);

    FElem tvw = embed(*tv, alpha.ctx());
    if (target_index(targets, ProjPoint::finite(tvw)) >= 0) return true;
    return first_affine_hit(R, tvw, targets, caps.walk_step_cap).first >= 1;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

const char* family_name(Family f) {
    switch (f) {
        case Family::D1: return "D1";
        case Family::I_a: return "I_a";
        case Family::I_b: return "I_b";
        case Family::II_a: return "II_a";
        case Family::II_b: return "II_b";
        case Family::II_c: return "II_c";
        case Family::II_d: return "II_d";
        case Family::II_e: return "II_e";
        case Family::II_f: return "II_f";
        case Family::II_g: return "II_g";
        case Family::II_h: return "II_h";
        case Family::II_i: return "II_i";
        case Family::NonCritical: return "NonCritical";
        case Family::OutsideScope: return "OutsideScope";
    }
    return "?";
}

namespace {

std::map<int, int> pat(std::initializer_list<std::pair<int, int>> entries) {
    std::map<int, int> m;
    for (auto& [j, w] : entries) m.emplace(j, w);
    return m;
}

Family match_family(int e, const DepthTable& t) {
    const int d = t.d;
    const auto& rows = t.rows;
    if (!t.periodic) {
        if (e != 1) raise(Errc::Inconsistency, "critical non-periodic point outside the base field");
        if (rows[0].n == pat({{1, d}})) return Family::I_a;
        if (rows[0].n == pat({{1, d - 1}, {2, d}})) return Family::I_b;
        raise(Errc::Inconsistency, "critical pair with unlisted non-periodic configuration");
    }
    const int N = int(rows.size());
    auto all_rows_are = [&](const std::map<int, int>& p) {
        for (const auto& row : rows)
            if (row.n != p) return false;
        return true;
    };
    if (e == 2 && N == 1 && rows[0].n == pat({{1, d}})) return Family::II_a;
    if (e == 2 && N == 2 && all_rows_are(pat({{1, d}}))) return Family::II_b;
    if (e == 1 && N == 3 && d == 2 && all_rows_are(pat({{1, 2}}))) return Family::II_c;
    if (e == 1 && N == 2 && all_rows_are(pat({{1, d}}))) return Family::II_d;
    if (e == 1 && N == 2 && d == 2 && rows[1].n == pat({{1, 2}}) && rows[0].n == pat({{1, 1}, {2, 2}}))
        return Family::II_e;
    if (e == 1 && N == 2 && d == 2 && rows[1].n == pat({{1, 1}, {2, 2}}) && rows[0].n == pat({{1, 2}}))
        return Family::II_f;
    if (e == 1 && N == 1 && rows[0].n == pat({{1, d}})) return Family::II_g;
    if (e == 1 && N == 1 && rows[0].n == pat({{1, d - 1}, {2, d}})) return Family::II_h;
    if (e == 1 && N == 1 && d == 2 && rows[0].n == pat({{1, 1}, {2, 1}, {3, 2}})) return Family::II_i;
    raise(Errc::Inconsistency, "critical pair with unlisted periodic configuration");
}

Poly linear_power(const FElem& root, int e) {
    Poly lin = Poly::linear_root(root);
    Poly acc = Poly::one(root.ctx());
    for (int i = 0; i < e; ++i) acc = acc * lin;
    return acc;
}

// fiber polynomial of R over gamma's field
Poly fiber_poly(const RatMap& R, const FElem& gamma) {
    return lift(R.num(), gamma.ctx()) - lift(R.den(), gamma.ctx()) * gamma;
}

bool is_power_of_linear(const Poly& F, const FElem& root) {
    if (F.degree() < 1) return false;
    return radical(F) == Poly::linear_root(root);
}

void verify_or_raise(bool ok, const char* family) {
    if (!ok) raise(Errc::Inconsistency, std::string("closed-form verification failed for family ") + family);
}

RatMap lift_map(const RatMap& R, const FieldPtr& ctx) { return RatMap(lift(R.num(), ctx), lift(R.den(), ctx)); }

// Cross-check the matched family against the displayed closed form,
// reconstructing the parameters from fiber data.
void verify_family(Family fam, const RatMap& R, const FElem& alpha, const DepthTable& t, const Caps& caps) {
    const int D = R.degree();
    const auto& actx = alpha.ctx();
    const RatMap Rl = lift_map(R, actx);
    switch (fam) {
        case Family::I_a: {
            verify_or_raise(fiber_poly(R, alpha).degree() == 0, "I_a");
            break;
        }
        case Family::I_b: {
            Poly Fa = fiber_poly(R, alpha);
            verify_or_raise(Fa.degree() == D, "I_b");
            Poly rad = radical(Fa);
            verify_or_raise(rad.degree() == 1, "I_b");
            FElem beta = -rad.coeff(0);
            verify_or_raise(beta != alpha, "I_b");
            Poly Fb = fiber_poly(R, beta);
            verify_or_raise(Fb.degree() == 0, "I_b");
            // R = beta + lambda / ((x-beta)^D - lambda/(beta-alpha))
            FElem lambda = Fb.coeff(0);
            Poly den = linear_power(beta, D) - Poly::constant(lambda / (beta - alpha));
            RatMap expect(den * beta + Poly::constant(lambda), den);
            verify_or_raise(expect == Rl, "I_b");
            break;
        }
        case Family::II_a: {
            FElem conj = frobenius(alpha, R.ctx()->m());
            verify_or_raise(conj != alpha, "II_a");
            verify_or_raise(is_power_of_linear(fiber_poly(R, alpha), alpha), "II_a");
            Poly da = linear_power(alpha, D), dc = linear_power(conj, D);
            Poly den = da - dc;
            RatMap expect(da * conj - dc * alpha, den);
            verify_or_raise(expect == Rl, "II_a");
            break;
        }
        case Family::II_b: {
            FElem conj = frobenius(alpha, R.ctx()->m());
            verify_or_raise(conj != alpha, "II_b");
            verify_or_raise(t.rows[0].alpha_i == conj, "II_b"); // R(alpha) is the conjugate
            Poly da = linear_power(alpha, D), dc = linear_power(conj, D);
            RatMap expect(da * alpha - dc * conj, da - dc);
            verify_or_raise(expect == Rl, "II_b");
            break;
        }
        case Family::II_c: {
            // one cycle element has the degree-dropped fiber; with T its
            // predecessor P and the remaining element M: 2P = M + T and
            // R = (M(x-M)^D - (M+T)(x-T)^D) / ((x-M)^D - 2(x-T)^D)
            std::vector<FElem> cyc;
            for (const auto& row : t.rows) cyc.push_back(row.alpha_i);
            int drop = -1;
            for (int i = 0; i < 3; ++i) {
                Poly F = fiber_poly(R, cyc[size_t(i)]);
                if (F.degree() < D) {
                    verify_or_raise(drop < 0, "II_c");
                    drop = i;
                } else {
                    verify_or_raise(F.degree() == D, "II_c");
                }
                verify_or_raise(radical(F).degree() == 1, "II_c");
            }
            verify_or_raise(drop >= 0, "II_c");
            FElem T = cyc[size_t(drop)];
            FElem P = -radical(fiber_poly(R, T)).coeff(0);
            FElem M = actx->zero();
            for (const auto& y : cyc)
                if (y != T && y != P) M = y;
            FElem two = actx->from_int(2);
            verify_or_raise(two * P == M + T, "II_c");
            Poly dm = linear_power(M, D), dt2 = linear_power(T, D);
            RatMap expect(dm * M - dt2 * (M + T), dm - dt2 * two);
            verify_or_raise(expect == Rl, "II_c");
            break;
        }
        case Family::II_d: {
            FElem partner = t.rows[0].alpha_i; // R(alpha)
            Poly Fa = fiber_poly(R, alpha), Fp = fiber_poly(R, partner);
            verify_or_raise(is_power_of_linear(Fa, partner) && is_power_of_linear(Fp, alpha), "II_d");
            verify_or_raise(std::max(Fa.degree(), Fp.degree()) == D, "II_d");
            break;
        }
        case Family::II_e: {
            FElem eta = t.rows[0].alpha_i; // the other cycle element
            Poly Fa = fiber_poly(R, alpha);
            verify_or_raise(Fa.degree() == D && is_power_of_linear(Fa, eta), "II_e");
            Poly Fe = fiber_poly(R, eta);
            auto roots = roots_in_field(Fe);
            verify_or_raise(roots.size() == 2, "II_e");
            FElem beta = roots[0] == alpha ? roots[1] : roots[0];
            verify_or_raise(beta != alpha && fiber_poly(R, beta).degree() == 0, "II_e");
            FElem two = alpha.ctx()->from_int(2);
            verify_or_raise(two * eta == alpha + beta, "II_e");
            FElem amb = alpha - beta;
            Poly lin = Poly::from_coeffs(actx, {-(alpha + beta), two});
            Poly den = Poly::one(actx);
            for (int i = 0; i < D; ++i) den = den * lin;
            den = den + Poly::constant(amb.pow(uint64_t(D)));
            RatMap expect(den * beta + Poly::constant(amb.pow(uint64_t(D + 1))), den);
            verify_or_raise(expect == Rl, "II_e");
            break;
        }
        case Family::II_f: {
            FElem partner = t.rows[0].alpha_i; // R(alpha) = 2*alpha - beta
            Poly Fp = fiber_poly(R, partner);
            verify_or_raise(Fp.degree() == D && is_power_of_linear(Fp, alpha), "II_f");
            FElem two = actx->from_int(2);
            FElem beta = two * alpha - partner;
            verify_or_raise(beta != alpha && fiber_poly(R, beta).degree() == 0, "II_f");
            FElem amb = alpha - beta;
            Poly den = linear_power(alpha, D) + Poly::constant(amb.pow(uint64_t(D)));
            RatMap expect(den * beta + Poly::constant(two * amb.pow(uint64_t(D + 1))), den);
            verify_or_raise(expect == Rl, "II_f");
            break;
        }
        case Family::II_g: {
            verify_or_raise(is_power_of_linear(fiber_poly(R, alpha), alpha), "II_g");
            break;
        }
        case Family::II_h: {
            Poly Fa = fiber_poly(R, alpha);
            verify_or_raise(Fa.degree() == D, "II_h");
            auto fs = factor(Fa, R.ctx()->seed());
            verify_or_raise(fs.size() == 2 && fs[0].factor.degree() == 1 && fs[1].factor.degree() == 1, "II_h");
            FElem r0 = -fs[0].factor.coeff(0), r1 = -fs[1].factor.coeff(0);
            verify_or_raise(r0 == alpha || r1 == alpha, "II_h");
            FElem beta = (r0 == alpha) ? r1 : r0;
            int A = (r0 == alpha) ? fs[1].multiplicity : fs[0].multiplicity;
            verify_or_raise(A >= 1 && A < D, "II_h");
            Poly Fb = fiber_poly(R, beta);
            verify_or_raise(Fb.degree() == 0, "II_h");
            // from g - alpha*h = Fa and g - beta*h = Fb: h = (Fa - Fb)/(beta - alpha)
            Poly core = linear_power(beta, A) * linear_power(alpha, D - A) * Fa.lc();
            verify_or_raise(core == Fa, "II_h");
            Poly h_exp = (core - Poly::constant(Fb.coeff(0))) * (beta - alpha).inv();
            Poly g_exp = h_exp * alpha + core;
            RatMap expect(g_exp, h_exp);
            verify_or_raise(expect == Rl, "II_h");
            break;
        }
        case Family::II_i: {
            Poly Fa = fiber_poly(R, alpha);
            auto roots = roots_in_field(Fa);
            verify_or_raise(roots.size() == 2, "II_i");
            FElem beta = roots[0] == alpha ? roots[1] : roots[0];
            verify_or_raise(beta != alpha, "II_i");
            FElem two = actx->from_int(2);
            FElem eta = (alpha + beta) / two;
            Poly Fb = fiber_poly(R, beta);
            verify_or_raise(is_power_of_linear(Fb, eta), "II_i");
            verify_or_raise(fiber_poly(R, eta).degree() == 0, "II_i");
            FElem amb = alpha - beta;
            Poly lin = Poly::from_coeffs(actx, {-(alpha + beta), two});
            Poly pw = Poly::one(actx);
            for (int i = 0; i < D; ++i) pw = pw * lin;
            Poly den = pw * actx->from_int(4) - Poly::constant(two * amb.pow(uint64_t(D)));
            RatMap expect(den * eta + Poly::constant(amb.pow(uint64_t(D + 1))), den);
            verify_or_raise(expect == Rl, "II_i");
            break;
        }
        default:
            break;
    }
    (void)caps;
}

// Reversed-orbit enumeration by backward closure; for critical pairs with
// d > 1 the set has at most 3 elements, all in alpha's field.
std::vector<FElem> enumerate_reversed_orbit(const RatMap& R, const FElem& alpha, size_t limit) {
    std::vector<FElem> set{alpha};
    const auto& ctx = alpha.ctx();
    Poly g = lift(R.num(), ctx), h = lift(R.den(), ctx);
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<FElem> found;
        for (const auto& y : set) {
            Poly F = g - h * y;
            if (F.degree() < 1) continue;
            for (auto& grp : roots_in_closure(F)) {
                if (grp.ext_degree > 1)
                    raise(Errc::Inconsistency, "reversed orbit leaves the expected field");
                for (auto& r : grp.roots) found.push_back(r);
            }
        }
        for (auto& r : found) {
            bool fresh = true;
            for (const auto& s : set)
                if (s == r) fresh = false;
            if (fresh) {
                set.push_back(r);
                grew = true;
            }
        }
        if (set.size() > limit) raise(Errc::Inconsistency, "reversed orbit larger than the theory allows");
    }
    std::sort(set.begin(), set.end(), [](const FElem& a, const FElem& b) { return canonical_cmp(a, b) < 0; });
    return set;
}

} // namespace

CritReport classify(const RatMap& R, const FElem& alpha, const Caps& caps) {
    CritReport rep;
    rep.alpha = alpha;
    const auto& base = R.ctx();
    rep.e = minimal_degree(alpha, base->m());

    PReduction red = p_reduction(R);
    rep.d = red.d();
    if (rep.d > 1) rep.dprime = wronskian(red.base).second;

    OrbitRecord orbit = forward_orbit(R, alpha, caps);
    rep.periodic = orbit.periodic();
    if (rep.periodic) rep.N = orbit.cycle_len;
    if (rep.periodic)
        for (const auto& c : orbit.cycle)
            if (c.is_infinity()) rep.flags.cycle_through_infinity = true;

    if (!rep.flags.cycle_through_infinity) rep.flags.trivial_in_reversed_orbit = trivial_in_reversed_orbit(R, alpha, caps);

    if (rep.d == 1) {
        rep.critical = true;
        rep.family = Family::D1;
        rep.c = Rat(0);
        // reversed orbit: finite iff alpha is periodic, or the degree-drop
        // value exists and lies in the reversed orbit
        bool cond = rep.periodic;
        if (!cond && R.den().degree() == R.degree()) {
            // R = (a x^D + b)/(c x^D + e) with c != 0; the drop value is a/c
            cond = rep.flags.trivial_in_reversed_orbit;
        }
        rep.reversed_orbit_finite = cond ? Finiteness::Finite : Finiteness::Infinite;
        if (cond) {
            auto q = alpha.ctx()->q_i64();
            size_t limit = q && *q < 1 << 20 ? size_t(*q) + 2 : size_t(1) << 20;
            rep.reversed_orbit_elements = enumerate_reversed_orbit(R, alpha, limit);
        }
        return rep;
    }

    DepthTable table;
    try {
        table = depth_table(R, alpha, caps);
    } catch (const Error& err) {
        if (err.code() != Errc::OutsideScope) throw;
        rep.outside_scope = true;
        rep.family = Family::OutsideScope;
        rep.reversed_orbit_finite = Finiteness::Unknown;
        return rep;
    }

    rep.c = growth_constant(table);
    rep.critical = rep.c == 0;
    if (!rep.critical) {
        rep.family = Family::NonCritical;
        rep.reversed_orbit_finite = Finiteness::Infinite;
        return rep;
    }
    rep.family = match_family(rep.e, table);
    if ((rep.family == Family::II_c || rep.family == Family::II_e || rep.family == Family::II_f ||
         rep.family == Family::II_i) &&
        base->p() == 2)
        raise(Errc::Inconsistency, "d = 2 = p configuration should not occur");
    verify_family(rep.family, R, alpha, table, caps);
    rep.reversed_orbit_finite = Finiteness::Finite;
    rep.reversed_orbit_elements = enumerate_reversed_orbit(R, alpha, 6);
    return rep;
}

ReversedOrbit reversed_orbit(const RatMap& R, const FElem& alpha, const Caps& caps) {
    CritReport rep = classify(R, alpha, caps);
    ReversedOrbit out;
    out.finite = rep.reversed_orbit_finite;
    out.elements = rep.reversed_orbit_elements;
    return out;
}

} // namespace fqdyn
