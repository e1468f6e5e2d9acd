#include "fqdyn/stats.hpp"

#include <cmath>

namespace fqdyn {

StatRecord stats_at(const Poly& f, const RatMap& R, int n, const Caps& caps) {
    Poly fn = pullback_iterate(f, R, n, caps);
    auto fs = factor(fn, f.ctx()->seed());
    StatRecord rec;
    rec.n = n;
    for (const auto& [p, e] : fs) {
        rec.delta += p.degree();
        rec.M = std::max(rec.M, p.degree());
        ++rec.Ncount;
    }
    rec.A = Rat(rec.delta, rec.Ncount);
    return rec;
}

DeltaConsistency delta_consistency(const Poly& f, const RatMap& R, int n, const Caps& caps) {
    DeltaConsistency out;
    out.lhs = stats_at(f, R, n, caps).delta;

    DeltaOracle oracle(R, caps);
    for (const auto& [p, e] : factor(f, f.ctx()->seed())) {
        auto groups = roots_in_closure(p);
        // one root per irreducible factor; conjugate roots share their count
        const FElem& root = groups.front().roots.front();
        out.rhs += p.degree() * oracle.at(root, n);
    }
    out.equal = out.lhs == out.rhs;

    Poly direct = pullback(f, iterate(R, n, caps), caps);
    Poly iterated = pullback_iterate(f, R, n, caps);
    out.radicals_match = radical(direct) == radical(iterated);
    return out;
}

namespace {

FitReport fit_series(const std::vector<double>& ys) {
    FitReport fr;
    const int n = int(ys.size());
    // records cover n = 0..nmax; a verdict needs at least 4 points past n = 0
    if (n < 5) {
        fr.verdict = "inconclusive";
        if (n < 2) return fr;
    }
    auto regress = [&](const std::vector<double>& vals) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int i = 0; i < n; ++i) {
            sx += i;
            sy += vals[size_t(i)];
            sxx += double(i) * i;
            sxy += i * vals[size_t(i)];
        }
        double denom = n * sxx - sx * sx;
        double slope = (n * sxy - sx * sy) / denom;
        double icept = (sy - slope * sx) / n;
        return std::make_pair(slope, icept);
    };
    std::vector<double> logs;
    logs.reserve(size_t(n));
    for (double y : ys) logs.push_back(std::log(std::max(y, 1e-12)));
    auto [bs, bi] = regress(logs);
    auto [ls, li] = regress(ys);
    fr.exp_base = std::exp(bs);
    fr.lin_slope = ls;
    double norm = 0, eexp = 0, elin = 0;
    for (int i = 0; i < n; ++i) {
        double y = ys[size_t(i)];
        double pe = std::exp(bi + bs * i);
        double pl = li + ls * i;
        eexp += (pe - y) * (pe - y);
        elin += (pl - y) * (pl - y);
        norm += y * y;
    }
    fr.exp_residual = std::sqrt(eexp / std::max(norm, 1e-12));
    fr.lin_residual = std::sqrt(elin / std::max(norm, 1e-12));
    if (!fr.verdict.empty()) return fr; // too few points for a verdict
    if (fr.exp_residual < 0.5 * fr.lin_residual)
        fr.verdict = "exponential-like";
    else if (fr.lin_residual < 0.5 * fr.exp_residual)
        fr.verdict = "linear-like";
    else
        fr.verdict = "inconclusive";
    return fr;
}

} // namespace

GrowthReport growth_report(const Poly& f, const RatMap& R, int nmax, const Caps& caps) {
    GrowthReport rep;
    BigInt q = 1;
    for (int i = 0; i < f.ctx()->m(); ++i) q *= f.ctx()->p();
    for (int n = 0; n <= nmax; ++n) {
        StatRecord rec = stats_at(f, R, n, caps);
        if (int64_t(rec.M) * rec.Ncount < rec.delta) rep.product_bound_ok = false;
        BigInt bound = 1;
        for (int i = 0; i <= rec.M; ++i) bound *= q;
        if (!(BigInt(rec.delta) < bound)) rep.log_lower_bound_ok = false;
        rep.records.push_back(rec);
    }
    std::vector<double> d, m, nn, a;
    for (const auto& r : rep.records) {
        d.push_back(double(r.delta));
        m.push_back(double(r.M));
        nn.push_back(double(r.Ncount));
        a.push_back(double(boost::multiprecision::numerator(r.A)) /
                    double(boost::multiprecision::denominator(r.A)));
    }
    rep.fits["delta"] = fit_series(d);
    rep.fits["M"] = fit_series(m);
    rep.fits["N"] = fit_series(nn);
    rep.fits["A"] = fit_series(a);
    return rep;
}

ConjugacyCheck conjugate_invariance(const Poly& f, const Poly& g, const Mobius& A, int nmax,
                                    const Caps& caps) {
    if (g.degree() < 1) raise(Errc::ConstantMap, "g must have positive degree");
    ConjugacyCheck out;
    auto conj = conjugate_map(A, g);
    Poly af = mobius_on_poly(A, f);
    RatMap gmap(g, Poly::one(g.ctx()));
    out.equal = true;
    for (int n = 0; n <= nmax; ++n) {
        StatRecord l = stats_at(f, conj.map, n, caps);
        StatRecord r = stats_at(af, gmap, n, caps);
        if (l.delta != r.delta || l.M != r.M || l.Ncount != r.Ncount || l.A != r.A) out.equal = false;
        out.lhs.push_back(l);
        out.rhs.push_back(r);
    }
    return out;
}

} // namespace fqdyn
