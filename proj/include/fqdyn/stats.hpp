#ifndef FQDYN_STATS_HPP
#define FQDYN_STATS_HPP

#include <string>

#include "fqdyn/dynamics.hpp"

namespace fqdyn {

// Factorization statistics of the n-th transform f_R^(n) over the base field:
// degree of the squarefree part, largest irreducible factor degree, number of
// distinct irreducible factors, and their exact average degree.
struct StatRecord {
    int n = 0;
    int delta = 0;
    int M = 0;
    int Ncount = 0;
    Rat A;
};

StatRecord stats_at(const Poly& f, const RatMap& R, int n, const Caps& caps = {});

// The root identity: delta of the transform equals the sum over the distinct
// irreducible factors P of f of deg(P) times the preimage count of one root,
// and the transform along the iterated map has the same radical.
struct DeltaConsistency {
    int lhs = 0;
    int rhs = 0;
    bool equal = false;
    bool radicals_match = false;
};

DeltaConsistency delta_consistency(const Poly& f, const RatMap& R, int n, const Caps& caps = {});

struct FitReport {
    double exp_base = 0;      // fitted base for the d^n model
    double lin_slope = 0;     // slope of the linear model
    double exp_residual = 0;  // normalized RMS residual of the exponential fit
    double lin_residual = 0;  // normalized RMS residual of the linear fit
    std::string verdict;      // linear-like | exponential-like | inconclusive
};

// Non-normative explorer: statistics for n <= nmax, least-squares fits, and
// the two internal bounds (M*N >= delta and delta < q^(M+1)) checked on
// every record.
struct GrowthReport {
    std::vector<StatRecord> records;
    std::map<std::string, FitReport> fits; // keys: delta, M, N, A
    bool product_bound_ok = true;
    bool log_lower_bound_ok = true;
};

GrowthReport growth_report(const Poly& f, const RatMap& R, int nmax, const Caps& caps = {});

// All four statistics computed for (f, g^A) and ([A] o f, g) side by side.
struct ConjugacyCheck {
    std::vector<StatRecord> lhs, rhs;
    bool equal = false;
};

ConjugacyCheck conjugate_invariance(const Poly& f, const Poly& g, const Mobius& A, int nmax,
                                    const Caps& caps = {});

} // namespace fqdyn

#endif
