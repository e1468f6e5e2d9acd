#ifndef FQDYN_DYNAMICS_HPP
#define FQDYN_DYNAMICS_HPP

#include <map>

#include <boost/multiprecision/cpp_int.hpp>

#include "fqdyn/ratmap.hpp"

namespace fqdyn {

using Rat = boost::multiprecision::cpp_rational;

struct OrbitRecord {
    // alpha, R(alpha), ... up to and including the first repeated point, so
    // points[tail_len + cycle_len] = points[tail_len].
    std::vector<ProjPoint> points;
    int tail_len = 0;
    int cycle_len = 0;
    std::vector<ProjPoint> cycle;
    bool contains_infinity = false;

    bool periodic() const { return tail_len == 0; }
};

OrbitRecord forward_orbit(const RatMap& R, const ProjPoint& alpha, const Caps& caps = {});
OrbitRecord forward_orbit(const RatMap& R, const FElem& alpha, const Caps& caps = {});

// Distinct affine preimages of alpha, grouped by extension degree over
// alpha's field.
std::vector<RootGroup> preimages(const RatMap& R, const FElem& alpha);

// Number of distinct n-th preimages of alpha: points x whose whole chain
// x, R(x), ..., R^(n-1)(x) stays affine and ends at alpha. Computed by brute
// force as the radical degree of the n-fold pullback transform of (x - alpha);
// this agrees with the distinct roots of g_n - alpha*h_n whenever no pole
// chain of the map feeds back into alpha (always for polynomial maps and for
// alpha outside the base field).
int delta_oracle(const RatMap& R, const FElem& alpha, int n, const Caps& caps = {});

// Same, with the pullback chains of a fixed map cached across calls.
class DeltaOracle {
  public:
    explicit DeltaOracle(RatMap R, Caps caps = {});
    int at(const FElem& alpha, int n);

  private:
    RatMap R_;
    Caps caps_;
    std::map<std::pair<const FieldCtx*, std::vector<int64_t>>, std::vector<Poly>> chains_;
    std::map<const FieldCtx*, std::pair<Poly, Poly>> lifted_;
};

// Number of n-th preimages of alpha none of whose forward images up to step
// n-1 (the point itself included) is periodic, by explicit level-by-level
// enumeration of the preimage tree on the projective line.
int acyclic_preimage_count(const RatMap& R, const FElem& alpha, int n, const Caps& caps = {});

struct DeficiencyEntry {
    FElem gamma;     // canonical home: extension(base, k) with k minimal
    int ext_degree;  // [F_q(gamma) : F_q]
    int T;           // deg(g - sigma(gamma)*h) on the reduced map
    int r;           // fiber count
    int weight;      // d - r >= 1
    bool is_trivial; // the fiber that lost a point to infinity
};

// The finitely many values with fewer than d distinct preimages, with their
// degree data. Requires reduction degree d > 1.
struct DeficiencyTable {
    std::vector<DeficiencyEntry> entries;
    int d = 0;
    int dprime = 0;

    int weight_sum() const;
    int nontrivial_gap_sum() const; // sum of (T - r) over non-trivial entries
};

DeficiencyTable deficiency_table(const RatMap& R);

// Depth-indexed deficiency weights n_{alpha_i, j}. Rows follow the cycle
// ordering alpha_i = R^(i)(alpha) with alpha_N = alpha when alpha is
// periodic; a single row otherwise.
struct DepthRow {
    FElem alpha_i;
    std::map<int, int> n; // j -> weight, nonzero entries only
};

struct DepthTable {
    std::vector<DepthRow> rows;
    bool periodic = false;
    int d = 0;

    const DepthRow& alpha_row() const { return rows.back(); }
    int max_depth() const;     // deepest nonzero j across rows (0 when empty)
    int row_sum(size_t i) const;
};

// Throws OutsideScope when the cycle passes through infinity (the affine
// depth bookkeeping does not cover that configuration).
DepthTable depth_table(const RatMap& R, const FElem& alpha, const Caps& caps = {});

// d^m - sum_{j<=m} n_{alpha,j} d^(m-j), the predicted acyclic count for
// the table's alpha row.
boost::multiprecision::cpp_int acyclic_count_formula(const DepthTable& t, int m);

// The exact growth constant c with delta(n) = c*d^n + O(1).
Rat growth_constant(const RatMap& R, const FElem& alpha, const Caps& caps = {});
Rat growth_constant(const DepthTable& t);

// kappa: total deficiency collected over alpha's own row.
int total_deficiency(const RatMap& R, const FElem& alpha, const Caps& caps = {});

// c*d^n and whether the value is guaranteed to equal delta(n) exactly.
struct Prediction {
    Rat estimate;
    bool guaranteed_exact;
};
Prediction predicted_count(const RatMap& R, const FElem& alpha, int n, const Caps& caps = {});

// Whether the map's degree-drop value lies in the reversed orbit of alpha.
bool trivial_in_reversed_orbit(const RatMap& R, const FElem& alpha, const Caps& caps = {});

enum class Family {
    D1,
    I_a,
    I_b,
    II_a,
    II_b,
    II_c,
    II_d,
    II_e,
    II_f,
    II_g,
    II_h,
    II_i,
    NonCritical,
    OutsideScope,
};

const char* family_name(Family f);

enum class Finiteness { Finite, Infinite, Unknown };

struct CritReport {
    FElem alpha;
    int e = 1;
    int d = 1;
    int dprime = 0;
    bool periodic = false;
    std::optional<int> N;
    Rat c;
    bool critical = false;
    Family family = Family::NonCritical;
    struct Flags {
        bool cycle_through_infinity = false;
        bool trivial_in_reversed_orbit = false;
    } flags;
    Finiteness reversed_orbit_finite = Finiteness::Unknown;
    std::vector<FElem> reversed_orbit_elements; // filled when finite
    bool outside_scope = false;
};

// Full criticality classification with family matching and closed-form
// verification. OutsideScope configurations are flagged, not fatal.
CritReport classify(const RatMap& R, const FElem& alpha, const Caps& caps = {});

struct ReversedOrbit {
    Finiteness finite = Finiteness::Unknown;
    std::vector<FElem> elements;
};
ReversedOrbit reversed_orbit(const RatMap& R, const FElem& alpha, const Caps& caps = {});

} // namespace fqdyn

#endif
