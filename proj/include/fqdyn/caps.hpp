#ifndef FQDYN_CAPS_HPP
#define FQDYN_CAPS_HPP

#include <cstdint>

namespace fqdyn {

// Resource limits. These are configuration, not constants: callers (and the
// CLI) may raise them for larger experiments.
struct Caps {
    int64_t degree_cap = 200000;          // max polynomial degree in iterates/transforms
    double orbit_log2_cap = 24.0;         // forward_orbit requires log2(q^k) <= this
    int64_t walk_step_cap = 1 << 22;      // internal orbit-walk step budget
    int star_max_d = 3;                   // acyclic preimage enumeration scale
    int star_max_n = 5;
};

} // namespace fqdyn

#endif
