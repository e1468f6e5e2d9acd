#ifndef FQDYN_SWEEP_HPP
#define FQDYN_SWEEP_HPP

#include <string>
#include <vector>

#include "fqdyn/caps.hpp"

namespace fqdyn {

// Plain key=value configuration ('#' comments, ';'-separated lists):
//   field = 3; 5
//   map   = (x^2+1)/(1); (x)/(x^2+1)
//   alpha = all            (or a ';'-separated list of element literals)
//   alpha_ext = 1
//   op    = classify       (classify | delta | stats)
//   n     = 0..6           (or a single integer; delta and stats rows only)
//   f     = x^2+1          (stats only)
//   seed  = 0
//   jobs  = 1
struct SweepConfig {
    std::vector<std::string> fields;
    std::vector<std::string> maps;
    std::vector<std::string> alphas{"all"};
    int alpha_ext = 1;
    std::string op = "classify";
    std::vector<int> ns{0};
    std::string f;
    uint64_t seed = 0;
    int jobs = 1;
    Caps caps;
};

SweepConfig parse_sweep_config(const std::string& path);

struct SweepResult {
    int rows_written = 0;
    int rows_skipped = 0; // already journaled
    int rows_failed = 0;  // rows carrying an error column
};

// Writes one CSV row per (field, map, alpha, n), appending to out_path and
// journaling completed row ids to out_path + ".journal" so interrupted sweeps
// resume without recomputation. Failures become rows with the error column
// set; the run continues.
SweepResult run_sweep(const SweepConfig& cfg, const std::string& out_path);

} // namespace fqdyn

#endif
