#ifndef FQDYN_ACCEPTANCE_HPP
#define FQDYN_ACCEPTANCE_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace fqdyn {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    // Set when the only failures are the documented defect of the source
    // bound (see the README caveat): the criterion is reported red but the
    // suite as a whole still counts as behaving as analyzed.
    bool known_defect = false;
    std::string details;
};

// Runs the acceptance suite at the given scale (1.0 = full, smaller values
// shrink sample counts for a quick self-test) and prints one line per
// criterion to `log`. Returns all results.
std::vector<CriterionResult> run_acceptance(double scale, std::ostream& log);

} // namespace fqdyn

#endif
