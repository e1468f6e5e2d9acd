#include <cstring>
#include <iostream>

#include "fqdyn/acceptance.hpp"

int main(int argc, char** argv) {
    double scale = 1.0;
    for (int i = 1; i < argc; ++i)
        if (std::strncmp(argv[i], "--scale=", 8) == 0) scale = std::atof(argv[i] + 8);
    auto results = fqdyn::run_acceptance(scale, std::cout);
    bool all = true, unexplained = false;
    for (const auto& r : results) {
        all = all && r.pass;
        if (!r.pass && !r.known_defect) unexplained = true;
    }
    if (all)
        std::cout << "ACCEPTANCE PASSED";
    else if (!unexplained)
        std::cout << "ACCEPTANCE PASSED WITH DOCUMENTED SOURCE DEFECTS";
    else
        std::cout << "ACCEPTANCE FAILED";
    std::cout << " (" << results.size() << " criteria)\n";
    return unexplained ? 1 : 0;
}
