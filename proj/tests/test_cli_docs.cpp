// Runs every CLI example from the README and compares output byte for byte.
// Examples are fenced blocks of the form:
//   $ fqdyn <args...>
//   <expected stdout lines...>
#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string run_cli(const std::string& args) {
    std::string cmd = std::string(FQDYN_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return "<popen failed>";
    while (size_t got = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), got);
    pclose(pipe);
    return out;
}

} // namespace

int main() {
    std::ifstream in(FQDYN_README_PATH);
    if (!in) {
        std::cerr << "cannot open README at " << FQDYN_README_PATH << "\n";
        return 1;
    }
    std::vector<std::pair<std::string, std::string>> snippets;
    std::string line;
    bool in_fence = false;
    std::string cmd, expected;
    auto flush = [&]() {
        if (!cmd.empty()) snippets.emplace_back(cmd, expected);
        cmd.clear();
        expected.clear();
    };
    while (std::getline(in, line)) {
        if (line.rfind("```", 0) == 0) {
            flush();
            in_fence = !in_fence;
            continue;
        }
        if (!in_fence) continue;
        if (line.rfind("$ fqdyn ", 0) == 0) {
            flush();
            cmd = line.substr(8);
        } else if (!cmd.empty()) {
            expected += line + "\n";
        }
    }
    flush();

    if (snippets.empty()) {
        std::cerr << "no CLI examples found in README\n";
        return 1;
    }
    int failures = 0;
    for (const auto& [args, want] : snippets) {
        std::string got = run_cli(args);
        if (got != want) {
            ++failures;
            std::cerr << "snippet failed: fqdyn " << args << "\n--- expected ---\n"
                      << want << "--- got ---\n"
                      << got << "---\n";
        }
    }
    std::cout << snippets.size() << " README snippets, " << failures << " failures\n";
    return failures == 0 ? 0 : 1;
}
