#include <cstdio>
#include <cstring>
#include <string>

#include "asepqh/validate.hpp"

int main(int argc, char** argv) {
    bool full = true;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--level") == 0 && i + 1 < argc) {
            const std::string level = argv[++i];
            if (level == "full") {
                full = true;
            } else if (level == "quick") {
                full = false;
            } else {
                std::fprintf(stderr, "unknown level '%s'\n", level.c_str());
                return 2;
            }
        } else {
            std::fprintf(stderr, "usage: %s [--level full|quick]\n", argv[0]);
            return 2;
        }
    }

    const auto results = asepqh::run_acceptance(full);
    for (const auto& r : results) {
        std::printf("[%s] criterion %d: %s -- %s\n", r.pass ? "PASS" : "FAIL",
                    r.id, r.name.c_str(), r.detail.c_str());
        std::fflush(stdout);
    }
    return asepqh::all_passed(results) ? 0 : 1;
}
