// Acceptance run: the quick and full verification levels, reported as one
// PASS/FAIL line per criterion. Exit status 0 iff every criterion passes.

#include <cstdio>
#include <iostream>
#include <string>

#include "eprlab/verify.hpp"

namespace {

const char* const kCriteria[] = {
    "",
    "closed-form reduced spreads vs grid oracle over the random sweep",
    "initial particle-2 spreads vs closed form",
    "no extra spread; equality on the disentangling line",
    "minimum-uncertainty fixed point",
    "sharp-pointer limit",
    "strong-correlation approximation and growth as eps shrinks",
    "uncertainty product of the reduced state",
    "free evolution of the reduced state",
    "sampling statistics",
    "grid convergence and cross-method agreement",
    "verify quick < 60 s and full < 600 s, both exit 0",
};

std::string worst_line(const eprlab::VerifySummary& s, int id) {
    for (const auto& c : s.checks) {
        if (c.criterion == id && !c.pass) {
            char buf[256];
            std::snprintf(buf, sizeof buf, " [failed: %s = %.6g, tol %.3g]", c.name.c_str(), c.actual, c.tolerance);
            return buf;
        }
    }
    return "";
}

}  // namespace

int main() {
    const auto quick = eprlab::run_verification({eprlab::VerifyLevel::quick});
    const auto full = eprlab::run_verification({eprlab::VerifyLevel::full});

    std::cout << "== quick ==\n";
    eprlab::print_verify_table(std::cout, quick);
    std::cout << "== full ==\n";
    eprlab::print_verify_table(std::cout, full);
    std::cout << "== acceptance ==\n";

    bool all = true;
    for (int id = 1; id <= 10; ++id) {
        const bool ok = quick.criterion_passes(id) && full.criterion_passes(id);
        all = all && ok;
        std::printf("criterion %2d %s  %s%s\n", id, ok ? "PASS" : "FAIL", kCriteria[id],
                    ok ? "" : (worst_line(full, id) + worst_line(quick, id)).c_str());
    }
    const bool timing = quick.all_pass() && full.all_pass() && quick.elapsed_s < 60.0 && full.elapsed_s < 600.0;
    all = all && timing;
    std::printf("criterion 11 %s  %s (quick %.1f s, full %.1f s)\n", timing ? "PASS" : "FAIL", kCriteria[11],
                quick.elapsed_s, full.elapsed_s);
    return all ? 0 : 1;
}
