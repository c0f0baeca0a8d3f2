#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace weakmax::cli {

enum class Command { gamma, check, bound, sweep, extremal, verify, oracle };

struct RunConfig {
    Command command = Command::bound;
    double p = 3.0;
    double q = 2.0;
    double f = 0.0;
    double A = 0.0;
    double F = 1.0;
    double lambda = 0.0;
    double lam_start = 0.0;
    double lam_stop = 0.0;
    int lam_count = 0;  // > 0 when lambda was given as start:stop:count
    int N = 14;         // verify grid level
    int m = 2;          // tree branching
    int n = 10;         // oracle grid level
    int steps = 500;
    int restarts = 8;
    std::uint64_t seed = 1;
    std::string out;    // output file; empty writes to the stream passed to run
    std::string format = "csv";
};

// Fills cfg from tokens (command first, then key=value). Returns a single-line
// diagnostic on failure, std::nullopt on success.
std::optional<std::string> parse_args(const std::vector<std::string>& args,
                                      RunConfig& cfg);

// Executes the command. Report rows go to `out` (or cfg.out when set),
// diagnostics to `err`. Returns the process exit status: 0 success,
// 1 precondition violation, 2 bracketing failure.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace weakmax::cli
