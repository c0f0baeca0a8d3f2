#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    weakmax::cli::RunConfig cfg;
    if (auto diag = weakmax::cli::parse_args(args, cfg)) {
        std::cerr << "error: " << *diag << '\n';
        return 1;
    }
    return weakmax::cli::run(cfg, std::cout, std::cerr);
}
