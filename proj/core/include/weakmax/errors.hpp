#pragma once

#include <stdexcept>
#include <string>

namespace weakmax {

// The request lies outside the feasible set (violated precondition or
// domain membership). The CLI maps this to exit code 1.
struct infeasible_error : std::runtime_error {
    explicit infeasible_error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// A root bracket failed to straddle zero: branch misclassification or
// numeric breakdown. The CLI maps this to exit code 2.
struct bracketing_error : std::runtime_error {
    explicit bracketing_error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

}  // namespace weakmax
