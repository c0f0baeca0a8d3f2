#pragma once

#include <cmath>
#include <string>

#include "weakmax/errors.hpp"

namespace weakmax::detail {

struct RootResult {
    double x;
    double residual;
};

// Bisection for h with h(lo) <= 0 <= h(hi); runs the bracket down to ulp
// width (cap 200 iterations) and returns the endpoint with the smaller
// residual. Endpoints within `slack` of zero count as roots; anything else
// that fails to straddle is a bracketing_error.
template <typename H>
RootResult bisect(H&& h, double lo, double hi, const char* what, double slack = 1e-9) {
    double hlo = h(lo);
    double hhi = h(hi);
    if (std::isnan(hlo) || std::isnan(hhi))
        throw bracketing_error(std::string(what) + ": bracket endpoint evaluated to NaN");
    if (hlo > 0.0 || hhi < 0.0) {
        if (std::fabs(hlo) <= slack && std::fabs(hlo) <= std::fabs(hhi)) return {lo, std::fabs(hlo)};
        if (std::fabs(hhi) <= slack) return {hi, std::fabs(hhi)};
        throw bracketing_error(std::string(what) + ": bracket endpoints do not straddle zero");
    }
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        double hm = h(mid);
        if (std::isnan(hm)) throw bracketing_error(std::string(what) + ": NaN inside bracket");
        if (hm <= 0.0) {
            lo = mid;
            hlo = hm;
        } else {
            hi = mid;
            hhi = hm;
        }
    }
    if (std::fabs(hlo) <= std::fabs(hhi)) return {lo, std::fabs(hlo)};
    return {hi, std::fabs(hhi)};
}

}  // namespace weakmax::detail
