#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "weakmax/domain.hpp"
#include "weakmax/profile.hpp"

namespace weakmax::test {

struct Instance {
    double f = 0.0;
    double A = 0.0;
    double lambda = 0.0;
};

inline double frac(double x) { return x - std::floor(x); }

// Low-discrepancy (R3 additive recurrence) feasible instances: f in
// [0.05, 0.95], A strictly inside (f^q, Gamma f^{(p-q)/(p-1)}), lambda in
// [0.15, 3.25] so every branch of T^{(1)} is visited.
inline Instance feasible_instance(std::size_t i, const Exponents& ex) {
    const double g1 = 0.8191725133961645;
    const double g2 = 0.6710436067037893;
    const double g3 = 0.5497004779019703;
    double u1 = frac(0.5 + static_cast<double>(i + 1) * g1);
    double u2 = frac(0.5 + static_cast<double>(i + 1) * g2);
    double u3 = frac(0.5 + static_cast<double>(i + 1) * g3);
    Instance inst;
    inst.f = 0.05 + 0.9 * u1;
    double lo = std::pow(inst.f, ex.q);
    double hi = gamma(ex) * std::pow(inst.f, (ex.p - ex.q) / (ex.p - 1.0));
    inst.A = lo + (hi - lo) * (0.05 + 0.9 * u2);
    inst.lambda = 0.15 + 3.1 * u3;
    return inst;
}

// Same sequence scaled to F in [0.5, 4]: (f, A, F) with A/F^q interior.
inline ConstraintTriple scaled_triple(std::size_t i, const Exponents& ex, double* lambda_out) {
    Instance inst = feasible_instance(i, ex);
    double u4 = frac(0.5 + static_cast<double>(i + 1) * 0.8566748838545029);
    double F = 0.5 + 3.5 * u4;
    if (lambda_out) *lambda_out = inst.lambda * F;
    return ConstraintTriple(inst.f * F, inst.A * std::pow(F, ex.q), F);
}

// Plain L^p norm of a grid function, accumulated in long double. Independent
// of the library's norm code so it can serve as an oracle.
inline double lp_norm(const GridFunction& u, double p) {
    long double acc = 0.0L;
    long double w = 1.0L / static_cast<long double>(u.values.size());
    for (double v : u.values) acc += std::pow(static_cast<long double>(v), static_cast<long double>(p)) * w;
    return static_cast<double>(std::pow(acc, 1.0L / static_cast<long double>(p)));
}

inline GridFunction random_grid(std::mt19937_64& rng, int level, int branching = 2,
                                double hi = 1.0) {
    GridFunction u;
    u.level = level;
    u.branching = branching;
    std::size_t cells = 1;
    for (int i = 0; i < level; ++i) cells *= static_cast<std::size_t>(branching);
    std::uniform_real_distribution<double> dist(0.0, hi);
    u.values.resize(cells);
    for (auto& v : u.values) v = dist(rng);
    return u;
}

// A few cells spiked high above a low floor; stresses weak-type bounds.
inline GridFunction spiky_grid(std::mt19937_64& rng, int level, int branching = 2) {
    GridFunction u = random_grid(rng, level, branching, 0.1);
    std::uniform_int_distribution<std::size_t> pick(0, u.values.size() - 1);
    std::uniform_real_distribution<double> height(1.0, 20.0);
    for (int s = 0; s < 4; ++s) u.values[pick(rng)] = height(rng);
    return u;
}

}  // namespace weakmax::test
