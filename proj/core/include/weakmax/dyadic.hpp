#pragma once

#include <cstddef>
#include <vector>

#include "weakmax/bounds.hpp"
#include "weakmax/profile.hpp"

namespace weakmax {

// The m-adic interval tree on [0,1]: level L partitions the interval into
// m^L congruent cells, children tile their parent.
struct TreeSpec {
    int branching = 2;
    int depth = 0;
    TreeSpec(int branching_, int depth_);
    std::size_t cell_count() const;  // branching^depth
};

// M_T phi sampled on the leaf cells.
struct MaximalField {
    std::vector<double> values;
};

// Leaf-cell range [start_cell, start_cell + cell_count) forming one m-adic
// interval of the tree.
struct CoverInterval {
    std::size_t start_cell = 0;
    std::size_t cell_count = 0;
};

// Formula value vs simulated distribution measure at one lambda.
struct SharpnessReport {
    BoundReport bound;  // formula route, evaluated on the unnormalized triple
    double simulated_measure = 0.0;
    double gap = 0.0;  // bound.T_value - simulated_measure
    int grid_level = 0;
    int branching = 2;
};

struct OracleResult {
    double best_measure = 0.0;
    GridFunction witness;
};

// Exact M_T phi: one pass per level carries every ancestor average down to
// the leaves; the sup over deeper intervals equals the leaf value itself.
// Requires phi.level == tree.depth and phi.branching == tree.branching.
MaximalField maximal_operator(const GridFunction& phi, const TreeSpec& tree);

// Lebesgue measure of { M_T phi >= lambda } (closed inequality).
double distribution_measure(const MaximalField& field, double lambda);

// Maximal m-adic intervals tiling [0, alpha_N) with
// alpha_N = floor(alpha * m^N) / m^N; emitted largest first.
std::vector<CoverInterval> dyadic_cover(double alpha, const TreeSpec& tree);

// Rearranges the discretized g so that { M_T phi >= lambda } covers
// [0, alpha_N) up to a per-interval shortfall of at most one cell's
// contribution. Cell multiset is preserved, so integral and L^q mass match
// discretize(g) exactly. Requires running_integral(g, alpha) >= alpha*lambda.
GridFunction transplant(const Profile& g, double alpha, double lambda, const TreeSpec& tree);

// Brute-force certification from below on 2^n cells: seeded candidates
// (constant, transplanted constructions, discrete extreme point) plus a
// random two-cell-transfer hill climb, all constrained to integral = f,
// |lq_mass - A| <= 1e-6, weak_norm <= 1. Deterministic for a fixed seed.
OracleResult oracle_search(double f, double A, double lambda, const Exponents& ex, int n,
                           int steps = 500, int restarts = 8, unsigned long long seed = 1);

// End to end: formula T via t_scaled, extremizer transplanted at grid_level,
// simulated measure of { M_T phi >= lambda/F }, gap = formula - simulated.
SharpnessReport verify_sharpness(const Exponents& ex, const ConstraintTriple& c, double lambda,
                                 int grid_level, int branching = 2);

}  // namespace weakmax
