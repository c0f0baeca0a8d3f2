#pragma once

#include <limits>
#include <utility>

#include "weakmax/bounds.hpp"
#include "weakmax/profile.hpp"

namespace weakmax {

enum class ExtremalBranch { trivial, G_mid, G_root, weak_case_i, weak_case_ii };

const char* to_string(ExtremalBranch b);

// Parameters of a constructed extremizer. The produced profile satisfies
// integral = f, lq_mass = A, weak_norm <= 1 and running_integral(alpha) >=
// alpha*lambda, each to 1e-9 (equality in the attainment on the non-trivial
// branches).
struct ExtremalRecipe {
    ExtremalBranch branch = ExtremalBranch::trivial;
    double c1 = 0.0;    // power cutoff
    double mu2 = 0.0;   // first plateau
    double mu3 = 0.0;   // second plateau (weak_case_i only)
    double k = 0.0;     // root measure of G
    double alpha = 1.0; // attained measure, equals T^{(1)}(lambda)
    double theta_lambda = std::numeric_limits<double>::quiet_NaN();
    // False when A = f^q with f < 1: the norm-equality class is empty and
    // the recipe solves the <=-constrained problem instead.
    bool norm_equality_feasible = true;
};

// Extreme points of the discrete constraint body: a 2^n-step profile with
// steps alpha_i = 2^{n/p} (i^{1-1/p} - (i-1)^{1-1/p}) for i <= k, one
// remainder step, zeros after; k = max{ i <= 2^n : (i/2^n)^{1-1/p} <= f }.
Profile extreme_point_profile(int n, double f, const Exponents& ex);

// Power head + plateau on [0, alpha]: integral f, L^q mass A, weak norm 1.
// Requires f <= alpha^{1-1/p} (equality accepted), f^q < alpha^{q-1} A and
// A <= Gamma f^{(p-q)/(p-1)}.
Profile construct_two_piece(double f, double A, double alpha, const Exponents& ex,
                            ExtremalRecipe* recipe = nullptr);

// Two-step profile: lambda on [0, k], (f - k*lambda)/(1 - k) after, with k
// the G root. Applies when lambda >= (A/f)^{1/(q-1)} and k <= lambda^{-p}.
Profile construct_prop43(double f, double A, double lambda, const Exponents& ex,
                         ExtremalRecipe* recipe = nullptr);

// Weak-cap constructions on [0,1], case split on
// theta_lambda = Gamma/lambda^{p-q} + (f - lambda^{1-p})^q/(1 - lambda^{-p})^{q-1}:
// theta > A gives power/mu2/mu3 (case i), theta <= A power/mu2 (case ii);
// both attain running_integral(lambda^{-p}) = lambda^{1-p}.
Profile construct_prop44(double f, double A, double lambda, const Exponents& ex,
                         ExtremalRecipe* recipe = nullptr);

// Dispatch over the argmin branch of T^{(1)}_{f,A}(lambda).
std::pair<Profile, ExtremalRecipe> extremizer_for(double f, double A, double lambda,
                                                  const Exponents& ex);

}  // namespace weakmax
