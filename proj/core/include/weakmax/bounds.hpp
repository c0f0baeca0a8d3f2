#pragma once

#include <optional>

#include "weakmax/domain.hpp"

namespace weakmax {

// Argmin tag of min{1, G, (F/lambda)^p}; ties resolve in the order
// one -> f_over_lambda/k_root -> weak_cap.
enum class Branch { one, f_over_lambda, k_root, weak_cap };

const char* to_string(Branch b);

struct BoundReport {
    double lambda = 0.0;
    double G_value = 1.0;
    std::optional<double> k;  // present only on the k-root branch of G
    Branch branch = Branch::one;
    double T_value = 1.0;
    double root_residual = 0.0;
};

// Unique root alpha in [0, f/lambda] of
//   (f - alpha*lambda)^q / (1 - alpha)^{q-1} + alpha*lambda^q = A;
// the left side is increasing in alpha. Requires A >= f^q and
// lambda >= (A/f)^{1/(q-1)}.
double solve_k(double f, double A, double lambda, const Exponents& ex);

// G_{f,A}(lambda): 1 for lambda <= f; f/lambda up to (A/f)^{1/(q-1)}; the
// root k beyond. Scale-invariant: G_{f,A}(lambda) = G_{f/F,A/F^q}(lambda/F).
double g_fa(double f, double A, double lambda, const Exponents& ex);

// T^{(1)}_{f,A}(lambda) = min{1, G_{f,A}(lambda), lambda^{-p}} for the
// normalized problem F = 1.
BoundReport t1(double f, double A, double lambda, const Exponents& ex);

// T_{f,A,F}(lambda) = min{1, G_{f,A}(lambda), F^p/lambda^p}, evaluated
// directly on the unnormalized triple. Requires A > f^q unless f = F.
BoundReport t_scaled(const Exponents& ex, const ConstraintTriple& c, double lambda);

// sup over lambda of lambda * T_{f,A,F}(lambda)^{1/p} = F, for triples whose
// equality-norm class is nonempty.
double weak_norm_sup(const Exponents& ex, const ConstraintTriple& c);

}  // namespace weakmax
