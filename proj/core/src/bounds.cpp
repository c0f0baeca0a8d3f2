#include "weakmax/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "bisect.hpp"

namespace weakmax {

namespace {

constexpr double kRelTol = 1e-12;

void require_positive_lambda(double lambda) {
    if (!std::isfinite(lambda) || !(lambda > 0.0)) throw infeasible_error("lambda must be positive");
}

struct GEval {
    double value = 1.0;
    std::optional<double> k;
    double residual = 0.0;
    Branch branch = Branch::one;
};

double k_equation(double f, double A, double lambda, double q, double a) {
    // (f - a*lambda)^q / (1-a)^{q-1} + a*lambda^q - A, increasing in a.
    double num = std::max(f - a * lambda, 0.0);
    return std::pow(num, q) / std::pow(1.0 - a, q - 1.0) + a * std::pow(lambda, q) - A;
}

double solve_k_unchecked(double f, double A, double lambda, const Exponents& ex, double* residual) {
    double hi = std::min(f / lambda, 1.0 - 1e-15);
    auto h = [&](double a) { return k_equation(f, A, lambda, ex.q, a); };
    detail::RootResult root = detail::bisect(h, 0.0, hi, "solve_k");
    if (residual) *residual = root.residual;
    return root.x;
}

// Branch dispatch of G_{f,A}; valid for unnormalized (f, A) as well since
// every comparison and the k-equation are homogeneous in F.
GEval eval_G(double f, double A, double lambda, const Exponents& ex) {
    GEval g;
    if (lambda <= f) return g;
    double threshold = std::pow(A / f, 1.0 / (ex.q - 1.0));
    if (lambda < threshold) {
        g.value = f / lambda;
        g.branch = Branch::f_over_lambda;
        return g;
    }
    double residual = 0.0;
    // A = f^q pins k = 0 exactly: G drops from 1 to 0 at lambda = f.
    double k = A <= std::pow(f, ex.q) * (1.0 + kRelTol)
                   ? 0.0
                   : solve_k_unchecked(f, A, lambda, ex, &residual);
    g.value = k;
    g.k = k;
    g.residual = residual;
    g.branch = Branch::k_root;
    return g;
}

BoundReport assemble(double lambda, const GEval& g, double cap) {
    BoundReport r;
    r.lambda = lambda;
    r.G_value = g.value;
    r.k = g.k;
    r.root_residual = g.residual;
    r.T_value = std::min({1.0, g.value, cap});
    if (r.T_value == 1.0)
        r.branch = Branch::one;
    else if (g.value == r.T_value)
        r.branch = g.branch;
    else
        r.branch = Branch::weak_cap;
    return r;
}

void require_member(const Exponents& ex, double f, double A, const char* who) {
    if (!domain_check(ex, ConstraintTriple(f, A, 1.0)).member)
        throw infeasible_error(std::string(who) +
                               ": (f, A) violates 0 < f <= 1, f^q <= A <= Gamma f^{(p-q)/(p-1)}");
}

}  // namespace

const char* to_string(Branch b) {
    switch (b) {
        case Branch::one: return "one";
        case Branch::f_over_lambda: return "f_over_lambda";
        case Branch::k_root: return "k_root";
        case Branch::weak_cap: return "weak_cap";
    }
    return "?";
}

double solve_k(double f, double A, double lambda, const Exponents& ex) {
    require_positive_lambda(lambda);
    double fq = std::pow(f, ex.q);
    if (A < fq * (1.0 - kRelTol)) throw infeasible_error("solve_k: A < f^q");
    double threshold = std::pow(A / f, 1.0 / (ex.q - 1.0));
    if (lambda < threshold * (1.0 - kRelTol))
        throw infeasible_error("solve_k: lambda < (A/f)^{1/(q-1)}, G is f/lambda there");
    // A = f^q pins the root at the bracket floor: only the constant function
    // carries that mass, so k = 0 exactly rather than a one-ulp bisection stub.
    if (A <= fq * (1.0 + kRelTol)) return 0.0;
    return solve_k_unchecked(f, A, lambda, ex, nullptr);
}

double g_fa(double f, double A, double lambda, const Exponents& ex) {
    require_positive_lambda(lambda);
    require_member(ex, f, A, "g_fa");
    return eval_G(f, A, lambda, ex).value;
}

BoundReport t1(double f, double A, double lambda, const Exponents& ex) {
    require_positive_lambda(lambda);
    require_member(ex, f, A, "t1");
    return assemble(lambda, eval_G(f, A, lambda, ex), std::pow(lambda, -ex.p));
}

BoundReport t_scaled(const Exponents& ex, const ConstraintTriple& c, double lambda) {
    require_positive_lambda(lambda);
    double fq = std::pow(c.f, ex.q);
    double ceiling = gamma(ex) * std::pow(c.f, (ex.p - ex.q) / (ex.p - 1.0)) *
                     std::pow(c.F, ex.p * (ex.q - 1.0) / (ex.p - 1.0));
    if (c.f > c.F * (1.0 + kRelTol)) throw infeasible_error("t_scaled: requires f <= F");
    if (c.A > ceiling * (1.0 + kRelTol))
        throw infeasible_error("t_scaled: A > Gamma f^{(p-q)/(p-1)} F^{p(q-1)/(p-1)}");
    if (c.A < fq * (1.0 - kRelTol)) throw infeasible_error("t_scaled: A < f^q");
    if (c.A <= fq * (1.0 + kRelTol) && c.f < c.F * (1.0 - kRelTol))
        throw infeasible_error(
            "t_scaled: A = f^q with f < F has an empty equality-norm class (only the constant "
            "function has A = f^q, and its weak norm is f)");
    return assemble(lambda, eval_G(c.f, c.A, lambda, ex), std::pow(c.F / lambda, ex.p));
}

double weak_norm_sup(const Exponents& ex, const ConstraintTriple& c) {
    DomainVerdict v = domain_check(ex, c);
    if (!v.member) throw infeasible_error("weak_norm_sup: triple outside the feasible domain");
    if (!v.equality_feasible)
        throw infeasible_error("weak_norm_sup: equality-norm class is empty (A = f^q with f < F)");
    return c.F;
}

}  // namespace weakmax
