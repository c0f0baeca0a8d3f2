#include "weakmax/domain.hpp"

#include <algorithm>
#include <cmath>

namespace weakmax {

namespace {

// Boundary comparisons use a relative tolerance of 1e-12; membership uses
// <= with the same tolerance.
constexpr double kBoundaryTol = 1e-12;

bool close_rel(double a, double b) {
    double scale = std::max({std::fabs(a), std::fabs(b), 1.0});
    return std::fabs(a - b) <= kBoundaryTol * scale;
}

bool leq_tol(double a, double b) { return a <= b || close_rel(a, b); }

}  // namespace

Exponents::Exponents(double p_, double q_) : p(p_), q(q_) {
    if (!std::isfinite(p) || !std::isfinite(q) || !(1.0 < q) || !(q < p))
        throw infeasible_error("exponents must satisfy 1 < q < p");
}

double gamma(const Exponents& ex) {
    return std::pow((ex.p - 1.0) / ex.p, ex.q) * ex.p / (ex.p - ex.q);
}

ConstraintTriple::ConstraintTriple(double f_, double A_, double F_) : f(f_), A(A_), F(F_) {
    if (!std::isfinite(f) || !std::isfinite(A) || !std::isfinite(F) || !(f > 0.0) || !(A > 0.0) ||
        !(F > 0.0))
        throw infeasible_error("constraint triple must satisfy f > 0, A > 0, F > 0");
}

const char* to_string(Boundary b) {
    switch (b) {
        case Boundary::interior: return "interior";
        case Boundary::lower: return "lower";
        case Boundary::upper: return "upper";
        case Boundary::f_equals_F: return "f_equals_F";
    }
    return "?";
}

DomainVerdict domain_check(const Exponents& ex, const ConstraintTriple& c) {
    DomainVerdict v;
    double f = c.f / c.F;
    double A = c.A / std::pow(c.F, ex.q);
    double lower = std::pow(f, ex.q);
    double upper = gamma(ex) * std::pow(f, (ex.p - ex.q) / (ex.p - 1.0));

    v.member = leq_tol(f, 1.0) && leq_tol(lower, A) && leq_tol(A, upper);
    if (v.member) {
        if (close_rel(A, lower))
            v.boundary = Boundary::lower;
        else if (close_rel(A, upper))
            v.boundary = Boundary::upper;
        else if (close_rel(f, 1.0))
            v.boundary = Boundary::f_equals_F;
        else
            v.boundary = Boundary::interior;
    }
    v.equality_feasible = v.member && (!close_rel(A, lower) || close_rel(f, 1.0));
    return v;
}

Normalized normalize(const Exponents& ex, const ConstraintTriple& c) {
    return {ConstraintTriple(c.f / c.F, c.A / std::pow(c.F, ex.q), 1.0), c.F};
}

}  // namespace weakmax
