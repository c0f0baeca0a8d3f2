#pragma once

#include "weakmax/errors.hpp"

namespace weakmax {

// Exponent pair governing every formula; 1 < q < p, strict on both sides.
struct Exponents {
    double p;
    double q;
    Exponents(double p_, double q_);
};

// Gamma = ((p-1)/p)^q * p/(p-q), the sharp ceiling constant: the feasible
// L^q mass satisfies A <= Gamma * f^{(p-q)/(p-1)} once F is normalized to 1.
double gamma(const Exponents& ex);

// (f, A, F): L^1 mass, L^q mass, weak-L^p norm of the candidate function.
struct ConstraintTriple {
    double f;
    double A;
    double F;
    explicit ConstraintTriple(double f_, double A_, double F_ = 1.0);
};

enum class Boundary { interior, lower, upper, f_equals_F };

const char* to_string(Boundary b);

struct DomainVerdict {
    bool member = false;
    Boundary boundary = Boundary::interior;
    // True iff the equality-norm class { |||phi||| = F } is nonempty:
    // member and (A > f^q or f = F). A = f^q with f < F admits only the
    // constant function, whose weak norm is f, not F.
    bool equality_feasible = false;
};

DomainVerdict domain_check(const Exponents& ex, const ConstraintTriple& c);

struct Normalized {
    ConstraintTriple triple;  // F = 1
    double scale;             // the original F; query lambda as lambda/scale
};

// Homogeneity phi -> phi/F maps (f, A, F) to (f/F, A/F^q, 1).
Normalized normalize(const Exponents& ex, const ConstraintTriple& c);

}  // namespace weakmax
