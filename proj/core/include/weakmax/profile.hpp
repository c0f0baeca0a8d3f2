#pragma once

#include <cstddef>
#include <vector>

#include "weakmax/domain.hpp"

namespace weakmax {

enum class SegmentKind { power, constant };

// One piece of a profile. A power segment carries the density
// ((p-1)/p) t^{-1/p} in the global coordinate t; it may only appear as the
// first segment, starting at t = 0, and its value field is unused.
struct Segment {
    SegmentKind kind = SegmentKind::constant;
    double length = 0.0;
    double value = 0.0;
};

// Nonincreasing nonnegative function g on (0, domain_length] as an ordered
// list of segments tiling the interval without gaps or overlaps.
class Profile {
  public:
    Profile(double p, std::vector<Segment> segments);

    double p() const { return p_; }
    double domain_length() const { return length_; }
    const std::vector<Segment>& segments() const { return segments_; }

    // g(t) for 0 < t <= domain_length; 0 beyond.
    double value_at(double t) const;

  private:
    double p_;
    std::vector<Segment> segments_;
    double length_;
};

// Nonnegative values on branching^level cells of [0,1); cell i covers
// [i*w, (i+1)*w) with w = branching^{-level}.
struct GridFunction {
    int level = 0;
    int branching = 2;
    std::vector<double> values;

    std::size_t cell_count() const { return values.size(); }
    double cell_width() const { return values.empty() ? 1.0 : 1.0 / static_cast<double>(values.size()); }
};

// Exact closed forms: a power head of length c contributes c^{1-1/p} to the
// integral and Gamma(p,q) * c^{1-q/p} to the L^q mass.
double integral(const Profile& g);
double lq_mass(const Profile& g, const Exponents& ex);

// |||g|||_{p,inf} = sup_t t^{-1+1/p} * int_0^t g. For nonincreasing g the
// sup is attained at a segment endpoint (interior critical points of
// t^{-1+1/p}(a+bt) are minima); on a power head the ratio is identically 1.
double weak_norm(const Profile& g, const Exponents& ex);

// int_0^t g, exact; nondecreasing and concave in t.
double running_integral(const Profile& g, double t);

// Cell averages of g on branching^level cells; preserves the integral
// exactly. Profiles shorter than [0,1] are padded with zeros.
GridFunction discretize(const Profile& g, int level, int branching = 2);

GridFunction decreasing_rearrangement(const GridFunction& u);

double integral(const GridFunction& u);
double lq_mass(const GridFunction& u, const Exponents& ex);
// |||u|||: prefix-ratio sup of the decreasing rearrangement.
double weak_norm(const GridFunction& u, const Exponents& ex);
// sup_lambda lambda * |{u >= lambda}|^{1/p}.
double quasi_norm(const GridFunction& u, const Exponents& ex);

// Given values sorted nonincreasing, returns the first window start r such
// that the width-t window average has dropped to s (within 1e-12): the
// crossing window. Requires the width-t window averages to bracket s.
std::size_t extract_equal_average_block(const std::vector<double>& values, std::size_t t, double s);

}  // namespace weakmax
