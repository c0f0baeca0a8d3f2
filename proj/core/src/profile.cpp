#include "weakmax/profile.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace weakmax {

namespace {

constexpr double kValueTol = 1e-12;   // comparisons on O(1) values
constexpr double kShapeTol = 1e-9;    // monotonicity across segment joints
constexpr std::size_t kMaxCells = std::size_t{1} << 26;

double power_density(double p, double t) { return (p - 1.0) / p * std::pow(t, -1.0 / p); }

std::size_t checked_cell_count(int level, int branching) {
    if (level < 0) throw infeasible_error("grid level must be >= 0");
    if (branching < 2) throw infeasible_error("grid branching must be >= 2");
    std::size_t cells = 1;
    for (int i = 0; i < level; ++i) {
        if (cells > kMaxCells / static_cast<std::size_t>(branching))
            throw infeasible_error("grid too fine: branching^level exceeds the cell cap");
        cells *= static_cast<std::size_t>(branching);
    }
    return cells;
}

}  // namespace

Profile::Profile(double p, std::vector<Segment> segments) : p_(p), segments_(std::move(segments)) {
    if (!std::isfinite(p_) || !(p_ > 1.0)) throw infeasible_error("profile exponent must satisfy p > 1");
    if (segments_.empty()) throw infeasible_error("profile needs at least one segment");
    double total = 0.0;
    double prev_tail = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& s = segments_[i];
        if (!std::isfinite(s.length) || !(s.length > 0.0))
            throw infeasible_error("segment lengths must be positive");
        if (s.kind == SegmentKind::power) {
            if (i != 0) throw infeasible_error("a power segment may only occupy the initial interval");
            total = s.length;
            prev_tail = power_density(p_, total);
            continue;
        }
        if (!std::isfinite(s.value) || s.value < 0.0)
            throw infeasible_error("segment values must be nonnegative");
        if (s.value > prev_tail + kShapeTol)
            throw infeasible_error("profile segments must be nonincreasing");
        total += s.length;
        prev_tail = s.value;
    }
    length_ = total;
    if (length_ > 1.0 + kValueTol) throw infeasible_error("profile domain length must be <= 1");
    length_ = std::min(length_, 1.0);
}

double Profile::value_at(double t) const {
    if (t > length_) return 0.0;
    double pos = 0.0;
    for (const Segment& s : segments_) {
        double end = pos + s.length;
        if (t <= end || &s == &segments_.back()) {
            if (s.kind == SegmentKind::power) return power_density(p_, std::max(t, 0.0));
            return s.value;
        }
        pos = end;
    }
    return 0.0;
}

double integral(const Profile& g) {
    double total = 0.0;
    for (const Segment& s : g.segments()) {
        if (s.kind == SegmentKind::power)
            total += std::pow(s.length, 1.0 - 1.0 / g.p());
        else
            total += s.value * s.length;
    }
    return total;
}

double lq_mass(const Profile& g, const Exponents& ex) {
    double p = g.p();
    double q = ex.q;
    double total = 0.0;
    for (const Segment& s : g.segments()) {
        if (s.kind == SegmentKind::power) {
            if (!(q < p))
                throw infeasible_error("lq_mass: power head is q-integrable only for q < p");
            total += std::pow((p - 1.0) / p, q) * p / (p - q) * std::pow(s.length, 1.0 - q / p);
        } else {
            total += std::pow(s.value, q) * s.length;
        }
    }
    return total;
}

double running_integral(const Profile& g, double t) {
    if (!(t >= -kValueTol) || t > g.domain_length() + kValueTol)
        throw infeasible_error("running_integral: t outside [0, domain_length]");
    t = std::clamp(t, 0.0, g.domain_length());
    double total = 0.0;
    double pos = 0.0;
    for (const Segment& s : g.segments()) {
        double end = pos + s.length;
        double hi = std::min(t, end);
        if (hi > pos) {
            if (s.kind == SegmentKind::power)
                total += std::pow(hi, 1.0 - 1.0 / g.p());
            else
                total += s.value * (hi - pos);
        }
        if (t <= end) break;
        pos = end;
    }
    return total;
}

double weak_norm(const Profile& g, const Exponents& ex) {
    // Endpoint evaluation suffices: on each constant segment the ratio
    // t^{-1+1/p}(a + b t) has only interior minima, and on a power head the
    // running integral is t^{1-1/p_g}, monotone against the t^{-1+1/p} weight.
    double best = 0.0;
    double pos = 0.0;
    double run = 0.0;
    for (const Segment& s : g.segments()) {
        double end = pos + s.length;
        if (s.kind == SegmentKind::power)
            run += std::pow(end, 1.0 - 1.0 / g.p());
        else
            run += s.value * s.length;
        best = std::max(best, std::pow(end, -1.0 + 1.0 / ex.p) * run);
        pos = end;
    }
    return best;
}

GridFunction discretize(const Profile& g, int level, int branching) {
    std::size_t cells = checked_cell_count(level, branching);
    GridFunction u;
    u.level = level;
    u.branching = branching;
    u.values.assign(cells, 0.0);
    double w = 1.0 / static_cast<double>(cells);
    double e = 1.0 - 1.0 / g.p();

    const auto& segs = g.segments();
    std::size_t j = 0;
    double seg_start = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
        double a = static_cast<double>(i) * w;
        double b = static_cast<double>(i + 1) * w;
        double sum = 0.0;
        // A cell inside a single constant piece must take that constant
        // bit-exactly: cell boundaries i*w round when cells is not a power of
        // two, and the sum/w route would smear the plateau by ~1 ulp, enough
        // to break the closed >= lambda comparison downstream.
        bool plateau = false;
        double plateau_value = 0.0;
        while (j < segs.size()) {
            double seg_end = seg_start + segs[j].length;
            if (segs[j].kind == SegmentKind::constant && seg_start <= a &&
                b <= seg_end) {
                plateau = true;
                plateau_value = segs[j].value;
            }
            double lo = std::max(a, seg_start);
            double hi = std::min(b, seg_end);
            if (hi > lo) {
                if (segs[j].kind == SegmentKind::power)
                    sum += std::pow(hi, e) - std::pow(lo, e);
                else
                    sum += segs[j].value * (hi - lo);
            }
            if (seg_end >= b) break;
            seg_start = seg_end;
            ++j;
        }
        u.values[i] = plateau ? std::max(plateau_value, 0.0)
                              : std::max(sum / w, 0.0);
    }
    return u;
}

GridFunction decreasing_rearrangement(const GridFunction& u) {
    GridFunction r = u;
    std::sort(r.values.begin(), r.values.end(), std::greater<double>());
    return r;
}

double integral(const GridFunction& u) {
    long double sum = 0.0L;
    for (double v : u.values) sum += v;
    return static_cast<double>(sum * static_cast<long double>(u.cell_width()));
}

double lq_mass(const GridFunction& u, const Exponents& ex) {
    long double sum = 0.0L;
    for (double v : u.values) sum += std::pow(v, ex.q);
    return static_cast<double>(sum * static_cast<long double>(u.cell_width()));
}

double weak_norm(const GridFunction& u, const Exponents& ex) {
    std::vector<double> sorted = u.values;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double w = u.cell_width();
    long double prefix = 0.0L;
    double best = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        prefix += sorted[i];
        double t = static_cast<double>(i + 1) * w;
        double ratio = std::pow(t, -1.0 + 1.0 / ex.p) * static_cast<double>(prefix) * w;
        best = std::max(best, ratio);
    }
    return best;
}

double quasi_norm(const GridFunction& u, const Exponents& ex) {
    std::vector<double> sorted = u.values;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double w = u.cell_width();
    double best = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] <= 0.0) break;
        double measure = static_cast<double>(i + 1) * w;
        best = std::max(best, sorted[i] * std::pow(measure, 1.0 / ex.p));
    }
    return best;
}

std::size_t extract_equal_average_block(const std::vector<double>& values, std::size_t t, double s) {
    std::size_t n = values.size();
    if (t == 0 || t > n) throw infeasible_error("extract_equal_average_block: window width out of range");
    std::vector<long double> prefix(n + 1, 0.0L);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + values[i];
    auto window_avg = [&](std::size_t r) {
        return static_cast<double>((prefix[r + t] - prefix[r]) / static_cast<long double>(t));
    };
    double tol = kValueTol * std::max(1.0, std::fabs(s));
    if (window_avg(0) < s - tol || window_avg(n - t) > s + tol)
        throw infeasible_error(
            "extract_equal_average_block: target average outside the prefix/tail window range");
    for (std::size_t r = 0; r + t <= n; ++r)
        if (window_avg(r) <= s + tol) return r;
    return n - t;
}

}  // namespace weakmax
