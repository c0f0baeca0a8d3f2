#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "weakmax/domain.hpp"
#include "weakmax/errors.hpp"
#include "weakmax/extremal.hpp"
#include "weakmax/profile.hpp"

using namespace weakmax;

namespace {

Profile constant_profile(double value, double length = 1.0) {
    return Profile(3.0, {Segment{SegmentKind::constant, length, value}});
}

Profile power_profile(double c1, double p) {
    return Profile(p, {Segment{SegmentKind::power, c1, 0.0}});
}

}  // namespace

TEST_CASE("profile validation") {
    CHECK_THROWS_AS(Profile(3.0, {}), infeasible_error);
    CHECK_THROWS_AS(Profile(1.0, {Segment{SegmentKind::constant, 1.0, 0.5}}), infeasible_error);
    CHECK_THROWS_AS(Profile(3.0, {Segment{SegmentKind::constant, -0.5, 0.5}}), infeasible_error);
    CHECK_THROWS_AS(Profile(3.0, {Segment{SegmentKind::constant, 0.5, -0.1}}), infeasible_error);
    CHECK_THROWS_AS(Profile(3.0, {Segment{SegmentKind::constant, 0.5, 0.2},
                                  Segment{SegmentKind::constant, 0.5, 0.4}}),
                    infeasible_error);
    CHECK_THROWS_AS(Profile(3.0, {Segment{SegmentKind::constant, 0.5, 0.2},
                                  Segment{SegmentKind::power, 0.5, 0.0}}),
                    infeasible_error);
    CHECK_THROWS_AS(Profile(3.0, {Segment{SegmentKind::constant, 1.2, 0.5}}), infeasible_error);
    CHECK_NOTHROW(Profile(3.0, {Segment{SegmentKind::power, 0.25, 0.0},
                                Segment{SegmentKind::constant, 0.75, 0.1}}));
}

TEST_CASE("value_at reads the density") {
    Profile g = power_profile(0.064, 3.0);
    // Power density (1 - 1/p) t^{-1/p}.
    CHECK(std::fabs(g.value_at(0.001) - (2.0 / 3.0) * std::pow(0.001, -1.0 / 3.0)) <= 1e-12);
    CHECK(g.value_at(0.5) == 0.0);  // beyond the 0.064 head

    Profile c = constant_profile(0.5);
    CHECK(c.value_at(0.3) == 0.5);
    CHECK(c.value_at(1.0) == 0.5);
    CHECK(c.value_at(1.5) == 0.0);
}

TEST_CASE("integral examples") {
    CHECK(integral(constant_profile(0.5)) == 0.5);
    CHECK(std::fabs(integral(power_profile(0.064, 3.0)) - 0.16) <= 1e-15);
}

TEST_CASE("lq_mass examples") {
    Exponents ex(3.0, 2.0);
    CHECK(std::fabs(lq_mass(constant_profile(0.7), ex) - 0.49) <= 1e-15);
    // Power head: lq to c1 equals Gamma-shaped (q/(q - q/p))-free closed form
    // ((p-1)/p)^q / (1 - q/p) * c1^{1-q/p} = (4/3) * 0.064^{1/3}.
    CHECK(std::fabs(lq_mass(power_profile(0.064, 3.0), ex) - (4.0 / 3.0) * 0.4) <= 1e-14);
    Profile prop43(3.0, {Segment{SegmentKind::constant, 1.0 / 6.0, 1.0},
                         Segment{SegmentKind::constant, 5.0 / 6.0, 0.4}});
    CHECK(std::fabs(lq_mass(prop43, ex) - 0.3) <= 1e-15);
    // The power head t^{-1/p} is q-integrable only while q < p (profile p,
    // norm q): q = 2 against a p = 1.5 head diverges.
    CHECK_THROWS_AS(lq_mass(power_profile(0.5, 1.5), Exponents(3.0, 2.0)), infeasible_error);
}

TEST_CASE("running_integral basics and concavity") {
    Exponents ex(3.0, 2.0);
    Profile g = construct_two_piece(0.5, 0.3, 0.9, ex);
    double c1 = 0.0;
    // Recover c1 from the head length.
    c1 = g.segments().front().length;
    CHECK(running_integral(g, 0.0) == 0.0);
    CHECK(std::fabs(running_integral(g, c1) - std::pow(c1, 2.0 / 3.0)) <= 1e-12);
    CHECK(std::fabs(running_integral(g, g.domain_length()) - integral(g)) <= 1e-15);
    CHECK_THROWS_AS(running_integral(g, -0.5), infeasible_error);
    CHECK_THROWS_AS(running_integral(g, 2.0), infeasible_error);

    // R is concave: second differences nonpositive on a uniform grid.
    double L = g.domain_length();
    for (int i = 1; i < 199; ++i) {
        double t = L * static_cast<double>(i) / 200.0;
        double h = L / 200.0;
        double second = running_integral(g, t - h) - 2.0 * running_integral(g, t) +
                        running_integral(g, t + h);
        CHECK(second <= 1e-12);
    }
}

TEST_CASE("weak_norm examples") {
    Exponents ex(3.0, 2.0);
    CHECK(weak_norm(constant_profile(0.5), ex) == 0.5);
    Profile prop43(3.0, {Segment{SegmentKind::constant, 1.0 / 6.0, 1.0},
                         Segment{SegmentKind::constant, 5.0 / 6.0, 0.4}});
    CHECK(std::fabs(weak_norm(prop43, ex) - std::pow(1.0 / 6.0, 1.0 / 3.0)) <= 1e-12);
}

TEST_CASE("weak_norm equals the sup over a dense t-grid") {
    Exponents ex(3.0, 2.0);
    std::vector<Profile> profiles;
    profiles.push_back(construct_two_piece(0.5, 0.3, 0.9, ex));
    profiles.push_back(construct_prop43(0.5, 0.3, 1.0, ex));
    profiles.push_back(construct_prop44(0.5, 0.9, 1.5, ex));
    profiles.push_back(construct_prop44(0.5, 0.8, 1.5, ex));
    profiles.push_back(extreme_point_profile(6, 0.62, ex));
    for (const Profile& g : profiles) {
        double L = g.domain_length();
        double sup = 0.0;
        // Uniform 2^16 grid plus every segment breakpoint.
        std::vector<double> ts;
        ts.reserve((1 << 16) + 8);
        for (int i = 1; i <= (1 << 16); ++i)
            ts.push_back(L * static_cast<double>(i) / static_cast<double>(1 << 16));
        double acc = 0.0;
        for (const Segment& s : g.segments()) {
            acc += s.length;
            ts.push_back(std::min(acc, L));
        }
        for (double t : ts)
            sup = std::max(sup, std::pow(t, 1.0 / ex.p - 1.0) * running_integral(g, t));
        CHECK(std::fabs(weak_norm(g, ex) - sup) <= 1e-12);
    }
}

TEST_CASE("discretize constant profile is bit-exact") {
    Profile g = constant_profile(0.4375);
    for (int m : {2, 3}) {
        GridFunction u = discretize(g, 5, m);
        CHECK(u.branching == m);
        for (double v : u.values) CHECK(v == 0.4375);
    }
}

TEST_CASE("discretize preserves the integral and converges in lq") {
    Exponents ex(3.0, 2.0);
    Profile g = construct_two_piece(0.5, 0.3, 0.9, ex);
    GridFunction u10 = discretize(g, 10);
    CHECK(std::fabs(integral(u10) - integral(g)) <= 1e-14);

    GridFunction u16 = discretize(g, 16);
    CHECK(std::fabs(integral(u16) - integral(g)) <= 1e-14);
    CHECK(weak_norm(u16, ex) <= weak_norm(g, ex) + 1e-12);

    GridFunction u9 = discretize(g, 9, 3);
    CHECK(std::fabs(integral(u9) - integral(g)) <= 1e-14);
    CHECK(weak_norm(u9, ex) <= weak_norm(g, ex) + 1e-12);

    // Piecewise-constant profiles converge fast: only segment-boundary cells
    // deviate, so the relative lq gap at N=16 sits far below 1e-3.
    Profile pc = construct_prop43(0.5, 0.3, 1.0, ex);
    double rel16 = std::fabs(lq_mass(discretize(pc, 16), ex) - lq_mass(pc, ex)) / lq_mass(pc, ex);
    CHECK(rel16 < 1e-3);

    // With a power head, cell averaging loses lq mass one-sidedly (Jensen);
    // the deficit shrinks with depth at the ~2^{-N(1-q/p)} Riemann rate.
    Profile head = construct_two_piece(0.5, 0.6, 0.9, ex);
    double true_lq = lq_mass(head, ex);
    double gap12 = true_lq - lq_mass(discretize(head, 12), ex);
    double gap16 = true_lq - lq_mass(discretize(head, 16), ex);
    CHECK(gap12 > 0.0);
    CHECK(gap16 > 0.0);
    CHECK(gap16 < gap12);
    CHECK(gap16 / true_lq < 5e-2);
}

TEST_CASE("cell averaging is monotone on nonincreasing profiles") {
    Exponents ex(3.0, 2.0);
    Profile g = construct_prop44(0.5, 0.9, 1.5, ex);
    GridFunction u = discretize(g, 8);
    for (std::size_t i = 1; i < u.values.size(); ++i) CHECK(u.values[i - 1] >= u.values[i]);
}

TEST_CASE("decreasing_rearrangement") {
    GridFunction u;
    u.level = 2;
    u.branching = 2;
    u.values = {0.0, 1.0, 0.0, 2.0};
    GridFunction r = decreasing_rearrangement(u);
    CHECK(r.values == std::vector<double>{2.0, 1.0, 0.0, 0.0});
    CHECK(r.level == 2);

    GridFunction c;
    c.level = 1;
    c.branching = 2;
    c.values = {0.3, 0.3};
    CHECK(decreasing_rearrangement(c).values == c.values);
}

TEST_CASE("rearrangement prefix sums dominate every equal-size subset") {
    std::mt19937_64 rng(11);
    GridFunction u = test::random_grid(rng, 3);  // 8 cells
    GridFunction r = decreasing_rearrangement(u);
    std::size_t n = u.values.size();
    for (std::size_t size = 1; size <= n; ++size) {
        double best = 0.0;
        for (std::size_t mask = 0; mask < (1u << n); ++mask) {
            if (static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask))) != size)
                continue;
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1u << i)) sum += u.values[i];
            best = std::max(best, sum);
        }
        double prefix = 0.0;
        for (std::size_t i = 0; i < size; ++i) prefix += r.values[i];
        CHECK(std::fabs(prefix - best) <= 1e-12);
    }
}

TEST_CASE("grid norms agree with direct formulas") {
    Exponents ex(3.0, 2.0);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        GridFunction u = trial % 2 ? test::spiky_grid(rng, 6) : test::random_grid(rng, 6);
        GridFunction r = decreasing_rearrangement(u);
        double w = u.cell_width();

        // weak_norm: sup over prefix sizes of t^{1/p-1} * (prefix integral).
        double want = 0.0;
        double run = 0.0;
        for (std::size_t i = 0; i < r.values.size(); ++i) {
            run += r.values[i] * w;
            double t = static_cast<double>(i + 1) * w;
            want = std::max(want, std::pow(t, 1.0 / ex.p - 1.0) * run);
        }
        CHECK(std::fabs(weak_norm(u, ex) - want) <= 1e-12 * std::max(1.0, want));

        // quasi_norm: sup over lambda of lambda |{u > lambda}|^{1/p}; the sup
        // is attained with lambda at a cell value.
        double quasi = 0.0;
        for (std::size_t i = 0; i < r.values.size(); ++i) {
            double measure = static_cast<double>(i + 1) * w;
            quasi = std::max(quasi, r.values[i] * std::pow(measure, 1.0 / ex.p));
        }
        CHECK(std::fabs(quasi_norm(u, ex) - quasi) <= 1e-12 * std::max(1.0, quasi));

        // Sandwich: quasi <= weak <= (p/(p-1)) quasi.
        CHECK(quasi_norm(u, ex) <= weak_norm(u, ex) + 1e-12);
        CHECK(weak_norm(u, ex) <= ex.p / (ex.p - 1.0) * quasi_norm(u, ex) + 1e-12);
    }
}

TEST_CASE("extract_equal_average_block examples") {
    std::vector<double> constant(8, 0.3);
    CHECK(extract_equal_average_block(constant, 3, 0.3) == 0);

    std::vector<double> steps{4.0, 3.0, 2.0, 1.0};
    CHECK(extract_equal_average_block(steps, 2, 2.5) == 1);

    double avg = (4.0 + 3.0 + 2.0 + 1.0) / 4.0;
    CHECK(extract_equal_average_block(steps, 4, avg) == 0);
}

TEST_CASE("extract_equal_average_block matches a direct window scan") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 5 + static_cast<std::size_t>(rng() % 60);
        std::vector<double> v(n);
        for (auto& x : v) x = dist(rng);
        std::sort(v.begin(), v.end(), std::greater<double>());
        std::size_t t = 1 + static_cast<std::size_t>(rng() % n);
        auto window_avg = [&](std::size_t r) {
            double s = 0.0;
            for (std::size_t i = r; i < r + t; ++i) s += v[i];
            return s / static_cast<double>(t);
        };
        // Pick s inside the attainable window range.
        double shi = window_avg(0), slo = window_avg(n - t);
        double s = slo + (shi - slo) * dist(rng);
        std::size_t r = extract_equal_average_block(v, t, s);
        double tol = 1e-12 * std::max(1.0, std::fabs(s));
        std::size_t want = n - t;
        for (std::size_t cand = 0; cand + t <= n; ++cand)
            if (window_avg(cand) <= s + tol) {
                want = cand;
                break;
            }
        CHECK(r == want);
        // The window straddles s: one step left is >= s, the window itself <= s.
        CHECK(window_avg(r) <= s + tol);
        if (r > 0) CHECK(window_avg(r - 1) >= s - tol);
    }
}

TEST_CASE("extract_equal_average_block rejects out-of-range targets") {
    std::vector<double> steps{4.0, 3.0, 2.0, 1.0};
    CHECK_THROWS_AS(extract_equal_average_block(steps, 2, 3.8), infeasible_error);
    CHECK_THROWS_AS(extract_equal_average_block(steps, 2, 1.2), infeasible_error);
    CHECK_THROWS_AS(extract_equal_average_block(steps, 0, 2.0), infeasible_error);
    CHECK_THROWS_AS(extract_equal_average_block(steps, 5, 2.0), infeasible_error);
}

TEST_CASE("repeated extraction keeps block averages near the running target") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> pool(64);
    for (auto& x : pool) x = dist(rng);
    std::sort(pool.begin(), pool.end(), std::greater<double>());
    while (pool.size() > 4) {
        std::size_t t = 1 + static_cast<std::size_t>(rng() % (pool.size() / 2));
        double s = 0.0;
        for (double x : pool) s += x;
        s /= static_cast<double>(pool.size());
        std::size_t r = extract_equal_average_block(pool, t, s);
        double sum = 0.0;
        for (std::size_t i = r; i < r + t; ++i) sum += pool[i];
        double avg = sum / static_cast<double>(t);
        // One-cell tolerance: moving the window by one cell changes its
        // average by at most (max - min)/t.
        double slack = (pool.front() - pool.back()) / static_cast<double>(t) + 1e-12;
        CHECK(std::fabs(avg - s) <= slack);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(r),
                   pool.begin() + static_cast<std::ptrdiff_t>(r + t));
    }
}
