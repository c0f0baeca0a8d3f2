#include "weakmax/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "bisect.hpp"
#include "weakmax/domain.hpp"
#include "weakmax/errors.hpp"

namespace weakmax {

namespace {

constexpr double kRelTol = 1e-12;
// Plateau shorter than this fraction of its scale collapses into the piece
// before it; the dropped mass is below any tested tolerance.
constexpr double kTinyLen = 1e-14;

// num^q / den^{q-1} extended by continuity: the moment contribution of a
// plateau of height num/den on an interval of length den.
double ratio_q(double num, double den, double q) {
    if (num <= 0.0 || den <= 0.0) return 0.0;
    return std::pow(num, q) / std::pow(den, q - 1.0);
}

}  // namespace

const char* to_string(ExtremalBranch b) {
    switch (b) {
        case ExtremalBranch::trivial: return "trivial";
        case ExtremalBranch::G_mid: return "G_mid";
        case ExtremalBranch::G_root: return "G_root";
        case ExtremalBranch::weak_case_i: return "weak_case_i";
        case ExtremalBranch::weak_case_ii: return "weak_case_ii";
    }
    return "unknown";
}

Profile extreme_point_profile(int n, double f, const Exponents& ex) {
    if (n < 0 || n > 26)
        throw infeasible_error("extreme_point_profile: n must lie in [0, 26]");
    if (!(f > 0.0) || f > 1.0 + kRelTol)
        throw infeasible_error("extreme_point_profile: f must lie in (0, 1]");
    f = std::min(f, 1.0);
    const double p = ex.p;
    const double e = 1.0 - 1.0 / p;
    const std::size_t M = std::size_t{1} << n;
    const double Md = static_cast<double>(M);
    const double scale = std::pow(Md, 1.0 / p);

    // k = max{ i <= M : (i/M)^{1-1/p} <= f }, seeded by the closed form and
    // fixed up so ties land on the inclusive side.
    const auto step_ok = [&](std::size_t i) {
        return std::pow(static_cast<double>(i) / Md, e) <= f * (1.0 + kRelTol);
    };
    std::size_t k = static_cast<std::size_t>(
        std::floor(std::pow(f, p / (p - 1.0)) * Md + 1e-9));
    k = std::min(k, M);
    while (k > 0 && !step_ok(k)) --k;
    while (k < M && step_ok(k + 1)) ++k;

    std::vector<Segment> segs;
    segs.reserve(k + 2);
    const double w = 1.0 / Md;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i <= k; ++i) {
        const double id = static_cast<double>(i);
        double v = scale * (std::pow(id, e) - std::pow(id - 1.0, e));
        v = std::min(v, prev);
        prev = v;
        segs.push_back({SegmentKind::constant, w, v});
    }
    if (k < M) {
        double rem = Md * f - scale * std::pow(static_cast<double>(k), e);
        rem = std::clamp(rem, 0.0, prev);
        segs.push_back({SegmentKind::constant, w, rem});
        if (k + 1 < M)
            segs.push_back({SegmentKind::constant, static_cast<double>(M - k - 1) * w, 0.0});
    }
    return Profile(p, std::move(segs));
}

Profile construct_two_piece(double f, double A, double alpha, const Exponents& ex,
                            ExtremalRecipe* recipe) {
    const double p = ex.p;
    const double q = ex.q;
    if (!(alpha > 0.0) || alpha > 1.0 + kRelTol)
        throw infeasible_error("construct_two_piece: alpha must lie in (0, 1]");
    alpha = std::min(alpha, 1.0);
    if (!(f > 0.0))
        throw infeasible_error("construct_two_piece: requires f > 0");
    if (f > std::pow(alpha, 1.0 - 1.0 / p) * (1.0 + kRelTol))
        throw infeasible_error("construct_two_piece: requires f <= alpha^{1-1/p}");
    if (!(std::pow(f, q) < std::pow(alpha, q - 1.0) * A * (1.0 + kRelTol)))
        throw infeasible_error("construct_two_piece: requires f^q < alpha^{q-1} A");
    const double G = gamma(ex);
    if (A > G * std::pow(f, (p - q) / (p - 1.0)) * (1.0 + kRelTol))
        throw infeasible_error("construct_two_piece: requires A <= Gamma f^{(p-q)/(p-1)}");

    // T is continuous on [0, f^{p/(p-1)}] with T(0) = f^q/alpha^{q-1} < A and
    // T at the top end = Gamma f^{(p-q)/(p-1)} >= A.
    const double hi = std::min(std::pow(f, p / (p - 1.0)), alpha);
    const auto T = [&](double t) {
        return G * std::pow(t, 1.0 - q / p) +
               ratio_q(f - std::pow(t, 1.0 - 1.0 / p), alpha - t, q) - A;
    };
    double c1 = detail::bisect(T, 0.0, hi, "construct_two_piece").x;

    double mu2 = 0.0;
    std::vector<Segment> segs;
    if (c1 <= 0.0) {
        // Root at the bracket floor: A sits on f^q = alpha^{q-1} A within
        // tolerance and the constant plateau alone realizes both moments.
        c1 = 0.0;
        mu2 = f / alpha;
        segs.push_back({SegmentKind::constant, alpha, mu2});
    } else if (alpha - c1 > kTinyLen * alpha) {
        mu2 = std::max(0.0, (f - std::pow(c1, 1.0 - 1.0 / p)) / (alpha - c1));
        segs.push_back({SegmentKind::power, c1, 0.0});
        segs.push_back({SegmentKind::constant, alpha - c1, mu2});
    } else {
        c1 = alpha;
        segs.push_back({SegmentKind::power, c1, 0.0});
    }
    if (recipe) {
        recipe->c1 = c1;
        recipe->mu2 = mu2;
        recipe->alpha = alpha;
    }
    return Profile(p, std::move(segs));
}

Profile construct_prop43(double f, double A, double lambda, const Exponents& ex,
                         ExtremalRecipe* recipe) {
    const double p = ex.p;
    if (f > 1.0 + kRelTol)
        throw infeasible_error("construct_prop43: requires f <= 1");
    const double k = solve_k(f, A, lambda, ex);
    if (k * lambda > std::pow(k, 1.0 - 1.0 / p) + 1e-9)
        throw infeasible_error(
            "construct_prop43: k*lambda exceeds k^{1-1/p}, the weak cap binds; "
            "use construct_prop44");

    double second = 0.0;
    if (1.0 - k > kTinyLen)
        second = std::max(0.0, (f - k * lambda) / (1.0 - k));
    std::vector<Segment> segs;
    if (k > 0.0) segs.push_back({SegmentKind::constant, k, lambda});
    if (1.0 - k > 0.0) segs.push_back({SegmentKind::constant, 1.0 - k, second});
    if (recipe) {
        recipe->c1 = 0.0;
        recipe->mu2 = second;
        recipe->mu3 = 0.0;
        recipe->k = k;
        recipe->alpha = k;
    }
    return Profile(p, std::move(segs));
}

Profile construct_prop44(double f, double A, double lambda, const Exponents& ex,
                         ExtremalRecipe* recipe) {
    const double p = ex.p;
    const double q = ex.q;
    if (!(lambda > 1.0))
        throw infeasible_error("construct_prop44: requires lambda > 1 (the weak cap is inactive otherwise)");
    if (!(lambda > f))
        throw infeasible_error("construct_prop44: requires lambda > f");
    const double u = std::pow(lambda, -p);        // cap measure lambda^{-p}
    const double lam1p = std::pow(lambda, 1.0 - p); // attained mass at u
    if (f < lam1p * (1.0 - kRelTol))
        throw infeasible_error("construct_prop44: requires f >= lambda^{1-p}");
    const double G = gamma(ex);

    const double tail = ratio_q(f - lam1p, 1.0 - u, q);
    const double theta = G * std::pow(lambda, q - p) + tail;
    double mu3 = std::max(0.0, (f - lam1p) / (1.0 - u));

    double c1 = 0.0;
    double mu2 = 0.0;
    std::vector<Segment> segs;
    ExtremalBranch branch;
    if (theta > A) {
        // Case i: power / mu2 / mu3. The bracket holds because the case-i
        // moment function rises from the G-root value (<= A on this branch)
        // at c = 0 up to theta at c = u.
        branch = ExtremalBranch::weak_case_i;
        const auto Ti = [&](double c) {
            return G * std::pow(c, 1.0 - q / p) +
                   ratio_q(lam1p - std::pow(c, 1.0 - 1.0 / p), u - c, q) + tail - A;
        };
        try {
            c1 = detail::bisect(Ti, 0.0, u, "construct_prop44 case i").x;
        } catch (const bracketing_error& err) {
            throw infeasible_error(std::string("construct_prop44: ") + err.what() +
                                   " (branch misclassification?)");
        }
        if (c1 > 0.0) segs.push_back({SegmentKind::power, c1, 0.0});
        if (u - c1 > kTinyLen * u) {
            mu2 = std::max(0.0, (lam1p - std::pow(c1, 1.0 - 1.0 / p)) / (u - c1));
            segs.push_back({SegmentKind::constant, u - c1, mu2});
        } else {
            c1 = u;
            if (segs.empty()) segs.push_back({SegmentKind::power, c1, 0.0});
            else segs.back().length = c1;
        }
        segs.push_back({SegmentKind::constant, 1.0 - u, mu3});
    } else {
        // Case ii: power / mu2 with the root past u; ties land here and give
        // c1 = u exactly as in case i's degenerate end.
        branch = ExtremalBranch::weak_case_ii;
        const double hi = std::max(std::pow(f, p / (p - 1.0)), u);
        const auto Tii = [&](double c) {
            return G * std::pow(c, 1.0 - q / p) +
                   ratio_q(f - std::pow(c, 1.0 - 1.0 / p), 1.0 - c, q) - A;
        };
        try {
            c1 = detail::bisect(Tii, u, hi, "construct_prop44 case ii").x;
        } catch (const bracketing_error& err) {
            throw infeasible_error(std::string("construct_prop44: ") + err.what() +
                                   " (branch misclassification?)");
        }
        mu3 = 0.0;
        segs.push_back({SegmentKind::power, c1, 0.0});
        if (1.0 - c1 > kTinyLen) {
            mu2 = std::max(0.0, (f - std::pow(c1, 1.0 - 1.0 / p)) / (1.0 - c1));
            segs.push_back({SegmentKind::constant, 1.0 - c1, mu2});
        }
    }
    if (recipe) {
        recipe->branch = branch;
        recipe->c1 = c1;
        recipe->mu2 = mu2;
        recipe->mu3 = mu3;
        recipe->alpha = u;
        recipe->theta_lambda = theta;
    }
    return Profile(p, std::move(segs));
}

std::pair<Profile, ExtremalRecipe> extremizer_for(double f, double A, double lambda,
                                                  const Exponents& ex) {
    if (!(lambda > 0.0))
        throw infeasible_error("extremizer_for: requires lambda > 0");
    const DomainVerdict verdict = domain_check(ex, ConstraintTriple(f, A));
    if (!verdict.member)
        throw infeasible_error(
            "extremizer_for: (f, A) violates 0 < f <= 1, f^q <= A <= Gamma f^{(p-q)/(p-1)}");

    ExtremalRecipe rec;
    rec.norm_equality_feasible = verdict.equality_feasible;

    if (A <= std::pow(f, ex.q) * (1.0 + kRelTol)) {
        // A = f^q: only the constant f fits both moments, at every lambda.
        // It reaches measure 1 up to lambda = f and nothing beyond (k = 0).
        rec.branch = ExtremalBranch::trivial;
        rec.mu2 = f;
        rec.alpha = lambda <= f ? 1.0 : 0.0;
        return {Profile(ex.p, {{SegmentKind::constant, 1.0, f}}), rec};
    }

    if (lambda <= f) {
        rec.branch = ExtremalBranch::trivial;
        rec.alpha = 1.0;
        Profile prof = construct_two_piece(f, A, 1.0, ex, &rec);
        return {std::move(prof), rec};
    }

    const BoundReport rep = t1(f, A, lambda, ex);
    switch (rep.branch) {
        case Branch::f_over_lambda: {
            Profile prof = construct_two_piece(f, A, f / lambda, ex, &rec);
            rec.branch = ExtremalBranch::G_mid;
            return {std::move(prof), rec};
        }
        case Branch::k_root: {
            Profile prof = construct_prop43(f, A, lambda, ex, &rec);
            rec.branch = ExtremalBranch::G_root;
            return {std::move(prof), rec};
        }
        case Branch::weak_cap: {
            Profile prof = construct_prop44(f, A, lambda, ex, &rec);
            return {std::move(prof), rec};
        }
        case Branch::one:
            break;
    }
    // lambda > f forces G < 1, so min{1, G, lambda^{-p}} < 1: unreachable.
    throw infeasible_error("extremizer_for: T = 1 branch reported for lambda > f");
}

}  // namespace weakmax
