#include "weakmax/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "weakmax/domain.hpp"
#include "weakmax/errors.hpp"
#include "weakmax/extremal.hpp"

namespace weakmax {

namespace {

constexpr std::size_t kMaxCells = std::size_t{1} << 26;

}  // namespace

TreeSpec::TreeSpec(int branching_, int depth_) : branching(branching_), depth(depth_) {
    if (branching < 2) throw infeasible_error("TreeSpec: branching must be >= 2");
    if (depth < 0) throw infeasible_error("TreeSpec: depth must be >= 0");
    std::size_t cells = 1;
    for (int l = 0; l < depth; ++l) {
        if (cells > kMaxCells / static_cast<std::size_t>(branching))
            throw infeasible_error("TreeSpec: branching^depth exceeds the 2^26 cell budget");
        cells *= static_cast<std::size_t>(branching);
    }
}

std::size_t TreeSpec::cell_count() const {
    std::size_t cells = 1;
    for (int l = 0; l < depth; ++l) cells *= static_cast<std::size_t>(branching);
    return cells;
}

MaximalField maximal_operator(const GridFunction& phi, const TreeSpec& tree) {
    if (phi.branching != tree.branching)
        throw infeasible_error("maximal_operator: grid branching does not match the tree");
    if (phi.level != tree.depth)
        throw infeasible_error("maximal_operator: grid level does not match the tree depth");
    const std::size_t M = tree.cell_count();
    if (phi.values.size() != M)
        throw infeasible_error("maximal_operator: cell count does not match branching^level");

    // Per-level block averages built bottom-up: a parent average is the mean
    // of its children's averages (children have equal measure). Blocks of
    // equal-valued cells keep their value bit-exactly this way (for m = 2 at
    // every level), which the closed >= in distribution_measure relies on;
    // a flat prefix-sum scan would smear them by accumulated rounding.
    const std::size_t m = static_cast<std::size_t>(tree.branching);
    std::vector<std::vector<double>> levels(static_cast<std::size_t>(tree.depth) + 1);
    levels[static_cast<std::size_t>(tree.depth)] = phi.values;
    for (int L = tree.depth; L > 0; --L) {
        const std::vector<double>& child = levels[static_cast<std::size_t>(L)];
        std::vector<double>& parent = levels[static_cast<std::size_t>(L - 1)];
        parent.assign(child.size() / m, 0.0);
        for (std::size_t j = 0; j < parent.size(); ++j) {
            double sum = 0.0;
            for (std::size_t c = 0; c < m; ++c) sum += child[j * m + c];
            parent[j] = sum / static_cast<double>(m);
        }
    }

    // The sup over intervals deeper than the leaf level equals the leaf value
    // itself, so seeding with the leaf values is exact.
    MaximalField field;
    field.values = phi.values;
    std::size_t block = M;
    for (int L = 0; L < tree.depth; ++L) {
        const std::vector<double>& avg = levels[static_cast<std::size_t>(L)];
        for (std::size_t i = 0; i < M; ++i)
            field.values[i] = std::max(field.values[i], avg[i / block]);
        block /= m;
    }
    return field;
}

double distribution_measure(const MaximalField& field, double lambda) {
    if (field.values.empty()) return 0.0;
    std::size_t count = 0;
    for (double v : field.values)
        if (v >= lambda) ++count;
    return static_cast<double>(count) / static_cast<double>(field.values.size());
}

std::vector<CoverInterval> dyadic_cover(double alpha, const TreeSpec& tree) {
    if (!(alpha > 0.0) || alpha > 1.0 + 1e-12)
        throw infeasible_error("dyadic_cover: alpha must lie in (0, 1]");
    alpha = std::min(alpha, 1.0);
    const std::size_t M = tree.cell_count();
    const std::size_t m = static_cast<std::size_t>(tree.branching);
    std::size_t cells = static_cast<std::size_t>(
        std::floor(alpha * static_cast<double>(M) + 1e-9));
    cells = std::min(cells, M);

    // Greedy from the left: the largest aligned m-power block fitting in the
    // remainder. Sizes come out nonincreasing, i.e. largest first.
    std::vector<CoverInterval> cover;
    std::size_t pos = 0;
    while (pos < cells) {
        std::size_t b = 1;
        while (b * m <= cells - pos && pos % (b * m) == 0) b *= m;
        cover.push_back({pos, b});
        pos += b;
    }
    return cover;
}

GridFunction transplant(const Profile& g, double alpha, double lambda, const TreeSpec& tree) {
    if (!(alpha > 0.0) || alpha > 1.0 + 1e-12)
        throw infeasible_error("transplant: alpha must lie in (0, 1]");
    alpha = std::min(alpha, 1.0);
    if (!(lambda > 0.0)) throw infeasible_error("transplant: lambda must be positive");
    const double reach = std::min(alpha, g.domain_length());
    const double attained = running_integral(g, reach);
    if (attained < alpha * lambda - 1e-9 * std::max(1.0, alpha * lambda))
        throw infeasible_error("transplant: running_integral(alpha) < alpha*lambda");

    GridFunction grid = discretize(g, tree.depth, tree.branching);
    const std::size_t M = grid.values.size();
    std::size_t cells = static_cast<std::size_t>(
        std::floor(alpha * static_cast<double>(M) + 1e-9));
    cells = std::min(cells, M);
    if (cells == 0) return grid;

    std::vector<double> pool(grid.values.begin(),
                             grid.values.begin() + static_cast<std::ptrdiff_t>(cells));

    GridFunction out = grid;
    std::vector<long double> P;
    std::deque<CoverInterval> work;
    for (const CoverInterval& iv : dyadic_cover(alpha, tree)) work.push_back(iv);
    while (!work.empty()) {
        const CoverInterval iv = work.front();
        work.pop_front();
        const std::size_t t = iv.cell_count;
        const std::size_t n = pool.size();
        P.assign(n + 1, 0.0L);
        for (std::size_t i = 0; i < n; ++i) P[i + 1] = P[i] + pool[i];
        const long double lamt =
            static_cast<long double>(lambda) * static_cast<long double>(t);

        // First choice: the crossing window at the current remaining average.
        const double s = static_cast<double>(P[n] / static_cast<long double>(n));
        std::size_t r = extract_equal_average_block(pool, t, s);

        std::size_t pre = 0;  // rich prefix cells of a mixed selection
        std::size_t suf = 0;  // poor suffix cells
        bool has_mid = false;
        std::size_t mid = 0;
        bool window = true;
        if (P[r + t] - P[r] < lamt) {
            // Cell granularity pushed the window average below lambda, which
            // the continuum construction never does. Re-select the block as
            // rich prefix + poor suffix, minimal count of rich cells, then one
            // mid-pool swap to trim the surplus. The pool multiset is consumed
            // exactly either way; only which blocks clear lambda changes.
            window = false;
            const auto mix = [&](std::size_t a) {
                return P[a] + (P[n] - P[n - (t - a)]);
            };
            if (mix(t) < lamt) {
                if (t > 1 && pool[0] >= lambda) {
                    // The block as a whole cannot clear lambda, but single
                    // cells still can. Hand its children to the queue so the
                    // deficit shrinks into one subtree instead of costing the
                    // entire block.
                    std::size_t child = t / static_cast<std::size_t>(tree.branching);
                    for (int c = tree.branching - 1; c >= 0; --c)
                        work.push_front(CoverInterval{
                            iv.start_cell + static_cast<std::size_t>(c) * child, child});
                    continue;
                }
                // No subset can count; spend the poorest cells so richer ones
                // stay available for the blocks to come.
                r = n - t;
                window = true;
            } else {
                std::size_t lo = 0;
                std::size_t hi = t;
                while (lo < hi) {
                    const std::size_t mi2 = lo + (hi - lo) / 2;
                    if (mix(mi2) >= lamt) hi = mi2; else lo = mi2 + 1;
                }
                if (lo == 0) {
                    r = n - t;  // the poorest window already averages >= lambda
                    window = true;
                } else {
                    pre = lo;
                    suf = t - lo;
                    const long double sigma = mix(lo) - lamt;
                    const std::size_t mb = n - suf;  // middle cells are [pre, mb)
                    if (sigma > 0.0L && pre < mb) {
                        const long double target =
                            static_cast<long double>(pool[pre - 1]) - sigma;
                        if (static_cast<long double>(pool[pre]) >= target) {
                            std::size_t mlo = pre;
                            std::size_t mhi = mb - 1;
                            while (mlo < mhi) {
                                const std::size_t mi2 = mlo + (mhi - mlo + 1) / 2;
                                if (static_cast<long double>(pool[mi2]) >= target)
                                    mlo = mi2;
                                else
                                    mhi = mi2 - 1;
                            }
                            has_mid = true;
                            mid = mlo;
                            --pre;
                        }
                    }
                }
            }
        }

        std::size_t o = iv.start_cell;
        if (window) {
            for (std::size_t i = 0; i < t; ++i) out.values[o++] = pool[r + i];
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(r),
                       pool.begin() + static_cast<std::ptrdiff_t>(r + t));
        } else {
            for (std::size_t i = 0; i < pre; ++i) out.values[o++] = pool[i];
            if (has_mid) out.values[o++] = pool[mid];
            for (std::size_t i = n - suf; i < n; ++i) out.values[o++] = pool[i];
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(n - suf), pool.end());
            if (has_mid) pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(mid));
            pool.erase(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(pre));
        }
    }
    // The cover consumes the head pool exactly; the tail cells beyond alpha_N
    // stay in place, already nonincreasing.
    return out;
}

namespace {

double field_measure(const GridFunction& phi, const TreeSpec& tree, double lambda) {
    return distribution_measure(maximal_operator(phi, tree), lambda);
}

struct Feasibility {
    double f;
    double A;
    Exponents ex;

    bool integral_ok(const GridFunction& phi) const {
        return std::fabs(integral(phi) - f) <= 1e-9 * std::max(1.0, f);
    }
    bool band_ok(const GridFunction& phi) const {
        return std::fabs(lq_mass(phi, ex) - A) <= 1e-6;
    }
    bool weak_ok(const GridFunction& phi) const {
        return weak_norm(phi, ex) <= 1.0 + 1e-12;
    }
    bool ok(const GridFunction& phi) const {
        return integral_ok(phi) && band_ok(phi) && weak_ok(phi);
    }
};

// Moves mass between the extreme cells until |lq - A| <= 1e-7, keeping the
// integral exact and the weak norm admissible. Convexity of x^q makes the
// q-mass monotone in the transfer size, so each step bisects cleanly.
bool project_to_band(GridFunction& phi, const Feasibility& fea) {
    const double q = fea.ex.q;
    const std::size_t M = phi.values.size();
    if (M < 2) return fea.band_ok(phi);
    const double w = 1.0 / static_cast<double>(M);

    for (int iter = 0; iter < 200; ++iter) {
        const double lq = lq_mass(phi, fea.ex);
        const double d = lq - fea.A;
        if (std::fabs(d) <= 1e-7) return true;

        std::size_t top = 0, bottom = 0;
        for (std::size_t i = 1; i < M; ++i) {
            if (phi.values[i] > phi.values[top]) top = i;
            if (phi.values[i] < phi.values[bottom]) bottom = i;
        }
        std::size_t donor, receiver;
        double dmax;
        if (d < 0.0) {
            // Raise the q-mass: move mass from the smallest positive cell up.
            donor = M;
            for (std::size_t i = 0; i < M; ++i)
                if (phi.values[i] > 0.0 && i != top &&
                    (donor == M || phi.values[i] < phi.values[donor]))
                    donor = i;
            if (donor == M) return false;
            receiver = top;
            dmax = phi.values[donor];
        } else {
            // Lower the q-mass: move mass from the top toward the bottom.
            donor = top;
            receiver = bottom;
            if (donor == receiver) return false;
            dmax = (phi.values[donor] - phi.values[receiver]) / 2.0;
        }
        if (!(dmax > 0.0)) return false;

        const double vd = phi.values[donor];
        const double vr = phi.values[receiver];
        const auto lq_after = [&](double delta) {
            return lq + w * (std::pow(vd - delta, q) - std::pow(vd, q) +
                             std::pow(vr + delta, q) - std::pow(vr, q));
        };
        double delta = dmax;
        if ((lq_after(dmax) - fea.A) * d < 0.0) {
            double lo = 0.0, hi = dmax;
            for (int b = 0; b < 60; ++b) {
                const double mid = 0.5 * (lo + hi);
                if ((lq_after(mid) - fea.A) * d < 0.0) hi = mid;
                else lo = mid;
            }
            delta = 0.5 * (lo + hi);
        }
        const auto apply = [&](double del) {
            phi.values[donor] = vd - del;
            phi.values[receiver] = vr + del;
        };
        apply(delta);
        if (!fea.weak_ok(phi)) {
            // Back off to the largest weak-admissible transfer.
            double lo = 0.0, hi = delta;
            for (int b = 0; b < 50; ++b) {
                const double mid = 0.5 * (lo + hi);
                apply(mid);
                if (fea.weak_ok(phi)) lo = mid;
                else hi = mid;
            }
            apply(lo);
            if (lo <= 1e-15) return false;
        }
    }
    return fea.band_ok(phi);
}

}  // namespace

OracleResult oracle_search(double f, double A, double lambda, const Exponents& ex, int n,
                           int steps, int restarts, unsigned long long seed) {
    if (n < 0 || n > 12)
        throw infeasible_error("oracle_search: n must lie in [0, 12]");
    if (!(lambda > 0.0)) throw infeasible_error("oracle_search: lambda must be positive");
    if (steps < 0 || restarts < 1)
        throw infeasible_error("oracle_search: steps must be >= 0 and restarts >= 1");
    if (!domain_check(ex, ConstraintTriple(f, A)).member)
        throw infeasible_error(
            "oracle_search: (f, A) violates 0 < f <= 1, f^q <= A <= Gamma f^{(p-q)/(p-1)}");

    const TreeSpec tree(2, n);
    const std::size_t M = tree.cell_count();
    const Feasibility fea{f, A, ex};

    std::vector<GridFunction> seeds;
    seeds.push_back(GridFunction{n, 2, std::vector<double>(M, f)});
    const auto try_seed = [&](auto&& make) {
        try {
            seeds.push_back(make());
        } catch (const std::runtime_error&) {
            // Construction preconditions off this branch; skip the seed.
        }
    };
    try_seed([&] {
        auto [prof, rec] = extremizer_for(f, A, lambda, ex);
        return transplant(prof, rec.alpha, lambda, tree);
    });
    try_seed([&] {
        ExtremalRecipe rec;
        Profile prof = construct_prop43(f, A, lambda, ex, &rec);
        return transplant(prof, std::max(rec.k, 1.0 / static_cast<double>(M)), lambda, tree);
    });
    try_seed([&] {
        ExtremalRecipe rec;
        Profile prof = construct_prop44(f, A, lambda, ex, &rec);
        return transplant(prof, rec.alpha, lambda, tree);
    });
    try_seed([&] {
        const double a = std::min(f / lambda, 1.0);
        Profile prof = construct_two_piece(f, A, a, ex);
        return transplant(prof, a, lambda, tree);
    });
    try_seed([&] { return discretize(extreme_point_profile(n, f, ex), n, 2); });

    // Fallback stays safe on both sides: measure 1 only where T = 1.
    OracleResult best;
    best.witness = GridFunction{n, 2, std::vector<double>(M, f)};
    best.best_measure = lambda <= f ? 1.0 : 0.0;

    std::vector<GridFunction> feasible_seeds;
    for (GridFunction& s : seeds) {
        if (!fea.ok(s) && !(project_to_band(s, fea) && fea.ok(s))) continue;
        feasible_seeds.push_back(std::move(s));
    }
    if (feasible_seeds.empty()) return best;

    bool have_best = false;
    for (int r = 0; r < restarts; ++r) {
        GridFunction phi = feasible_seeds[static_cast<std::size_t>(r) % feasible_seeds.size()];
        std::mt19937_64 rng(seed * 1000003ULL + static_cast<unsigned long long>(r));
        std::uniform_int_distribution<std::size_t> cell(0, M - 1);
        std::uniform_real_distribution<double> frac(0.0, 1.0);

        double cur = field_measure(phi, tree, lambda);
        if (!have_best || cur > best.best_measure) {
            best.best_measure = cur;
            best.witness = phi;
            have_best = true;
        }
        for (int s = 0; s < steps; ++s) {
            if (M < 2) break;
            const std::size_t i = cell(rng);
            const std::size_t j = cell(rng);
            if (i == j || phi.values[i] <= 0.0) continue;
            const double delta = frac(rng) * phi.values[i];
            const double oi = phi.values[i];
            const double oj = phi.values[j];
            phi.values[i] = oi - delta;
            phi.values[j] = oj + delta;
            if (fea.band_ok(phi) && fea.weak_ok(phi)) {
                const double meas = field_measure(phi, tree, lambda);
                if (meas > cur) {
                    cur = meas;
                    if (cur > best.best_measure) {
                        best.best_measure = cur;
                        best.witness = phi;
                    }
                    continue;
                }
            }
            phi.values[i] = oi;
            phi.values[j] = oj;
        }
    }
    return best;
}

SharpnessReport verify_sharpness(const Exponents& ex, const ConstraintTriple& c, double lambda,
                                 int grid_level, int branching) {
    const TreeSpec tree(branching, grid_level);
    SharpnessReport report;
    report.bound = t_scaled(ex, c, lambda);
    report.grid_level = grid_level;
    report.branching = branching;

    const Normalized nrm = normalize(ex, c);
    const double nlambda = lambda / nrm.scale;
    auto [prof, rec] = extremizer_for(nrm.triple.f, nrm.triple.A, nlambda, ex);
    const GridFunction phi = transplant(prof, rec.alpha, nlambda, tree);
    report.simulated_measure = field_measure(phi, tree, nlambda);
    report.gap = report.bound.T_value - report.simulated_measure;
    return report;
}

}  // namespace weakmax
