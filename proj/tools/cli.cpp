#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "weakmax/bounds.hpp"
#include "weakmax/domain.hpp"
#include "weakmax/dyadic.hpp"
#include "weakmax/errors.hpp"
#include "weakmax/extremal.hpp"
#include "weakmax/profile.hpp"

namespace weakmax::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool parse_double(const std::string& s, double& v) {
    if (s.empty()) return false;
    char* end = nullptr;
    v = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

bool parse_int(const std::string& s, int& v) {
    if (s.empty()) return false;
    char* end = nullptr;
    long x = std::strtol(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size()) return false;
    v = static_cast<int>(x);
    return static_cast<long>(v) == x;
}

bool parse_seed(const std::string& s, std::uint64_t& v) {
    if (s.empty()) return false;
    char* end = nullptr;
    v = std::strtoull(s.c_str(), &end, 10);
    return end == s.c_str() + s.size();
}

std::string bound_row(const BoundReport& r) {
    std::string s = fmt17(r.lambda);
    s += ',';
    s += fmt17(r.G_value);
    s += ',';
    if (r.k) s += fmt17(*r.k);
    s += ',';
    s += to_string(r.branch);
    s += ',';
    s += fmt17(r.T_value);
    s += ',';
    s += fmt17(r.root_residual);
    return s;
}

ordered_json bound_object(const BoundReport& r) {
    ordered_json j;
    j["lambda"] = r.lambda;
    j["G"] = r.G_value;
    if (r.k)
        j["k"] = *r.k;
    else
        j["k"] = nullptr;
    j["branch"] = to_string(r.branch);
    j["T"] = r.T_value;
    j["residual"] = r.root_residual;
    return j;
}

ordered_json profile_object(const Profile& g) {
    ordered_json segs = ordered_json::array();
    for (const Segment& s : g.segments()) {
        ordered_json seg;
        seg["kind"] = s.kind == SegmentKind::power ? "power" : "constant";
        seg["length"] = s.length;
        if (s.kind == SegmentKind::constant) seg["value"] = s.value;
        segs.push_back(std::move(seg));
    }
    ordered_json j;
    j["p"] = g.p();
    j["domain_length"] = g.domain_length();
    j["segments"] = std::move(segs);
    return j;
}

constexpr const char* kBoundHeader = "lambda,G,k,branch,T,residual";
constexpr const char* kVerifyHeader = "lambda,G,k,branch,T,residual,simulated,gap,level";

void cmd_gamma(const RunConfig& cfg, std::ostream& os) {
    Exponents ex(cfg.p, cfg.q);
    if (cfg.format == "json") {
        ordered_json j;
        j["p"] = cfg.p;
        j["q"] = cfg.q;
        j["gamma"] = gamma(ex);
        os << j.dump() << '\n';
        return;
    }
    os << "p,q,gamma\n"
       << fmt17(cfg.p) << ',' << fmt17(cfg.q) << ',' << fmt17(gamma(ex)) << '\n';
}

void cmd_check(const RunConfig& cfg, std::ostream& os) {
    Exponents ex(cfg.p, cfg.q);
    ConstraintTriple c{cfg.f, cfg.A, cfg.F};
    DomainVerdict v = domain_check(ex, c);
    if (cfg.format == "json") {
        ordered_json j;
        j["member"] = v.member;
        j["boundary"] = to_string(v.boundary);
        j["equality_feasible"] = v.equality_feasible;
        os << j.dump() << '\n';
        return;
    }
    os << "member,boundary,equality_feasible\n"
       << (v.member ? "true" : "false") << ',' << to_string(v.boundary) << ','
       << (v.equality_feasible ? "true" : "false") << '\n';
}

void cmd_bound(const RunConfig& cfg, std::ostream& os) {
    Exponents ex(cfg.p, cfg.q);
    ConstraintTriple c{cfg.f, cfg.A, cfg.F};
    BoundReport r = t_scaled(ex, c, cfg.lambda);
    if (cfg.format == "json") {
        os << bound_object(r).dump() << '\n';
        return;
    }
    os << kBoundHeader << '\n' << bound_row(r) << '\n';
}

void cmd_sweep(const RunConfig& cfg, std::ostream& os) {
    Exponents ex(cfg.p, cfg.q);
    ConstraintTriple c{cfg.f, cfg.A, cfg.F};
    const int count = cfg.lam_count;
    std::vector<double> lambdas(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        lambdas[static_cast<std::size_t>(i)] =
            count == 1 ? cfg.lam_start
                       : cfg.lam_start + static_cast<double>(i) *
                                             (cfg.lam_stop - cfg.lam_start) /
                                             static_cast<double>(count - 1);

    // Rows are independent; compute chunks in parallel, emit in lambda order.
    std::vector<BoundReport> rows(static_cast<std::size_t>(count),
                                  BoundReport{});
    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min<unsigned>(workers, static_cast<unsigned>(count));
    std::vector<std::future<void>> futs;
    futs.reserve(workers);
    const std::size_t chunk =
        (static_cast<std::size_t>(count) + workers - 1) / workers;
    for (unsigned wkr = 0; wkr < workers; ++wkr) {
        const std::size_t lo = wkr * chunk;
        const std::size_t hi =
            std::min(static_cast<std::size_t>(count), lo + chunk);
        if (lo >= hi) break;
        futs.push_back(std::async(std::launch::async, [&, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i)
                rows[i] = t_scaled(ex, c, lambdas[i]);
        }));
    }
    for (auto& ft : futs) ft.get();

    if (cfg.format == "json") {
        ordered_json arr = ordered_json::array();
        for (const BoundReport& r : rows) arr.push_back(bound_object(r));
        os << arr.dump() << '\n';
        return;
    }
    os << kBoundHeader << '\n';
    for (const BoundReport& r : rows) os << bound_row(r) << '\n';
}

void cmd_extremal(const RunConfig& cfg, std::ostream& os) {
    Exponents ex(cfg.p, cfg.q);
    ConstraintTriple c{cfg.f, cfg.A, cfg.F};
    Normalized nrm = normalize(ex, c);
    auto [profile, recipe] =
        extremizer_for(nrm.triple.f, nrm.triple.A, cfg.lambda / cfg.F, ex);

    ordered_json j;
    j["p"] = cfg.p;
    j["q"] = cfg.q;
    j["f"] = cfg.f;
    j["A"] = cfg.A;
    j["F"] = cfg.F;
    j["lambda"] = cfg.lambda;
    // The profile realizes the normalized instance (F = 1); multiply values
    // by scale to recover an extremizer for the original triple.
    j["scale"] = nrm.scale;
    ordered_json rec;
    rec["branch"] = to_string(recipe.branch);
    rec["c1"] = recipe.c1;
    rec["mu2"] = recipe.mu2;
    rec["mu3"] = recipe.mu3;
    rec["k"] = recipe.k;
    rec["alpha"] = recipe.alpha;
    if (std::isfinite(recipe.theta_lambda))
        rec["theta_lambda"] = recipe.theta_lambda;
    else
        rec["theta_lambda"] = nullptr;
    rec["norm_equality_feasible"] = recipe.norm_equality_feasible;
    j["recipe"] = std::move(rec);
    j["profile"] = profile_object(profile);
    os << j.dump(2) << '\n';
}

void cmd_verify(const RunConfig& cfg, std::ostream& os) {
    Exponents ex(cfg.p, cfg.q);
    ConstraintTriple c{cfg.f, cfg.A, cfg.F};
    SharpnessReport rep = verify_sharpness(ex, c, cfg.lambda, cfg.N, cfg.m);
    if (cfg.format == "json") {
        ordered_json j = bound_object(rep.bound);
        j["simulated"] = rep.simulated_measure;
        j["gap"] = rep.gap;
        j["level"] = rep.grid_level;
        os << j.dump() << '\n';
        return;
    }
    os << kVerifyHeader << '\n'
       << bound_row(rep.bound) << ',' << fmt17(rep.simulated_measure) << ','
       << fmt17(rep.gap) << ',' << rep.grid_level << '\n';
}

void cmd_oracle(const RunConfig& cfg, std::ostream& os) {
    Exponents ex(cfg.p, cfg.q);
    ConstraintTriple c{cfg.f, cfg.A, cfg.F};
    Normalized nrm = normalize(ex, c);
    BoundReport formula = t_scaled(ex, c, cfg.lambda);
    OracleResult res =
        oracle_search(nrm.triple.f, nrm.triple.A, cfg.lambda / cfg.F, ex,
                      cfg.n, cfg.steps, cfg.restarts, cfg.seed);
    const double gap = formula.T_value - res.best_measure;
    if (cfg.format == "json") {
        ordered_json j;
        j["best_measure"] = res.best_measure;
        j["formula_T"] = formula.T_value;
        j["gap"] = gap;
        os << j.dump() << '\n';
        return;
    }
    os << "best_measure,formula_T,gap\n"
       << fmt17(res.best_measure) << ',' << fmt17(formula.T_value) << ','
       << fmt17(gap) << '\n';
}

void dispatch(const RunConfig& cfg, std::ostream& os) {
    switch (cfg.command) {
        case Command::gamma: cmd_gamma(cfg, os); return;
        case Command::check: cmd_check(cfg, os); return;
        case Command::bound: cmd_bound(cfg, os); return;
        case Command::sweep: cmd_sweep(cfg, os); return;
        case Command::extremal: cmd_extremal(cfg, os); return;
        case Command::verify: cmd_verify(cfg, os); return;
        case Command::oracle: cmd_oracle(cfg, os); return;
    }
}

}  // namespace

std::optional<std::string> parse_args(const std::vector<std::string>& args,
                                      RunConfig& cfg) {
    static const std::map<std::string, Command> commands = {
        {"gamma", Command::gamma},     {"check", Command::check},
        {"bound", Command::bound},     {"sweep", Command::sweep},
        {"extremal", Command::extremal}, {"verify", Command::verify},
        {"oracle", Command::oracle}};

    if (args.empty())
        return "missing command (expected gamma|check|bound|sweep|extremal|"
               "verify|oracle)";
    auto it = commands.find(args[0]);
    if (it == commands.end())
        return "unknown command '" + args[0] +
               "' (expected gamma|check|bound|sweep|extremal|verify|oracle)";
    cfg.command = it->second;

    bool saw_f = false;
    bool saw_A = false;
    bool saw_lambda = false;
    for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& tok = args[i];
        const std::size_t eq = tok.find('=');
        if (eq == std::string::npos)
            return "expected key=value token, got '" + tok + "'";
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        bool ok = true;
        if (key == "p") ok = parse_double(val, cfg.p);
        else if (key == "q") ok = parse_double(val, cfg.q);
        else if (key == "f") { ok = parse_double(val, cfg.f); saw_f = ok; }
        else if (key == "A") { ok = parse_double(val, cfg.A); saw_A = ok; }
        else if (key == "F") ok = parse_double(val, cfg.F);
        else if (key == "lambda") {
            const std::size_t c1 = val.find(':');
            if (c1 == std::string::npos) {
                ok = parse_double(val, cfg.lambda);
                cfg.lam_count = 0;
            } else {
                const std::size_t c2 = val.find(':', c1 + 1);
                if (c2 == std::string::npos)
                    return "lambda range must be start:stop:count, got '" +
                           val + "'";
                ok = parse_double(val.substr(0, c1), cfg.lam_start) &&
                     parse_double(val.substr(c1 + 1, c2 - c1 - 1),
                                  cfg.lam_stop) &&
                     parse_int(val.substr(c2 + 1), cfg.lam_count);
                if (ok && cfg.lam_count < 1)
                    return "lambda range count must be >= 1";
            }
            saw_lambda = ok;
        }
        else if (key == "N") ok = parse_int(val, cfg.N);
        else if (key == "m") ok = parse_int(val, cfg.m);
        else if (key == "n") ok = parse_int(val, cfg.n);
        else if (key == "steps") ok = parse_int(val, cfg.steps);
        else if (key == "restarts") ok = parse_int(val, cfg.restarts);
        else if (key == "seed") ok = parse_seed(val, cfg.seed);
        else if (key == "out") cfg.out = val;
        else if (key == "format") {
            if (val != "csv" && val != "json")
                return "format must be csv or json, got '" + val + "'";
            cfg.format = val;
        }
        else return "unknown key '" + key + "'";
        if (!ok) return "cannot parse value in '" + tok + "'";
    }

    const bool needs_triple = cfg.command != Command::gamma;
    if (needs_triple) {
        if (!saw_f) return "missing f=<value>";
        if (!saw_A) return "missing A=<value>";
    }
    const bool needs_single_lambda =
        cfg.command == Command::bound || cfg.command == Command::extremal ||
        cfg.command == Command::verify || cfg.command == Command::oracle;
    if (needs_single_lambda) {
        if (!saw_lambda) return "missing lambda=<value>";
        if (cfg.lam_count > 0)
            return "this command expects a single lambda, not a range";
    }
    if (cfg.command == Command::sweep) {
        if (!saw_lambda || cfg.lam_count < 1)
            return "sweep expects lambda=start:stop:count";
    }
    return std::nullopt;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::ofstream file;
    std::ostream* os = &out;
    if (!cfg.out.empty()) {
        file.open(cfg.out, std::ios::out | std::ios::trunc);
        if (!file) {
            err << "error: cannot open output file '" << cfg.out << "'\n";
            return 1;
        }
        os = &file;
    }
    try {
        dispatch(cfg, *os);
        os->flush();
        return 0;
    } catch (const bracketing_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const infeasible_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace weakmax::cli
