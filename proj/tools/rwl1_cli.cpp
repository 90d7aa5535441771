// rwl1: command-line front end for single solves, sparsity sweeps, parameter
// studies and SVG rendering of sweep CSVs.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rwl1/rwl1.hpp"

using namespace rwl1;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;

struct ProblemFlags {
    std::string dist = "normal";
    std::optional<double> mu, sigma, lambda, mean, shape, scale, upper;
    std::optional<int> alpha, beta;
    std::size_t m = 50;
    std::size_t n = 200;
    std::uint64_t seed = 42;
};

struct SchemeFlags {
    std::string schemes = "l1,cwb,w1,w2";
    double p = kDefaultExponent;
    double q = kDefaultExponent;
    std::string clamp = "abs";
    double clamp_floor = 1e-6;
    std::string eps_rule = "halving";
    std::optional<double> eps0;
    double cwb_floor = 0.001;
    std::size_t max_iter = 10;
};

struct RunFlags {
    std::string k;
    std::size_t trials = 20;
    std::size_t workers = 1;
    std::string out;
    bool timing = false;
    double success_tol = 1e-4;
};

void add_problem_flags(CLI::App* app, ProblemFlags& f) {
    app->add_option("--dist", f.dist, "normal|poisson|exponential|f|gamma|uniform")->capture_default_str();
    app->add_option("--mu", f.mu, "normal mean");
    app->add_option("--sigma", f.sigma, "normal standard deviation");
    app->add_option("--lambda", f.lambda, "poisson rate");
    app->add_option("--mean", f.mean, "exponential mean");
    app->add_option("--alpha", f.alpha, "f numerator degrees of freedom");
    app->add_option("--beta", f.beta, "f denominator degrees of freedom");
    app->add_option("--shape", f.shape, "gamma shape");
    app->add_option("--scale", f.scale, "gamma scale");
    app->add_option("--upper", f.upper, "uniform upper bound");
    app->add_option("--m", f.m, "rows")->capture_default_str();
    app->add_option("--n", f.n, "columns")->capture_default_str();
    app->add_option("--seed", f.seed, "seed")->capture_default_str();
}

void add_config_flags(CLI::App* app, SchemeFlags& f) {
    app->add_option("--clamp", f.clamp, "abs|floor|none")->capture_default_str();
    app->add_option("--clamp-floor", f.clamp_floor, "weight floor for --clamp floor")->capture_default_str();
    app->add_option("--eps-rule", f.eps_rule, "fixed|halving|cwb")->capture_default_str();
    app->add_option("--eps0", f.eps0, "initial (or fixed) epsilon");
    app->add_option("--cwb-floor", f.cwb_floor, "lower bound of the cwb epsilon rule")->capture_default_str();
    app->add_option("--max-iter", f.max_iter, "reweighting passes")->capture_default_str();
}

void add_run_flags(CLI::App* app, RunFlags& f, const std::string& k_default) {
    f.k = k_default;
    app->add_option("--k", f.k, "sparsity levels: list (2,4,6) or range (1:26)")->capture_default_str();
    app->add_option("--trials", f.trials, "trials per cell")->capture_default_str();
    app->add_option("--workers", f.workers, "worker threads")->capture_default_str();
    app->add_option("--out", f.out, "output CSV")->required();
    app->add_flag("--timing", f.timing, "fill the wall_ms column");
    app->add_option("--success-tol", f.success_tol, "recovery tolerance")->capture_default_str();
}

DistributionSpec build_distribution(const ProblemFlags& f) {
    DistributionSpec d = default_distribution(f.dist);
    std::vector<std::string> stray;
    auto take = [&](const auto& opt, auto& field, bool applies, const char* name) {
        if (!opt) return;
        if (applies) field = *opt;
        else stray.push_back(name);
    };
    double dummy = 0.0;
    int idummy = 0;
    auto* nrm = std::get_if<dist::Normal>(&d);
    auto* poi = std::get_if<dist::Poisson>(&d);
    auto* exp = std::get_if<dist::Exponential>(&d);
    auto* fd = std::get_if<dist::FDist>(&d);
    auto* gam = std::get_if<dist::Gamma>(&d);
    auto* uni = std::get_if<dist::Uniform>(&d);
    take(f.mu, nrm ? nrm->mu : dummy, nrm != nullptr, "--mu");
    take(f.sigma, nrm ? nrm->sigma : dummy, nrm != nullptr, "--sigma");
    take(f.lambda, poi ? poi->lambda : dummy, poi != nullptr, "--lambda");
    take(f.mean, exp ? exp->mean : dummy, exp != nullptr, "--mean");
    take(f.alpha, fd ? fd->alpha : idummy, fd != nullptr, "--alpha");
    take(f.beta, fd ? fd->beta : idummy, fd != nullptr, "--beta");
    take(f.shape, gam ? gam->shape : dummy, gam != nullptr, "--shape");
    take(f.scale, gam ? gam->scale : dummy, gam != nullptr, "--scale");
    take(f.upper, uni ? uni->upper : dummy, uni != nullptr, "--upper");
    if (!stray.empty()) throw InputError(stray.front() + " does not apply to --dist " + f.dist);
    validate(d);
    return d;
}

SolverConfig build_config(const SchemeFlags& f) {
    SolverConfig cfg;
    switch (parse_epsilon_rule(f.eps_rule)) {
    case EpsilonRule::Fixed: cfg.schedule = EpsilonSchedule::fixed(f.eps0.value_or(0.01)); break;
    case EpsilonRule::Halving: cfg.schedule = EpsilonSchedule::halving(f.eps0.value_or(1.0)); break;
    case EpsilonRule::CWBRule: cfg.schedule = EpsilonSchedule::cwb(f.eps0.value_or(1.0), f.cwb_floor); break;
    }
    if (f.clamp == "abs") cfg.clamp = WeightClampMode::absolute_value();
    else if (f.clamp == "floor") cfg.clamp = WeightClampMode::floor_at(f.clamp_floor);
    else if (f.clamp == "none") cfg.clamp = WeightClampMode::none();
    else throw InputError("unknown --clamp '" + f.clamp + "' (expected abs, floor, none)");
    cfg.max_iter = f.max_iter;
    cfg.validate();
    return cfg;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

double parse_real(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InputError(std::string(what) + ": '" + s + "' is not a number");
    }
}

std::size_t parse_count(const std::string& s, const char* what) {
    const double v = parse_real(s, what);
    if (v < 0 || v != std::floor(v)) throw InputError(std::string(what) + ": '" + s + "' is not a count");
    return static_cast<std::size_t>(v);
}

/// "2,4,6", "1:26" (step 1) or "5:5:20".
std::vector<std::size_t> parse_k_list(const std::string& text) {
    std::vector<std::size_t> ks;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        std::string part;
        while (std::getline(ss, part, ':')) parts.push_back(part);
        if (parts.size() != 2 && parts.size() != 3) throw InputError("--k: bad range '" + text + "'");
        const std::size_t lo = parse_count(parts[0], "--k");
        const std::size_t step = parts.size() == 3 ? parse_count(parts[1], "--k") : 1;
        const std::size_t hi = parse_count(parts.back(), "--k");
        if (step == 0 || hi < lo) throw InputError("--k: bad range '" + text + "'");
        for (std::size_t k = lo; k <= hi; k += step) ks.push_back(k);
    } else {
        for (const auto& item : split_list(text)) ks.push_back(parse_count(item, "--k"));
    }
    if (ks.empty()) throw InputError("--k: no values");
    return ks;
}

/// "0.1,0.2" or start:step:end.
std::vector<double> parse_real_grid(const std::string& text, const char* what) {
    std::vector<double> vals;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        std::string part;
        while (std::getline(ss, part, ':')) parts.push_back(part);
        if (parts.size() != 3) throw InputError(std::string(what) + ": expected start:step:end");
        const double lo = parse_real(parts[0], what);
        const double step = parse_real(parts[1], what);
        const double hi = parse_real(parts[2], what);
        if (!(step > 0.0) || hi < lo) throw InputError(std::string(what) + ": bad grid '" + text + "'");
        for (std::size_t i = 0;; ++i) {
            // round away accumulated binary error so 0.04 + 3*0.08 prints as 0.28
            const double v = std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12;
            if (v > hi + 1e-12) break;
            vals.push_back(v);
        }
    } else {
        for (const auto& item : split_list(text)) vals.push_back(parse_real(item, what));
    }
    if (vals.empty()) throw InputError(std::string(what) + ": no values");
    return vals;
}

std::vector<SchemeRun> build_scheme_runs(const SchemeFlags& f) {
    const SolverConfig cfg = build_config(f);
    std::vector<SchemeRun> runs;
    for (const auto& name : split_list(f.schemes)) {
        runs.push_back({WeightScheme::make(parse_scheme_tag(name), f.p, f.q), cfg});
    }
    if (runs.empty()) throw InputError("--schemes: no schemes");
    return runs;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    return out;
}

int run_and_write(const SweepSpec& spec, const RunFlags& run, const std::string& label) {
    auto out = open_output(run.out);
    const SweepResult res = sweep(spec, run.workers);
    write_sweep_csv(out, res, run.timing);
    out.flush();
    if (!out) throw InputError("failed writing '" + run.out + "'");

    // One line per run configuration: mean success rate over k and the
    // largest k at which every trial succeeded.
    std::vector<std::string> keys;
    std::map<std::string, std::size_t> cells, last_perfect;
    std::map<std::string, double> rate_sum;
    std::size_t failures = 0;
    for (const auto& c : res.cells) {
        std::string key = c.scheme;
        if (!c.p.empty()) key += " p=" + c.p;
        if (!c.q.empty()) key += " q=" + c.q;
        key += " " + c.eps_rule;
        if (!cells.count(key)) keys.push_back(key);
        ++cells[key];
        rate_sum[key] += c.success_rate;
        if (c.successes == c.trials) last_perfect[key] = std::max(last_perfect[key], c.k);
        failures += c.failures.size();
    }
    std::printf("%s: %zu cells, %zu trials each -> %s\n", label.c_str(), res.cells.size(), spec.trials,
                run.out.c_str());
    std::printf("%-36s %10s %12s\n", "run", "mean_rate", "max_k@100%");
    for (const auto& key : keys) {
        std::printf("%-36s %10.3f %12zu\n", key.c_str(), rate_sum[key] / static_cast<double>(cells[key]),
                    last_perfect[key]);
    }
    if (failures > 0) std::printf("%zu trial(s) ended in a solver error\n", failures);
    return 0;
}

SweepSpec base_spec(const ProblemFlags& pf, const RunFlags& rf) {
    SweepSpec spec;
    spec.dist = build_distribution(pf);
    spec.m = pf.m;
    spec.n = pf.n;
    spec.seed_base = pf.seed;
    spec.trials = rf.trials;
    spec.success_tol = rf.success_tol;
    spec.k_values = parse_k_list(rf.k);
    return spec;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Iteratively reweighted l1 sparse recovery"};
    app.require_subcommand(1);

    ProblemFlags pf;
    SchemeFlags sf;
    RunFlags rf;

    // solve
    auto* solve = app.add_subcommand("solve", "recover one sparse vector");
    std::string instance_path, save_path, scheme_name = "w1";
    std::size_t solve_k = 5;
    double solve_tol = 1e-4;
    bool print_x = false;
    solve->add_option("--instance", instance_path, "instance JSON to load");
    solve->add_option("--save-instance", save_path, "write the generated instance as JSON");
    solve->add_option("--scheme", scheme_name, "l1|cwb|zl|w1|w2")->capture_default_str();
    solve->add_option("--p", sf.p, "exponent p")->capture_default_str();
    solve->add_option("--q", sf.q, "exponent q")->capture_default_str();
    solve->add_option("--k", solve_k, "planted sparsity")->capture_default_str();
    solve->add_option("--success-tol", solve_tol, "recovery tolerance")->capture_default_str();
    solve->add_flag("--print-x", print_x, "print the recovered vector");
    add_problem_flags(solve, pf);
    add_config_flags(solve, sf);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "success rate over a sparsity range");
    add_problem_flags(sweep_cmd, pf);
    add_config_flags(sweep_cmd, sf);
    add_run_flags(sweep_cmd, rf, "1:26");
    sweep_cmd->add_option("--schemes", sf.schemes, "comma-separated schemes")->capture_default_str();
    sweep_cmd->add_option("--p", sf.p, "exponent p")->capture_default_str();
    sweep_cmd->add_option("--q", sf.q, "exponent q")->capture_default_str();

    // study-eps
    auto* study_eps = app.add_subcommand("study-eps", "W1 success rate over fixed epsilon values");
    std::string eps_list = "1e-5,1e-4,1e-3,1e-2,1e-1";
    add_problem_flags(study_eps, pf);
    add_run_flags(study_eps, rf, "15");
    study_eps->add_option("--eps", eps_list, "epsilon list or start:step:end")->capture_default_str();
    study_eps->add_option("--p", sf.p, "exponent p")->capture_default_str();
    study_eps->add_option("--clamp", sf.clamp, "abs|floor|none")->capture_default_str();
    study_eps->add_option("--max-iter", sf.max_iter, "reweighting passes")->capture_default_str();

    // study-p
    auto* study_p = app.add_subcommand("study-p", "success rate over a grid of p");
    std::string p_grid = "0.04:0.08:0.99";
    std::string study_scheme = "w1";
    add_problem_flags(study_p, pf);
    add_config_flags(study_p, sf);
    add_run_flags(study_p, rf, "5,10,15,20");
    study_p->add_option("--p-grid", p_grid, "p values or start:step:end")->capture_default_str();
    study_p->add_option("--scheme", study_scheme, "zl|w1|w2")->capture_default_str();
    study_p->add_option("--q", sf.q, "exponent q for w2")->capture_default_str();

    // study-pq
    auto* study_pq = app.add_subcommand("study-pq", "W2 success rate over a grid of q at fixed p");
    std::string q_grid = "0.04:0.08:0.99";
    double pq_p = 0.08;
    add_problem_flags(study_pq, pf);
    add_config_flags(study_pq, sf);
    add_run_flags(study_pq, rf, "5,10,15,20");
    study_pq->add_option("--p", pq_p, "fixed exponent p")->capture_default_str();
    study_pq->add_option("--q-grid", q_grid, "q values or start:step:end")->capture_default_str();

    // plot
    auto* plot = app.add_subcommand("plot", "render a sweep CSV as SVG");
    std::string csv_in, svg_out, x_axis = "k", title;
    plot->add_option("csv", csv_in, "input CSV")->required();
    plot->add_option("--out", svg_out, "output SVG")->required();
    plot->add_option("--x", x_axis, "k|eps|p|q")->capture_default_str();
    plot->add_option("--title", title, "chart title");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*solve) {
            const auto scheme = WeightScheme::make(parse_scheme_tag(scheme_name), sf.p, sf.q);
            const SolverConfig cfg = build_config(sf);
            ProblemInstance inst;
            if (!instance_path.empty()) {
                try {
                    inst = load_instance(instance_path);
                } catch (const ParseError& e) {
                    std::cerr << "error: " << e.what() << '\n';
                    return kExitUsage;
                }
            } else {
                inst = make_instance(build_distribution(pf), pf.m, pf.n, solve_k, pf.seed);
            }
            if (!save_path.empty()) save_instance(inst, save_path);

            ReweightedResult res;
            try {
                res = reweighted_l1(inst.a, inst.b, scheme, cfg);
            } catch (const SolverError& e) {
                std::cerr << "solver error (" << to_string(e.kind()) << "): " << e.what() << '\n';
                return kExitSolver;
            }
            std::printf("instance: %zux%zu k=%zu dist=%s\n", inst.m(), inst.n(), inst.k,
                        distribution_name(inst.dist).c_str());
            std::printf("scheme: %s\n", to_string(scheme.tag()));
            std::printf("support:");
            for (std::size_t i = 0; i < res.x_hat.size(); ++i) {
                if (std::abs(res.x_hat[i]) > kSupportTol) std::printf(" %zu", i);
            }
            std::printf("\n");
            std::printf("nnz: %zu\n", count_nonzeros(res.x_hat, kSupportTol));
            std::printf("residual_inf: %.3e\n", residual_inf(inst.a, res.x_hat, inst.b));
            std::printf("iterations: %zu\n", res.iterations_used);
            std::printf("pivots: %zu\n", res.total_pivots);
            std::printf("success: %s\n", is_success(res.x_hat, inst.x_true, solve_tol) ? "true" : "false");
            if (print_x) {
                std::printf("x:");
                for (double v : res.x_hat) std::printf(" %s", format_real(v).c_str());
                std::printf("\n");
            }
            return 0;
        }

        if (*sweep_cmd) {
            SweepSpec spec = base_spec(pf, rf);
            spec.schemes = build_scheme_runs(sf);
            spec.validate();
            return run_and_write(spec, rf, "sweep");
        }

        if (*study_eps) {
            SweepSpec spec = base_spec(pf, rf);
            const auto scheme = WeightScheme::w1(sf.p);
            for (double eps : parse_real_grid(eps_list, "--eps")) {
                if (!(eps > 0.0)) throw InputError("--eps: epsilon must be positive, got " + format_real(eps));
                SchemeFlags f = sf;
                f.eps_rule = "fixed";
                f.eps0 = eps;
                spec.schemes.push_back({scheme, build_config(f)});
            }
            spec.validate();
            return run_and_write(spec, rf, "study-eps");
        }

        if (*study_p) {
            SweepSpec spec = base_spec(pf, rf);
            const SolverConfig cfg = build_config(sf);
            const SchemeTag tag = parse_scheme_tag(study_scheme);
            for (double p : parse_real_grid(p_grid, "--p-grid")) {
                spec.schemes.push_back({WeightScheme::make(tag, p, sf.q), cfg});
            }
            spec.validate();
            return run_and_write(spec, rf, "study-p");
        }

        if (*study_pq) {
            SweepSpec spec = base_spec(pf, rf);
            const SolverConfig cfg = build_config(sf);
            for (double q : parse_real_grid(q_grid, "--q-grid")) {
                spec.schemes.push_back({WeightScheme::w2(pq_p, q), cfg});
            }
            spec.validate();
            return run_and_write(spec, rf, "study-pq");
        }

        if (*plot) {
            const PlotAxis axis = parse_plot_axis(x_axis);
            std::ifstream in(csv_in, std::ios::binary);
            if (!in) throw InputError("cannot read '" + csv_in + "'");
            std::vector<CellRecord> rows;
            try {
                rows = read_sweep_csv(in);
            } catch (const ParseError& e) {
                std::cerr << "error: " << csv_in << ": " << e.what() << '\n';
                return kExitUsage;
            }
            const std::string svg = render_svg(rows, axis, title);
            auto out = open_output(svg_out);
            out << svg;
            out.flush();
            if (!out) throw InputError("failed writing '" + svg_out + "'");
            std::printf("wrote %s (%zu rows)\n", svg_out.c_str(), rows.size());
            return 0;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const SolverError& e) {
        std::cerr << "solver error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return kExitSolver;
    }
    return 0;
}
