#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "corrlab/corrlab.hpp"

using namespace corrlab;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;

struct Common {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    double budget = 0;
    bool seed_set = false;
    bool budget_set = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig load_config(const Common& c, ExperimentKind fallback) {
    ExperimentConfig cfg = c.config.empty() ? default_config(fallback) : config_from_json(read_file(c.config));
    if (c.seed_set) cfg.engine.seed = c.seed;
    if (c.budget_set) cfg.engine.budget = c.budget;
    cfg.validate();
    return cfg;
}

void add_common(CLI::App* sub, Common& c, bool with_out = true) {
    sub->add_option("--config", c.config, "JSON config file");
    sub->add_option("--seed", c.seed, "RNG seed")->each([&c](const std::string&) { c.seed_set = true; });
    sub->add_option("--budget", c.budget, "maximum brute-force grid points")->each([&c](const std::string&) {
        c.budget_set = true;
    });
    if (with_out) sub->add_option("--out", c.out, "output directory");
}

int cmd_ratios(std::int64_t sites, double spacing, double b2, double alpha, int K, std::int64_t sweep_to) {
    ratios::RatioInputs in{sites, spacing, b2, alpha, K};
    in.validate();
    auto thr = ratios::alpha_threshold(in);
    std::printf("{\n");
    std::printf("  \"sites\": %lld,\n  \"spacing\": %s,\n  \"b2\": %s,\n", (long long)sites,
                format_double(spacing).c_str(), format_double(b2).c_str());
    std::printf("  \"ratio_exact\": %s,\n", format_double(ratios::contribution_ratio_exact(in)).c_str());
    std::printf("  \"ratio_rearranged\": %s,\n", format_double(ratios::contribution_ratio_rearranged(in)).c_str());
    std::printf("  \"ratio_asymptotic\": %s,\n", format_double(ratios::contribution_ratio_asymptotic(in)).c_str());
    std::printf("  \"log_ratio_exact\": %s,\n", format_double(ratios::log_contribution_ratio_exact(in)).c_str());
    std::printf("  \"reduced_form\": %s,\n", format_double(ratios::reduced_form(in)).c_str());
    std::printf("  \"alpha_threshold\": %s,\n", format_double(thr.threshold).c_str());
    std::printf("  \"schrodinger_dominates\": %s\n}\n", thr.schrodinger_dominates ? "true" : "false");
    if (sweep_to > sites) {
        std::printf("M,log_exact,log_asymptotic,log_reduced\n");
        for (double m = sites; m <= sweep_to; m *= 2) {
            in.M = std::llround(m);
            std::printf("%lld,%s,%s,%s\n", (long long)in.M,
                        format_double(ratios::log_contribution_ratio_exact(in)).c_str(),
                        format_double(ratios::log_contribution_ratio_asymptotic(in)).c_str(),
                        format_double(ratios::log_reduced_form(in)).c_str());
        }
    }
    return 0;
}

DiscreteWaveFunction initial_state(const std::string& name, const LatticeSpec& l, const LatticeHamiltonian& h) {
    if (name == "homogeneous") return make_homogeneous(l);
    if (name == "ground") return eigenstate(h, 0);
    if (name == "gaussian") return make_gaussian(l, l.spacing * (l.sites - 1) / 2.0, 1.0, 0.3);
    if (name.rfind("site:", 0) == 0) return make_single_site(l, std::stoi(name.substr(5)));
    throw ConfigError("unknown initial state " + name + " (homogeneous, ground, gaussian, site:<n>)");
}

int cmd_propagate(const Common& c, const std::string& kind, int steps, const std::string& init) {
    auto cfg = load_config(c, experiment_kind_from_string(kind));
    LatticeHamiltonian h(cfg.hamiltonian, cfg.lattice);
    Propagator prop(h, cfg.lattice.dt);
    auto psi = initial_state(init, cfg.lattice, h);
    auto hist = propagate(psi, prop, steps);
    Series s{"propagate", {"step", "time", "norm", "energy"}, {}};
    for (int n = 0; n < cfg.lattice.sites; ++n) {
        s.columns.push_back("re_" + std::to_string(n));
        s.columns.push_back("im_" + std::to_string(n));
    }
    for (int t = 0; t <= steps; ++t) {
        const auto& w = hist[t];
        auto e = expectations(w, h);
        std::vector<double> row{double(t), t * cfg.lattice.dt, w.norm_sq(), e.energy};
        for (int n = 0; n < w.size(); ++n) {
            row.push_back(w.amplitudes()[n].real());
            row.push_back(w.amplitudes()[n].imag());
        }
        s.rows.push_back(row);
    }
    std::string csv = series_csv(s);
    if (c.out.empty()) {
        std::cout << csv;
    } else {
        std::filesystem::create_directories(c.out);
        std::ofstream(std::filesystem::path(c.out) / "series_propagate.csv") << csv;
    }
    return 0;
}

int cmd_correlator(const Common& c, const std::string& kind, const std::string& method, int interior,
                   const std::string& init) {
    auto cfg = load_config(c, experiment_kind_from_string(kind));
    const auto& l = cfg.lattice;
    LatticeHamiltonian h(cfg.hamiltonian, l);
    Propagator prop(h, l.dt);
    auto psi1 = initial_state(init, l, h);
    const int T = interior + 1;
    auto psi2 = propagate(psi1, prop, T)[T];
    BoundaryPair pair{psi1, psi2, 0, T};
    AmplitudeGrid grid{l.prob_quantum, cfg.engine.phase_points};
    CorrelatorEstimate e;
    if (method == "brute") {
        CorrelatorOptions o;
        o.budget = cfg.engine.budget;
        o.threads = cfg.engine.threads;
        e = correlator_bruteforce(pair, h, grid, o);
    } else if (method == "metropolis") {
        MetropolisOptions o;
        o.chains = cfg.engine.chains;
        o.steps = cfg.engine.steps;
        o.seed = cfg.engine.seed;
        o.threads = cfg.engine.threads;
        e = correlator_metropolis(pair, h, grid, o);
    } else {
        throw ConfigError("method must be brute or metropolis");
    }
    std::printf("{\n  \"method\": \"%s\",\n  \"re\": %s,\n  \"im\": %s,\n  \"abs\": %s,\n  \"abs_error\": %s,\n",
                method.c_str(), format_double(e.value.real()).c_str(), format_double(e.value.imag()).c_str(),
                format_double(std::abs(e.value)).c_str(), format_double(e.abs_error).c_str());
    std::printf("  \"points\": %llu,\n  \"sign_diagnostic\": %s,\n  \"reliable\": %s,\n  \"acceptance\": %s\n}\n",
                (unsigned long long)e.n_points, format_double(e.sign_diagnostic).c_str(),
                e.reliable ? "true" : "false", format_double(e.acceptance).c_str());
    for (const auto& w : e.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    return 0;
}

void print_outcome(const ExperimentKind kind, const ExperimentOutcome& o, const std::string& dir) {
    std::printf("%s -> %s\n", to_string(kind).c_str(), dir.c_str());
    for (const auto& ch : o.record.checks)
        std::printf("  %-36s %s  measured %s  threshold %s\n", ch.name.c_str(), ch.passed ? "pass" : "FAIL",
                    format_double(ch.measured).c_str(), format_double(ch.threshold).c_str());
    for (const auto& w : o.record.warnings) std::printf("  warning: %s\n", w.c_str());
}

int cmd_experiment(const Common& c, const std::string& which, bool parallel) {
    std::vector<ExperimentConfig> cfgs;
    if (which == "all") {
        if (!c.config.empty()) throw ConfigError("--config cannot be combined with 'all'");
        for (auto k : all_experiment_kinds()) cfgs.push_back(load_config(c, k));
    } else {
        auto k = experiment_kind_from_string(which);
        auto cfg = load_config(c, k);
        if (cfg.kind != k) throw ConfigError("config kind " + to_string(cfg.kind) + " does not match " + which);
        cfgs.push_back(cfg);
    }
    std::filesystem::path root = c.out.empty() ? std::filesystem::path("runs") : std::filesystem::path(c.out);
    auto dir_for = [&](const ExperimentConfig& cfg) {
        if (which == "all") return root / to_string(cfg.kind);
        if (!c.out.empty()) return root;
        return std::filesystem::path(cfg.output);
    };

    std::vector<ExperimentOutcome> outs(cfgs.size());
    if (parallel && cfgs.size() > 1) {
        std::vector<std::future<ExperimentOutcome>> fs;
        for (auto& cfg : cfgs) {
            cfg.engine.threads = 1;
            fs.push_back(std::async(std::launch::async, [&cfg, d = dir_for(cfg)] { return run_and_write(cfg, d); }));
        }
        for (size_t i = 0; i < fs.size(); ++i) outs[i] = fs[i].get();
    } else {
        for (size_t i = 0; i < cfgs.size(); ++i) outs[i] = run_and_write(cfgs[i], dir_for(cfgs[i]));
    }
    bool ok = true;
    for (size_t i = 0; i < cfgs.size(); ++i) {
        print_outcome(cfgs[i].kind, outs[i], dir_for(cfgs[i]).string());
        ok = ok && outs[i].record.all_passed();
    }
    return ok ? 0 : kExitCheckFailed;
}

int cmd_verify(const std::vector<std::string>& dirs) {
    std::vector<LoadedRecord> recs;
    for (const auto& d : dirs) {
        std::filesystem::path p(d);
        if (std::filesystem::exists(p / "summary.json")) {
            recs.push_back(load_record(p));
            continue;
        }
        if (!std::filesystem::is_directory(p)) throw ConfigError("not a run directory: " + d);
        std::vector<std::filesystem::path> subs;
        for (const auto& e : std::filesystem::directory_iterator(p))
            if (e.is_directory() && std::filesystem::exists(e.path() / "summary.json")) subs.push_back(e.path());
        std::sort(subs.begin(), subs.end());
        for (const auto& s : subs) recs.push_back(load_record(s));
    }
    auto rows = verify_claims(recs);
    std::cout << claim_matrix_text(rows);
    for (const auto& r : rows)
        if (r.status != ClaimStatus::pass) return kExitCheckFailed;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"corrlab: lattice correlator experiments"};
    app.require_subcommand(1);

    Common common;

    auto* rat = app.add_subcommand("ratios", "analytic contribution ratios");
    std::int64_t sites = 5, sweep_to = 0;
    double spacing = 0.25, b2 = 2.0, alpha = 1e-3;
    int K = 16;
    rat->add_option("--sites", sites);
    rat->add_option("--spacing", spacing);
    rat->add_option("--b2", b2);
    rat->add_option("--alpha", alpha);
    rat->add_option("--quantum", K, "probability quantum K");
    rat->add_option("--sweep-to", sweep_to, "also print a doubling sweep up to this M");

    auto* prp = app.add_subcommand("propagate", "Crank-Nicolson evolution dump");
    std::string kind = "collapse_timing", init = "gaussian";
    int steps = 100;
    add_common(prp, common);
    prp->add_option("--kind", kind, "default config to start from");
    prp->add_option("--steps", steps);
    prp->add_option("--init", init, "homogeneous, ground, gaussian or site:<n>");

    auto* cor = app.add_subcommand("correlator", "single correlator; psi2 is psi1 evolved across the window");
    std::string method = "brute";
    int interior = 1;
    std::string ckind = "time_symmetry", cinit = "gaussian";
    add_common(cor, common, false);
    cor->add_option("--kind", ckind, "default config to start from");
    cor->add_option("--method", method, "brute or metropolis");
    cor->add_option("--interior", interior, "interior slices");
    cor->add_option("--init", cinit);

    auto* exp = app.add_subcommand("experiment", "run a claim experiment and persist it");
    std::string which;
    bool parallel = false;
    exp->add_option("kind", which, "experiment kind or 'all'")->required();
    add_common(exp, common);
    exp->add_flag("--parallel", parallel, "run independent experiments concurrently");

    auto* ver = app.add_subcommand("verify", "claim matrix from run directories");
    std::vector<std::string> dirs{"runs"};
    ver->add_option("dirs", dirs, "run directories or a parent of them");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*rat) return cmd_ratios(sites, spacing, b2, alpha, K, sweep_to);
        if (*prp) return cmd_propagate(common, kind, steps, init);
        if (*cor) return cmd_correlator(common, ckind, method, interior, cinit);
        if (*exp) return cmd_experiment(common, which, parallel);
        if (*ver) return cmd_verify(dirs);
    } catch (const BudgetExceeded& e) {
        std::fprintf(stderr, "budget error: %s\n", e.what());
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
    return kExitConfig;
}
