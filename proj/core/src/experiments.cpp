#include "corrlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "corrlab/analytic_ratios.hpp"
#include "corrlab/families.hpp"
#include "corrlab/measure_weight.hpp"
#include "corrlab/propagator.hpp"

namespace corrlab {

namespace {

constexpr double kPacketWavenumber = 0.3;

Check make_check(const std::string& name, bool passed, double measured, double threshold, double margin,
                 const std::string& detail = "") {
    return {name, passed, measured, threshold, margin, detail};
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

CorrelatorOptions corr_opts(const ExperimentConfig& cfg) {
    CorrelatorOptions o;
    o.budget = cfg.engine.budget;
    o.threads = cfg.engine.threads;
    return o;
}

void add_warnings(ResultRecord& r, const CorrelatorEstimate& e, const std::string& label) {
    for (const auto& w : e.warnings) {
        if (std::find(r.warnings.begin(), r.warnings.end(), w) != r.warnings.end()) continue;
        std::string s = label + ": " + w;
        if (std::find(r.warnings.begin(), r.warnings.end(), s) == r.warnings.end()) r.warnings.push_back(s);
    }
}

// ---------------------------------------------------------------- ratios

void run_ratios(const ExperimentConfig& cfg, ResultRecord& r) {
    const auto& p = cfg.params;
    std::mt19937_64 rng(cfg.engine.seed);
    std::uniform_int_distribution<std::int64_t> Md(2, 400);
    std::uniform_real_distribution<double> ad(0.01, 2.0), xd(0.01, 0.99);
    double worst_diff = 0, worst_rear = 0;
    int done = 0;
    while (done < p.random_inputs) {
        ratios::RatioInputs in;
        in.M = Md(rng);
        in.a = ad(rng);
        in.B2 = xd(rng) / in.a;
        in.K = cfg.lattice.prob_quantum;
        double lx = ratios::log_contribution_ratio_exact(in);
        if (std::abs(lx) > 600) continue;  // keep values representable
        double ex = ratios::contribution_ratio_exact(in);
        double viad = std::exp(ratios::homogeneous_contribution(in) - ratios::inhomogeneous_contribution(in));
        worst_diff = std::max(worst_diff, std::abs(viad / ex - 1));
        worst_rear = std::max(worst_rear, std::abs(ratios::contribution_ratio_rearranged(in) / ex - 1));
        ++done;
    }
    const double tol = p.identity_tolerance;
    r.checks.push_back(make_check("exact_equals_log_difference", worst_diff <= tol, worst_diff, tol, tol - worst_diff,
                                  std::to_string(done) + " random inputs"));
    r.checks.push_back(make_check("exact_equals_rearranged", worst_rear <= tol, worst_rear, tol, tol - worst_rear,
                                  std::to_string(done) + " random inputs"));

    ratios::RatioInputs big;
    big.M = p.asymptotic_sites;
    big.a = cfg.lattice.spacing;
    big.B2 = p.scan_b2;
    big.K = cfg.lattice.prob_quantum;
    double dev = std::abs(std::exp(ratios::log_contribution_ratio_asymptotic(big) -
                                   ratios::log_contribution_ratio_exact(big)) -
                          1);
    r.checks.push_back(make_check("asymptotic_convergence", dev < 1e-3, dev, 1e-3, 1e-3 - dev,
                                  "M = " + std::to_string(big.M)));
    r.metrics.push_back({"max_rel_error_log_difference", worst_diff, "relative"});
    r.metrics.push_back({"max_rel_error_rearranged", worst_rear, "relative"});
    r.metrics.push_back({"asymptotic_relative_deviation", dev, "relative"});

    Series s{"ratio_vs_sites", {"M", "log_exact", "log_rearranged", "log_asymptotic", "log_reduced"}, {}};
    for (double lm = std::log(2.0); lm <= std::log(1e6) + 1e-9; lm += std::log(10.0) / 8) {
        ratios::RatioInputs in = big;
        in.M = std::max<std::int64_t>(2, std::llround(std::exp(lm)));
        if (!s.rows.empty() && s.rows.back()[0] == double(in.M)) continue;
        s.rows.push_back({double(in.M), ratios::log_contribution_ratio_exact(in),
                          ratios::log_contribution_ratio_rearranged(in),
                          ratios::log_contribution_ratio_asymptotic(in), ratios::log_reduced_form(in)});
    }
    r.series.push_back(s);
}

// ---------------------------------------------------------------- measure dominance

void run_measure(const ExperimentConfig& cfg, ResultRecord& r) {
    const auto& p = cfg.params;
    LatticeSpec l = cfg.lattice;
    l.time_slices = 3;
    auto hom = make_homogeneous(l);
    ratios::RatioInputs in;
    in.M = l.sites;
    in.a = l.spacing;
    in.K = l.prob_quantum;
    Series s{"measure_gap",
             {"B2", "measured_inhomogeneous", "analytic_inhomogeneous", "measured_homogeneous",
              "analytic_homogeneous", "gap", "log_exact_ratio"},
             {}};
    double min_gap = INFINITY, worst_err = 0;
    for (double b2 : p.b2_values) {
        auto inh = make_inhomogeneous(l, b2, 0);
        double mi = measure_log_density(WaveHistory(l, {hom, inh, hom})).value;
        double mh = measure_log_density(WaveHistory(l, {hom, hom, hom})).value;
        in.B2 = b2;
        double ai = ratios::inhomogeneous_contribution(in);
        double ah = ratios::homogeneous_contribution(in);
        worst_err = std::max({worst_err, std::abs(mi - ai), std::abs(mh - ah)});
        min_gap = std::min(min_gap, mi - mh);
        s.rows.push_back({b2, mi, ai, mh, ah, mi - mh, ratios::log_contribution_ratio_exact(in)});
    }
    r.series.push_back(s);
    r.checks.push_back(make_check("inhomogeneous_exceeds_homogeneous", min_gap > 0, min_gap, 0.0, min_gap,
                                  "smallest log-measure gap over the B2 sweep"));
    r.checks.push_back(make_check("matches_analytic", worst_err <= 1e-10, worst_err, 1e-10, 1e-10 - worst_err));

    ratios::RatioInputs sc = in;
    sc.B2 = p.scan_b2;
    double worst = -INFINITY;
    std::int64_t worst_m = 0;
    Series red{"reduced_form", {"M", "log_reduced"}, {}};
    double next_sample = 3;
    for (std::int64_t M = 3; M <= p.scan_max_sites; ++M) {
        sc.M = M;
        double v = ratios::log_reduced_form(sc);
        if (v > worst) {
            worst = v;
            worst_m = M;
        }
        if (M >= next_sample) {
            red.rows.push_back({double(M), v});
            next_sample *= 1.5;
        }
    }
    r.series.push_back(red);
    r.checks.push_back(make_check("reduced_form_below_one", worst < 0, worst, 0.0, -worst,
                                  "largest log reduced form at M = " + std::to_string(worst_m)));
    r.metrics.push_back({"min_log_measure_gap", min_gap, "natural log"});
    r.metrics.push_back({"max_analytic_error", worst_err, "absolute, natural log"});
    r.metrics.push_back({"max_log_reduced_form", worst, "natural log"});
}

// ---------------------------------------------------------------- alpha scaling

void run_alpha(const ExperimentConfig& cfg, ResultRecord& r) {
    const auto& p = cfg.params;
    LatticeSpec l = cfg.lattice;
    LatticeHamiltonian h(cfg.hamiltonian, l);
    Propagator prop(h, l.dt);
    const int steps = l.time_slices - 1;
    auto psi0 = make_gaussian(l, l.spacing * (l.sites - 1) / 2.0, p.packet_width, kPacketWavenumber);
    auto sol = propagate(psi0, prop, steps);
    double b2 = p.nonsolution_ab2 / l.spacing;
    auto inh = make_inhomogeneous(l, b2, 0);
    auto non = sol;
    for (int t = 1; t < steps; ++t) non = non.with_slice(t, inh);

    const double rho = default_radius(l, cfg.engine.radius_factor);
    auto fs = fluctuation_scaling(sol, h, p.alphas, FamilyKind::solution, rho);
    auto fn = fluctuation_scaling(non, h, p.alphas, FamilyKind::non_solution, rho);

    const double M = l.sites;
    double es = std::abs(fs.slope - M) / M;
    double en = std::abs(fn.slope - 2.0) / 2.0;
    r.checks.push_back(make_check("solution_slope", es <= p.slope_tolerance, fs.slope, M, p.slope_tolerance - es,
                                  "expected slope " + fmt(M) + " within " + fmt(100 * p.slope_tolerance) + "%"));
    r.checks.push_back(make_check("nonsolution_slope", en <= p.slope_tolerance, fn.slope, 2.0,
                                  p.slope_tolerance - en,
                                  "expected slope 2 within " + fmt(100 * p.slope_tolerance) + "%"));

    ratios::RatioInputs in;
    in.M = l.sites;
    in.a = l.spacing;
    in.B2 = b2;
    in.alpha = l.alpha;
    in.K = l.prob_quantum;
    double thr = ratios::alpha_threshold(in).threshold;
    Series s{"alpha_scaling",
             {"alpha", "log_fluct_solution", "log_fluct_nonsolution", "log_contribution_solution",
              "log_contribution_nonsolution"},
             {}};
    double min_gap = INFINITY;
    int below = 0;
    for (size_t i = 0; i < p.alphas.size(); ++i) {
        double cs = fs.center_log_measure + fs.log_magnitudes[i];
        double cn = fn.center_log_measure + fn.log_magnitudes[i];
        s.rows.push_back({p.alphas[i], fs.log_magnitudes[i], fn.log_magnitudes[i], cs, cn});
        if (p.alphas[i] < thr) {
            ++below;
            min_gap = std::min(min_gap, cs - cn);
        }
    }
    r.series.push_back(s);
    bool dom = below > 0 && min_gap > 0;
    r.checks.push_back(make_check("solution_dominates_below_threshold", dom, min_gap, 0.0, below ? min_gap : -INFINITY,
                                  std::to_string(below) + " alphas below threshold " + fmt(thr)));
    r.metrics.push_back({"solution_slope", fs.slope, "d log|I| / d log alpha"});
    r.metrics.push_back({"nonsolution_slope", fn.slope, "d log|I| / d log alpha"});
    r.metrics.push_back({"alpha_threshold", thr, "dimensionless"});
    r.metrics.push_back({"solution_center_residual", fs.center_residual, "lattice norm"});
    r.metrics.push_back({"nonsolution_center_residual", fn.center_residual, "lattice norm"});
    r.metrics.push_back({"radius", rho, "amplitude units"});
}

// ---------------------------------------------------------------- collapse timing

struct HorizonResult {
    double log_sch;
    double log_col;
};

HorizonResult rank_horizon(const LatticeHamiltonian& h, const Propagator& prop, const DiscreteWaveFunction& psi1,
                           const DiscreteWaveFunction& target, int collapse_slice, int steps, double alpha,
                           double rho) {
    auto sch = schrodinger_family(psi1, prop, steps);
    auto col = collapse_family(psi1, target, collapse_slice, prop, steps);
    BoundaryPair pair{psi1, sch.center[steps], 0, steps};
    auto rank = compare_history_families({sch, col}, pair, prop, alpha, rho);
    (void)h;
    return {rank.contributions[0].log_contribution, rank.contributions[1].log_contribution};
}

void run_collapse(const ExperimentConfig& cfg, ResultRecord& r) {
    const auto& p = cfg.params;
    LatticeSpec l = cfg.lattice;
    LatticeHamiltonian h(cfg.hamiltonian, l);
    Propagator prop(h, l.dt);
    auto psi1 = make_homogeneous(l);
    auto target = eigenstate(h, 0);
    const double rho = default_radius(l, cfg.engine.radius_factor);
    const double need = std::log(p.separation_factor);

    auto sh = rank_horizon(h, prop, psi1, target, p.collapse_slice, p.short_steps, l.alpha, rho);
    auto lo = rank_horizon(h, prop, psi1, target, p.collapse_slice, p.long_steps, l.alpha, rho);
    double gs = sh.log_sch - sh.log_col, gl = lo.log_col - lo.log_sch;
    r.checks.push_back(make_check("short_horizon_schrodinger_first", gs >= need, gs, need, gs - need,
                                  "log(schrodinger) - log(collapse) at " + std::to_string(p.short_steps) + " steps"));
    r.checks.push_back(make_check("long_horizon_collapse_first", gl >= need, gl, need, gl - need,
                                  "log(collapse) - log(schrodinger) at " + std::to_string(p.long_steps) + " steps"));

    // same lattice with the pinning removed
    HamiltonianSpec fspec = cfg.hamiltonian;
    fspec.kind = HamiltonianKind::free;
    LatticeHamiltonian hf(fspec, l);
    Propagator pf(hf, l.dt);

    auto ev_pin = admits_local_solutions(h, l.dt, p.long_steps, l.locality_threshold);
    auto ev_free = admits_local_solutions(hf, l.dt, p.long_steps, l.locality_threshold);
    r.metrics.push_back({"pinning_admits_local_solutions", ev_pin.admits ? 1.0 : 0.0, "boolean"});
    r.metrics.push_back({"free_admits_local_solutions", ev_free.admits ? 1.0 : 0.0, "boolean"});
    r.metrics.push_back({"target_locality_score", locality_score(target), "inverse participation ratio"});
    r.metrics.push_back({"short_gap", gs, "natural log, schrodinger minus collapse"});
    r.metrics.push_back({"long_gap", gl, "natural log, collapse minus schrodinger"});
    r.metrics.push_back({"radius", rho, "amplitude units"});

    Series s{"horizon_ranking",
             {"steps", "log_schrodinger_pinning", "log_collapse_pinning", "log_schrodinger_free", "log_collapse_free"},
             {}};
    std::vector<int> horizons{p.short_steps, p.long_steps};
    for (int k = p.short_steps * 2; k < p.long_steps; k *= 2) horizons.push_back(k);
    std::sort(horizons.begin(), horizons.end());
    horizons.erase(std::unique(horizons.begin(), horizons.end()), horizons.end());
    double micro_short = NAN, micro_long = NAN;
    for (int k : horizons) {
        auto a = (k == p.short_steps) ? sh : (k == p.long_steps) ? lo
                                                               : rank_horizon(h, prop, psi1, target, p.collapse_slice, k, l.alpha, rho);
        auto f = rank_horizon(hf, pf, psi1, target, p.collapse_slice, k, l.alpha, rho);
        if (k == p.short_steps) micro_short = f.log_sch - f.log_col;
        if (k == p.long_steps) micro_long = f.log_sch - f.log_col;
        s.rows.push_back({double(k), a.log_sch, a.log_col, f.log_sch, f.log_col});
    }
    r.series.push_back(s);
    r.metrics.push_back({"free_short_gap", micro_short, "natural log, schrodinger minus collapse"});
    r.metrics.push_back({"free_long_gap", micro_long, "natural log, schrodinger minus collapse"});
}

// ---------------------------------------------------------------- time symmetry

void run_symmetry(const ExperimentConfig& cfg, ResultRecord& r) {
    const auto& p = cfg.params;
    LatticeSpec l = cfg.lattice;
    LatticeHamiltonian h(cfg.hamiltonian, l);
    AmplitudeGrid grid{l.prob_quantum, cfg.engine.phase_points};
    // common eigenbasis of H and P when they commute
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h.h() + 0.0123456789 * h.p());
    const CMatrix& V = es.eigenvectors();
    std::mt19937_64 rng(cfg.engine.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int T = p.interior_slices + 1;
    Series s{"pairs", {"pair", "abs_forward", "abs_reverse", "rel_diff", "conj_residual", "negation_residual",
                       "sign_diagnostic"},
             {}};
    double worst = 0, worst_conj = 0, min_neg = INFINITY;
    for (int i = 0; i < p.pairs; ++i) {
        CVector a(l.sites);
        for (int n = 0; n < l.sites; ++n) a[n] = std::polar(0.3 + u(rng), 2 * M_PI * u(rng));
        auto A = DiscreteWaveFunction::normalize(a, l.spacing);
        CVector coeff = V.adjoint() * A.amplitudes();
        for (int k = 0; k < coeff.size(); ++k) coeff[k] *= std::polar(1.0, 2 * M_PI * u(rng));
        auto B = DiscreteWaveFunction::normalize(V * coeff, l.spacing);
        auto fwd = correlator_bruteforce({A, B, 0, T}, h, grid, corr_opts(cfg));
        auto bwd = correlator_bruteforce({B, A, T, 0}, h, grid, corr_opts(cfg));
        add_warnings(r, fwd, "pair " + std::to_string(i));
        double fa = std::abs(fwd.value), ba = std::abs(bwd.value);
        double rel = std::abs(fa / ba - 1);
        double conj = std::abs(bwd.value - std::conj(fwd.value)) / fa;
        double neg = std::abs(bwd.value + fwd.value) / fa;
        worst = std::max(worst, rel);
        worst_conj = std::max(worst_conj, conj);
        min_neg = std::min(min_neg, neg);
        s.rows.push_back({double(i), fa, ba, rel, conj, neg, fwd.sign_diagnostic});
    }
    r.series.push_back(s);
    const double tol = p.symmetry_tolerance;
    r.checks.push_back(make_check("magnitude_symmetry", worst <= tol, worst, tol, tol - worst,
                                  std::to_string(p.pairs) + " random conserved-quantity pairs"));
    r.metrics.push_back({"max_magnitude_rel_diff", worst, "relative"});
    r.metrics.push_back({"max_conjugation_residual", worst_conj, "relative to |C|"});
    r.metrics.push_back({"min_negation_residual", min_neg, "relative to |C|"});
}

// ---------------------------------------------------------------- nonlinearity

void run_nonlinear(const ExperimentConfig& cfg, ResultRecord& r) {
    const auto& p = cfg.params;
    LatticeSpec l = cfg.lattice;
    AmplitudeGrid grid{l.prob_quantum, cfg.engine.phase_points};
    const int T = l.time_slices - 1;
    std::vector<double> alphas{l.alpha};
    for (double a : p.sweep_alphas)
        if (a != l.alpha) alphas.push_back(a);
    Series s{"superposition", {"alpha", "abs_A", "abs_B", "abs_superposition", "ratio_to_min", "sign_diagnostic"}, {}};
    double gate = NAN;
    for (double al : alphas) {
        LatticeSpec la = l;
        la.alpha = al;
        LatticeHamiltonian h(cfg.hamiltonian, la);
        auto [A, B] = localized_pair(h);
        auto S = DiscreteWaveFunction::normalize(A.amplitudes() + B.amplitudes(), l.spacing);
        auto psi1 = make_homogeneous(la);
        auto cA = correlator_bruteforce({psi1, A, 0, T}, h, grid, corr_opts(cfg));
        auto cB = correlator_bruteforce({psi1, B, 0, T}, h, grid, corr_opts(cfg));
        auto cS = correlator_bruteforce({psi1, S, 0, T}, h, grid, corr_opts(cfg));
        if (al == l.alpha) {
            add_warnings(r, cA, "A");
            add_warnings(r, cB, "B");
            add_warnings(r, cS, "superposition");
        }
        double ratio = std::abs(cS.value) / std::min(std::abs(cA.value), std::abs(cB.value));
        if (al == l.alpha) {
            gate = ratio;
            r.metrics.push_back({"locality_A", locality_score(A), "inverse participation ratio"});
            r.metrics.push_back({"locality_superposition", locality_score(S), "inverse participation ratio"});
            r.metrics.push_back({"sign_diagnostic_superposition", cS.sign_diagnostic, "|sum w| / sum |w|"});
        }
        s.rows.push_back({al, std::abs(cA.value), std::abs(cB.value), std::abs(cS.value), ratio, cS.sign_diagnostic});
    }
    r.series.push_back(s);
    const double lim = 1.0 / p.separation_factor;
    r.checks.push_back(make_check("superposition_suppressed", gate <= lim, gate, lim, lim - gate,
                                  "|C(psi1, A+B)| / min(|C(psi1, A)|, |C(psi1, B)|) at alpha " + fmt(l.alpha)));
    r.metrics.push_back({"superposition_ratio", gate, "ratio"});
}

// ---------------------------------------------------------------- born rule

std::vector<double> branch_magnitudes(const BornSetup& b, const ExperimentConfig& cfg, ResultRecord& r,
                                      std::vector<double>* signs) {
    LatticeHamiltonian h(b.hamiltonian, b.lattice);
    AmplitudeGrid grid{b.lattice.prob_quantum, cfg.engine.phase_points};
    const int T = b.lattice.time_slices - 1;
    std::vector<double> out;
    for (size_t k = 0; k < b.branches.size(); ++k) {
        auto c = correlator_bruteforce({b.initial, b.branches[k], 0, T}, h, grid, corr_opts(cfg));
        add_warnings(r, c, "branch " + std::to_string(k));
        out.push_back(std::abs(c.value));
        if (signs) signs->push_back(c.sign_diagnostic);
    }
    return out;
}

void run_born(const ExperimentConfig& cfg, ResultRecord& r) {
    const auto& p = cfg.params;
    auto b = born_rule_setup(p.particle_probs, cfg.hamiltonian.pointer_sites, cfg.hamiltonian.coupling, cfg.lattice);
    if (b.trivial) {
        r.warnings.push_back("single branch: the ratio test is degenerate and was not evaluated");
        r.metrics.push_back({"trivial", 1.0, "boolean"});
        return;
    }
    std::vector<double> signs;
    auto mags = branch_magnitudes(b, cfg, r, &signs);
    Series s{"branches", {"branch", "probability", "abs_correlator", "predicted_ratio", "measured_ratio",
                          "sign_diagnostic"},
             {}};
    double worst = 0;
    for (size_t k = 0; k < mags.size(); ++k) {
        double pred = b.probabilities[k] / b.probabilities[mags.size() - 1];
        double meas = mags[k] / mags[mags.size() - 1];
        if (k + 1 < mags.size()) worst = std::max(worst, std::abs(meas / pred - 1));
        s.rows.push_back({double(k), b.probabilities[k], mags[k], pred, meas, signs[k]});
    }
    r.series.push_back(s);
    const double tol = p.ratio_tolerance;
    double ratio01 = mags[0] / mags[1];
    r.checks.push_back(make_check("branch_ratio", worst <= tol, ratio01, b.probabilities[0] / b.probabilities[1],
                                  tol - worst,
                                  "largest relative deviation of branch ratios from probability ratios: " + fmt(worst)));
    r.metrics.push_back({"branch_ratio", ratio01, "|C_0| / |C_1|"});
    r.metrics.push_back({"predicted_ratio", b.probabilities[0] / b.probabilities[1], "p_0 / p_1"});
    r.metrics.push_back({"max_ratio_deviation", worst, "relative"});

    // equal probabilities: symmetric branches
    std::vector<double> even(p.particle_probs.size(), 1.0 / p.particle_probs.size());
    auto be = born_rule_setup(even, cfg.hamiltonian.pointer_sites, cfg.hamiltonian.coupling, cfg.lattice);
    auto me = branch_magnitudes(be, cfg, r, nullptr);
    r.metrics.push_back({"equal_probability_ratio", me[0] / me[1], "|C_0| / |C_1|"});

    Series sw{"ratio_vs_alpha", {"alpha", "measured_ratio", "sign_diagnostic_0", "sign_diagnostic_1"}, {}};
    for (double al : p.sweep_alphas) {
        BornSetup ba = b;
        ba.lattice.alpha = al;
        ResultRecord scratch;
        std::vector<double> sg;
        auto m = branch_magnitudes(ba, cfg, scratch, &sg);
        sw.rows.push_back({al, m[0] / m[1], sg[0], sg[1]});
    }
    r.series.push_back(sw);
}

}  // namespace

std::pair<DiscreteWaveFunction, DiscreteWaveFunction> localized_pair(const LatticeHamiltonian& h) {
    auto sp = spectrum(h);
    const double a = h.lattice().spacing;
    CVector g0 = sp.states.col(0), g1 = sp.states.col(1);
    // fix signs so the sum piles up on the low-index side
    auto fix = [](CVector v) {
        int k;
        v.cwiseAbs().maxCoeff(&k);
        return CVector(v * (std::abs(v[k]) / v[k]));
    };
    g0 = fix(g0);
    g1 = fix(g1);
    auto A = DiscreteWaveFunction::normalize(g0 + g1, a);
    auto B = DiscreteWaveFunction::normalize(g0 - g1, a);
    auto com = [&](const DiscreteWaveFunction& x) {
        double c = 0;
        for (int n = 0; n < x.size(); ++n) c += n * x.probability(n);
        return c;
    };
    if (com(A) > com(B)) std::swap(A, B);
    return {A, B};
}

BornSetup born_rule_setup(const std::vector<double>& particle_probs, int pointer_sites, double coupling,
                          const LatticeSpec& base) {
    if (particle_probs.empty()) throw ConfigError("need at least one particle probability");
    if (pointer_sites < 1) throw ConfigError("pointer_sites must be positive");
    double sum = 0;
    for (double pr : particle_probs) {
        if (!(pr >= 1.0 / base.prob_quantum))
            throw ConfigError("particle probability " + fmt(pr) + " is below the grid quantum 1/K");
        sum += pr;
    }
    if (std::abs(sum - 1) > 1e-12) throw ConfigError("particle probabilities must sum to 1");
    const int np = static_cast<int>(particle_probs.size());
    BornSetup b;
    b.probabilities = particle_probs;
    b.lattice = base;
    b.lattice.sites = np * pointer_sites;
    b.hamiltonian.kind = HamiltonianKind::composite_detector;
    b.hamiltonian.particle_sites = np;
    b.hamiltonian.pointer_sites = pointer_sites;
    b.hamiltonian.coupling = coupling;
    const double a = base.spacing;
    CVector init(b.lattice.sites);
    for (int rr = 0; rr < np; ++rr)
        for (int q = 0; q < pointer_sites; ++q)
            init[rr * pointer_sites + q] = std::sqrt(particle_probs[rr] / pointer_sites / a);
    b.initial = DiscreteWaveFunction::from_normalized(init, a);
    b.trivial = np == 1;

    LatticeHamiltonian h(b.hamiltonian, b.lattice);
    auto sp = spectrum(h);
    CMatrix low = sp.states.leftCols(np) * std::sqrt(a);  // orthonormal columns
    for (int k = 0; k < np; ++k) {
        CVector d = CVector::Zero(b.lattice.sites);
        d[k * pointer_sites + k % pointer_sites] = 1.0;
        CVector proj = low * (low.adjoint() * d);
        b.branches.push_back(DiscreteWaveFunction::normalize(proj, a));
    }
    return b;
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentOutcome out;
    out.manifest.started_at = utc_timestamp();
    auto& r = out.record;
    r.kind = cfg.kind;
    r.config_hash = config_hash(cfg);
    r.warnings = cfg.lattice.validate();
    switch (cfg.kind) {
        case ExperimentKind::ratios_sweep: run_ratios(cfg, r); break;
        case ExperimentKind::measure_dominance: run_measure(cfg, r); break;
        case ExperimentKind::alpha_scaling: run_alpha(cfg, r); break;
        case ExperimentKind::collapse_timing: run_collapse(cfg, r); break;
        case ExperimentKind::time_symmetry: run_symmetry(cfg, r); break;
        case ExperimentKind::nonlinearity: run_nonlinear(cfg, r); break;
        case ExperimentKind::born_rule: run_born(cfg, r); break;
    }
    out.manifest.finished_at = utc_timestamp();
    out.manifest.config_hash = r.config_hash;
    out.manifest.seed = cfg.engine.seed;
    out.manifest.code_version = code_version();
    for (const auto& c : r.checks) out.manifest.checks[c.name] = c.passed;
    return out;
}

ExperimentOutcome run_and_write(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
    auto out = run_experiment(cfg);
    write_run(dir, cfg, out.record, out.manifest);
    return out;
}

}  // namespace corrlab
