#include "corrlab/correlator.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

namespace corrlab {

namespace {

struct Kahan {
    double s = 0, c = 0;
    void add(double t) {
        double u = s + t;
        if (std::abs(s) >= std::abs(t))
            c += (s - u) + t;
        else
            c += (t - u) + s;
        s = u;
    }
    double value() const { return s + c; }
};

struct Slice {
    CVector c;
    CVector hc;
    double e = 0;  // c^dag H c
};

// everything the enumeration and the sampler share
struct Setup {
    int M = 0;
    int ni = 0;
    int K = 0;
    int P = 0;
    double a = 0;
    double dtr = 0;  // dt / hbar, signed
    double alpha = 0;
    const CMatrix* H = nullptr;
    Slice b1, b2;
    std::vector<std::vector<int>> comps;
    std::vector<double> comp_mu;  // sum 2 ln(K a / n)
    std::vector<Complex> phase;   // e^{2 pi i k / P}
    std::uint64_t nph = 1;
    double log_cell = 0;

    std::uint64_t per_slice() const { return comps.size() * nph; }

    void fill(Slice& s, std::uint64_t j) const {
        std::uint64_t ci = j / nph, pi = j % nph;
        const auto& q = comps[ci];
        s.c.resize(M);
        for (int n = 0; n < M; ++n) {
            s.c[n] = std::sqrt(q[n] / (K * a)) * phase[pi % P];
            pi /= P;
        }
        s.hc.noalias() = (*H) * s.c;
        s.e = s.c.dot(s.hc).real();
    }
    double mu(std::uint64_t j) const { return comp_mu[j / nph]; }

    double pair(const Slice& p, const Slice& q) const {
        double im = (a * p.c.dot(q.c)).imag();
        double cross = p.c.dot(q.hc).real();
        return im - dtr * a * 0.25 * (p.e + q.e + 2 * cross);
    }
};

Slice boundary_slice(const DiscreteWaveFunction& psi, const CMatrix& H) {
    Slice s;
    s.c = psi.amplitudes();
    s.hc = H * s.c;
    s.e = s.c.dot(s.hc).real();
    return s;
}

Setup make_setup(const BoundaryPair& pair, const LatticeHamiltonian& h, const AmplitudeGrid& grid,
                 std::vector<std::string>& warnings, double tol) {
    const auto& l = h.lattice();
    if (pair.psi1.size() != h.dim() || pair.psi2.size() != h.dim())
        throw DimensionMismatch("boundary states do not match the hamiltonian");
    if (pair.t1 == pair.t2) throw ConfigError("boundary times must differ");
    grid.validate(h.dim());
    for (const auto& w : l.validate()) warnings.push_back(w);
    auto bc = validate_boundary_pair(pair, h, tol);
    if (!bc.pass) {
        std::ostringstream os;
        os << "boundary pair violates the conservation constraints (dE = " << bc.energy_residual
           << ", dP = " << bc.momentum_residual << ")";
        warnings.push_back(os.str());
    }
    Setup s;
    s.M = h.dim();
    s.ni = std::abs(pair.t2 - pair.t1) - 1;
    s.K = grid.K;
    s.P = grid.phase_points;
    s.a = l.spacing;
    s.dtr = (pair.t2 > pair.t1 ? 1.0 : -1.0) * l.dt / l.hbar;
    s.alpha = l.alpha;
    s.H = &h.h();
    s.b1 = boundary_slice(pair.psi1, h.h());
    s.b2 = boundary_slice(pair.psi2, h.h());
    s.comps = compositions(grid.K, s.M);
    for (const auto& q : s.comps) {
        double m = 0;
        for (int n : q) m += 2.0 * std::log(double(grid.K) * s.a / n);
        s.comp_mu.push_back(m);
    }
    for (int k = 0; k < s.P; ++k) s.phase.push_back(std::polar(1.0, 2 * M_PI * k / s.P));
    for (int n = 0; n < s.M; ++n) s.nph *= s.P;
    // d^2 psi = (1/2) d|psi|^2 dtheta per site, one |psi|^2 removed by the normalization delta
    s.log_cell = s.M * std::log(M_PI / (grid.K * s.a * s.P)) + std::log(double(grid.K));
    return s;
}

int thread_count(int requested) {
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

template <class F>
void run_parallel(int n_tasks, int threads, F&& f) {
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < n_tasks; i = next++) f(i);
    };
    threads = std::min(threads, n_tasks);
    if (threads <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace

double bruteforce_points(const BoundaryPair& pair, int sites, const AmplitudeGrid& grid) {
    int ni = std::abs(pair.t2 - pair.t1) - 1;
    return std::pow(grid.points_per_slice(sites), ni);
}

CorrelatorEstimate correlator_bruteforce(const BoundaryPair& pair, const LatticeHamiltonian& h,
                                         const AmplitudeGrid& grid, const CorrelatorOptions& opt) {
    CorrelatorEstimate est;
    double need = bruteforce_points(pair, h.dim(), grid);
    if (need > opt.budget) throw BudgetExceeded(need, opt.budget);
    Setup s = make_setup(pair, h, grid, est.warnings, opt.boundary_tol);

    if (s.ni == 0) {
        double R = s.pair(s.b1, s.b2);
        est.value = std::polar(1.0, R / s.alpha);
        est.n_points = 1;
        est.sign_diagnostic = 1.0;
        return est;
    }

    const std::uint64_t N = s.per_slice();
    const double mu_max = *std::max_element(s.comp_mu.begin(), s.comp_mu.end());
    const int n_chunks = static_cast<int>(std::min<std::uint64_t>(N, 1024));
    struct Partial {
        Kahan re, im, abs;
    };
    std::vector<Partial> parts(n_chunks);

    run_parallel(n_chunks, thread_count(opt.threads), [&](int chunk) {
        std::uint64_t lo = N * chunk / n_chunks, hi = N * (chunk + 1) / n_chunks;
        std::vector<Slice> sl(s.ni);
        std::vector<std::uint64_t> idx(s.ni, 0);
        Partial& out = parts[chunk];
        for (std::uint64_t j0 = lo; j0 < hi; ++j0) {
            idx[0] = j0;
            s.fill(sl[0], j0);
            for (int k = 1; k < s.ni; ++k) {
                idx[k] = 0;
                s.fill(sl[k], 0);
            }
            while (true) {
                double R = s.pair(s.b1, sl[0]) + s.pair(sl[s.ni - 1], s.b2);
                double mu = -s.ni * mu_max;
                for (int k = 0; k < s.ni; ++k) mu += s.mu(idx[k]);
                for (int k = 0; k + 1 < s.ni; ++k) R += s.pair(sl[k], sl[k + 1]);
                double m = std::exp(mu);
                double ph = R / s.alpha;
                out.re.add(m * std::cos(ph));
                out.im.add(m * std::sin(ph));
                out.abs.add(m);
                int k = s.ni - 1;
                while (k >= 1 && ++idx[k] == N) {
                    idx[k] = 0;
                    s.fill(sl[k], 0);
                    --k;
                }
                if (k < 1) break;
                s.fill(sl[k], idx[k]);
            }
        }
    });

    Kahan re, im, ab;
    for (const auto& p : parts) {
        re.add(p.re.value());
        im.add(p.im.value());
        ab.add(p.abs.value());
    }
    const double scale = std::exp(s.ni * (mu_max + s.log_cell));
    est.value = Complex(re.value(), im.value()) * scale;
    est.n_points = static_cast<std::uint64_t>(need);
    est.sign_diagnostic = std::abs(Complex(re.value(), im.value())) / ab.value();
    est.reliable = est.sign_diagnostic >= 0.01;
    if (!est.reliable) est.warnings.push_back("sign diagnostic below 0.01: estimate unreliable");
    return est;
}

CorrelatorEstimate correlator_metropolis(const BoundaryPair& pair, const LatticeHamiltonian& h,
                                         const AmplitudeGrid& grid, const MetropolisOptions& opt) {
    if (opt.chains < 2) throw ConfigError("metropolis needs at least two chains for an error bar");
    if (opt.steps < 10) throw ConfigError("metropolis needs at least 10 steps");
    CorrelatorEstimate est;
    Setup s = make_setup(pair, h, grid, est.warnings, opt.boundary_tol);
    if (s.ni == 0) {
        est.value = std::polar(1.0, s.pair(s.b1, s.b2) / s.alpha);
        est.n_points = 1;
        return est;
    }

    // exact normalization: the measure does not depend on phases
    const double mu_max = *std::max_element(s.comp_mu.begin(), s.comp_mu.end());
    Kahan zs;
    for (double m : s.comp_mu) zs.add(std::exp(m - mu_max));
    const double log_z_slice = mu_max + std::log(zs.value()) + s.M * std::log(double(s.P)) + s.log_cell;
    const double z = std::exp(s.ni * log_z_slice);

    const long burn = static_cast<long>(opt.burn_in_fraction * opt.steps);
    struct ChainOut {
        Complex mean;
        long accepted = 0;
        long proposed = 0;
    };
    std::vector<ChainOut> outs(opt.chains);

    run_parallel(opt.chains, thread_count(opt.threads), [&](int chain) {
        std::seed_seq seq{static_cast<std::uint32_t>(opt.seed & 0xffffffffu),
                          static_cast<std::uint32_t>(opt.seed >> 32),
                          static_cast<std::uint32_t>(chain)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        std::uniform_int_distribution<int> pick_slice(0, s.ni - 1), pick_site(0, s.M - 1),
            pick_phase(0, s.P - 1);

        std::vector<std::vector<int>> n(s.ni, std::vector<int>(s.M));
        std::vector<std::vector<int>> ph(s.ni, std::vector<int>(s.M));
        std::vector<Slice> sl(s.ni);
        auto rebuild = [&](int k) {
            auto& x = sl[k];
            x.c.resize(s.M);
            for (int m = 0; m < s.M; ++m) x.c[m] = std::sqrt(n[k][m] / (s.K * s.a)) * s.phase[ph[k][m]];
            x.hc.noalias() = (*s.H) * x.c;
            x.e = x.c.dot(x.hc).real();
        };
        for (int k = 0; k < s.ni; ++k) {
            for (int m = 0; m < s.M; ++m) {
                n[k][m] = s.K / s.M + (m < s.K % s.M ? 1 : 0);
                ph[k][m] = pick_phase(rng);
            }
            rebuild(k);
        }
        Kahan re, im;
        long count = 0;
        ChainOut& out = outs[chain];
        for (long step = 0; step < opt.steps; ++step) {
            int k = pick_slice(rng);
            if (u01(rng) < 0.5) {
                int i = pick_site(rng), j = pick_site(rng);
                if (s.M > 1) {
                    while (j == i) j = pick_site(rng);
                }
                ++out.proposed;
                if (i != j && n[k][i] > 1) {
                    double d = 2.0 * (std::log(double(n[k][i])) - std::log(n[k][i] - 1.0) +
                                      std::log(double(n[k][j])) - std::log(n[k][j] + 1.0));
                    if (d >= 0 || u01(rng) < std::exp(d)) {
                        --n[k][i];
                        ++n[k][j];
                        ++out.accepted;
                        rebuild(k);
                    }
                }
            } else {
                int i = pick_site(rng);
                ph[k][i] = (ph[k][i] + (u01(rng) < 0.5 ? 1 : s.P - 1)) % s.P;
                rebuild(k);
            }
            if (step < burn) continue;
            double R = s.pair(s.b1, sl[0]) + s.pair(sl[s.ni - 1], s.b2);
            for (int q = 0; q + 1 < s.ni; ++q) R += s.pair(sl[q], sl[q + 1]);
            re.add(std::cos(R / s.alpha));
            im.add(std::sin(R / s.alpha));
            ++count;
        }
        out.mean = Complex(re.value(), im.value()) / double(count);
    });

    Kahan re, im;
    long acc = 0, prop = 0;
    for (const auto& o : outs) {
        re.add(o.mean.real());
        im.add(o.mean.imag());
        acc += o.accepted;
        prop += o.proposed;
    }
    const double C = opt.chains;
    Complex mean(re.value() / C, im.value() / C);
    Kahan var;
    for (const auto& o : outs) var.add(std::norm(o.mean - mean));
    double se = std::sqrt(var.value() / (C - 1) / C);

    est.value = z * mean;
    est.abs_error = z * se;
    est.n_points = static_cast<std::uint64_t>(opt.chains) * static_cast<std::uint64_t>(opt.steps - burn);
    est.sign_diagnostic = std::abs(mean);
    est.reliable = est.sign_diagnostic >= 0.01;
    est.acceptance = prop > 0 ? double(acc) / double(prop) : 0.0;
    if (!est.reliable) est.warnings.push_back("sign diagnostic below 0.01: estimate unreliable");
    if (est.acceptance < 0.01 || est.acceptance > 0.99) {
        std::ostringstream os;
        os << "possible non-ergodic chain: quantum-move acceptance " << est.acceptance;
        est.warnings.push_back(os.str());
    }
    return est;
}

}  // namespace corrlab
