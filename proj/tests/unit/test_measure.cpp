#include <cmath>
#include <random>

#include "doctest.h"

#include "corrlab/analytic_ratios.hpp"
#include "corrlab/measure_weight.hpp"
#include "corrlab/propagator.hpp"

using namespace corrlab;

namespace {

LatticeSpec lat(int M, double a, int T, double dt) {
    LatticeSpec l;
    l.sites = M;
    l.spacing = a;
    l.time_slices = T;
    l.dt = dt;
    return l;
}

DiscreteWaveFunction random_state(const LatticeSpec& l, std::mt19937_64& rng, double floor_shift) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    CVector v(l.sites);
    for (int n = 0; n < l.sites; ++n)
        v[n] = std::polar(floor_shift + u(rng), 2 * M_PI * u(rng));
    return DiscreteWaveFunction::normalize(v, l.spacing);
}

WaveHistory three(const LatticeSpec& l, const DiscreteWaveFunction& mid) {
    auto h = make_homogeneous(l);
    return WaveHistory(l, {h, mid, h});
}

}  // namespace

TEST_CASE("measure examples") {
    auto l = lat(10, 0.1, 3, 0.1);
    CHECK(std::abs(measure_log_density(three(l, make_homogeneous(l))).value) < 1e-13);

    auto l5 = lat(5, 0.25, 3, 0.1);
    l5.prob_quantum = 16;
    double inh = measure_log_density(three(l5, make_inhomogeneous(l5, 2.0, 0))).value;
    CHECK(inh == doctest::Approx(6 * std::log(2.0)).epsilon(1e-13));
    double hom = measure_log_density(three(l5, make_homogeneous(l5))).value;
    CHECK(inh > hom);

    ratios::RatioInputs in;
    in.M = 5;
    in.a = 0.25;
    in.B2 = 2.0;
    CHECK(std::abs(inh - ratios::inhomogeneous_contribution(in)) < 1e-10);
    CHECK(std::abs(hom - ratios::homogeneous_contribution(in)) < 1e-10);
}

TEST_CASE("measure floor violation names the location") {
    auto l = lat(4, 1.0, 3, 0.1);
    l.prob_quantum = 16;
    CVector v(4);
    v << 1.0, 1.0, 1.0, 0.01;
    auto psi = DiscreteWaveFunction::normalize(v, 1.0);
    try {
        measure_log_density(three(l, psi));
        FAIL("expected floor violation");
    } catch (const AmplitudeFloorViolation& e) {
        CHECK(e.slice == 1);
        CHECK(e.site == 3);
    }
}

TEST_CASE("measure depends on moduli only and rewards concentration") {
    auto l = lat(5, 0.5, 3, 0.1);
    l.prob_quantum = 1000;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        auto psi = random_state(l, rng, 0.3);
        CVector rot = psi.amplitudes();
        for (int n = 0; n < l.sites; ++n) rot[n] *= std::polar(1.0, 2 * M_PI * u(rng));
        auto psi_r = DiscreteWaveFunction::from_normalized(rot, l.spacing);
        CHECK(measure_log_density(three(l, psi)).value ==
              doctest::Approx(measure_log_density(three(l, psi_r)).value).epsilon(1e-13));

        // move probability from the largest site to the smallest
        Eigen::VectorXd p = psi.amplitudes().cwiseAbs2();
        int hi, lo;
        p.maxCoeff(&hi);
        p.minCoeff(&lo);
        double moved = 0.3 * (p[hi] - p[lo]) * u(rng);
        CVector more = psi.amplitudes(), less = psi.amplitudes();
        // toward concentration: take from lo, give to hi
        double take = std::min(moved, 0.9 * p[lo]);
        more[lo] *= std::sqrt((p[lo] - take) / p[lo]);
        more[hi] *= std::sqrt((p[hi] + take) / p[hi]);
        less[hi] *= std::sqrt((p[hi] - take) / p[hi]);
        less[lo] *= std::sqrt((p[lo] + take) / p[lo]);
        double base = measure_log_density(three(l, psi)).value;
        double conc = measure_log_density(
                          three(l, DiscreteWaveFunction::from_normalized(more, l.spacing)))
                          .value;
        CHECK(conc >= base - 1e-12);
        (void)less;
    }
}

TEST_CASE("action of a stationary eigenstate") {
    auto l = lat(6, 0.5, 5, 0.1);
    l.alpha = 0.01;
    HamiltonianSpec s;
    s.kind = HamiltonianKind::harmonic;
    LatticeHamiltonian h(s, l);
    auto e = eigenstate(h, 1);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h.h());
    double E = es.eigenvalues()[1];
    WaveHistory hist(l, {e, e, e, e, e});
    double S = action_phase(hist, h).value;
    CHECK(S == doctest::Approx(-E * l.dt * 4 / (l.alpha * l.hbar)).epsilon(1e-12));
}

TEST_CASE("action is invariant under a global phase") {
    auto l = lat(4, 0.5, 4, 0.2);
    HamiltonianSpec s;
    LatticeHamiltonian h(s, l);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
        std::vector<DiscreteWaveFunction> sl, rot;
        for (int t = 0; t < 4; ++t) {
            sl.push_back(random_state(l, rng, 0.1));
            rot.push_back(sl.back().with_global_phase(0.77));
        }
        double a = action_phase(WaveHistory(l, sl), h).value;
        double b = action_phase(WaveHistory(l, rot), h).value;
        CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("propagate histories are stationary points of the action") {
    auto l = lat(5, 0.5, 5, 0.1);
    HamiltonianSpec s;
    s.kind = HamiltonianKind::harmonic;
    LatticeHamiltonian h(s, l);
    Propagator prop(h, l.dt);
    auto hist = propagate(make_gaussian(l, 1.0, 0.6, 0.5), prop, 4);
    auto ex = action_expansion(hist, h);

    std::mt19937_64 rng(21);
    std::normal_distribution<double> g;
    std::vector<CVector> base;
    for (const auto& x : hist.slices()) base.push_back(x.amplitudes());
    double S0 = reduced_action(base, h.h(), l.spacing, l.dt, l.hbar);
    CHECK(std::abs(S0 - ex.value) < 1e-12);
    for (int i = 0; i < 10; ++i) {
        // norm-preserving direction on one interior slice
        int t = 1 + i % 3;
        CVector v(l.sites);
        for (int n = 0; n < l.sites; ++n) v[n] = Complex(g(rng), g(rng));
        CVector c = base[t];
        v -= c * (l.spacing * c.dot(v)).real();  // tangent: Re<c|v> = 0
        double eps = 1e-4;
        auto at = [&](double e) {
            auto sl = base;
            sl[t] = c + e * v;
            sl[t] /= std::sqrt(l.spacing * sl[t].squaredNorm());
            return reduced_action(sl, h.h(), l.spacing, l.dt, l.hbar);
        };
        double deriv = (at(eps) - at(-eps)) / (2 * eps);
        CHECK(std::abs(deriv) < 1e-7);
    }

    // one slice replaced by noise: linear response appears
    auto noisy = hist.with_slice(2, random_state(l, rng, 0.2));
    auto exn = action_expansion(noisy, h);
    CHECK(exn.gradient.norm() > 1e3 * std::max(ex.gradient.norm(), 1e-12));
}

TEST_CASE("expansion is exact for the quadratic action") {
    auto l = lat(3, 1.0, 4, 0.3);
    HamiltonianSpec s;
    s.kind = HamiltonianKind::pinning;
    s.pin_depth = 1.0;
    LatticeHamiltonian h(s, l);
    std::mt19937_64 rng(4);
    std::vector<DiscreteWaveFunction> sl;
    for (int t = 0; t < 4; ++t) sl.push_back(random_state(l, rng, 0.2));
    WaveHistory hist(l, sl);
    auto ex = action_expansion(hist, h);
    CHECK(ex.free_slices == 2);
    CHECK(ex.gradient.size() == 12);
    std::normal_distribution<double> g;
    RVector d(12);
    for (int i = 0; i < 12; ++i) d[i] = g(rng);
    std::vector<CVector> moved;
    for (const auto& x : sl) moved.push_back(x.amplitudes());
    for (int k = 0; k < 2; ++k)
        for (int n = 0; n < 3; ++n) moved[1 + k][n] += Complex(d[k * 3 + n], d[6 + k * 3 + n]);
    double direct = reduced_action(moved, h.h(), l.spacing, l.dt, l.hbar);
    double model = ex.value + ex.gradient.dot(d) + d.dot(ex.quadratic * d);
    CHECK(std::abs(direct - model) < 1e-11);
}

TEST_CASE("closed form fluctuation integral matches quadrature") {
    ActionExpansion ex;
    ex.value = 0;
    ex.free_slices = 1;
    ex.sites = 1;
    ex.gradient = RVector(2);
    ex.gradient << 0.3, -0.2;
    ex.quadratic = RMatrix(2, 2);
    ex.quadratic << 0.8, 0.25, 0.25, -0.4;
    for (double alpha : {2.0, 0.5, 0.2}) {
        double closed = fluctuation_log_magnitude(ex, alpha, 0.7);
        auto q = fluctuation_quadrature(ex, alpha, 0.7, 120, 1e-9);
        CHECK(std::abs(closed - std::log(std::abs(q.value))) < 1e-8);
    }

    // four dimensions
    ActionExpansion e4;
    e4.value = 0;
    e4.free_slices = 1;
    e4.sites = 2;
    e4.gradient = RVector::Zero(4);
    e4.gradient << 0.1, 0.0, -0.3, 0.2;
    RMatrix A = RMatrix::Random(4, 4);
    e4.quadratic = 0.3 * (A + A.transpose());
    double closed = fluctuation_log_magnitude(e4, 1.0, 0.8);
    auto q = fluctuation_quadrature(e4, 1.0, 0.8, 48, 1e-7);
    CHECK(std::abs(closed - std::log(std::abs(q.value))) < 1e-7);
}

TEST_CASE("quadrature reports non-convergence") {
    ActionExpansion ex;
    ex.value = 0;
    ex.free_slices = 1;
    ex.sites = 1;
    ex.gradient = RVector::Zero(2);
    ex.quadratic = RMatrix::Identity(2, 2) * 50.0;
    CHECK_THROWS_AS(fluctuation_quadrature(ex, 1e-3, 1.0, 8, 1e-8), QuadratureError);
}

TEST_CASE("fluctuation scaling preconditions") {
    auto l = lat(3, 1.0, 3, 1.0);
    HamiltonianSpec s;
    s.kind = HamiltonianKind::harmonic;
    LatticeHamiltonian h(s, l);
    Propagator prop(h, l.dt);
    auto sol = propagate(make_gaussian(l, 1.0, 0.8), prop, 2);
    CHECK_THROWS_AS(fluctuation_scaling(sol, h, {1e-2, 1e-3}, FamilyKind::non_solution, 0.3),
                    ConfigError);
    auto bad = sol.with_slice(1, make_homogeneous(l));
    CHECK_THROWS_AS(fluctuation_scaling(bad, h, {1e-2, 1e-3}, FamilyKind::solution, 0.3),
                    ConfigError);
    auto fs = fluctuation_scaling(sol, h, {1e-2, 1e-3}, FamilyKind::solution, 0.3);
    CHECK(fs.log_magnitudes.size() == 2);
}

TEST_CASE("slope fit") {
    CHECK(fit_slope({0, 1, 2, 3}, {1, 3, 5, 7}) == doctest::Approx(2.0).epsilon(1e-14));
}
