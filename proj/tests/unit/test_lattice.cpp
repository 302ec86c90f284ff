#include <cmath>
#include <random>

#include "doctest.h"

#include "corrlab/hamiltonian.hpp"
#include "corrlab/lattice.hpp"

using namespace corrlab;

namespace {

LatticeSpec lat(int M, double a) {
    LatticeSpec l;
    l.sites = M;
    l.spacing = a;
    return l;
}

double norm_sum(const DiscreteWaveFunction& psi) {
    double s = 0;
    for (int n = 0; n < psi.size(); ++n) s += psi.spacing() * std::norm(psi.amplitudes()[n]);
    return s;
}

DiscreteWaveFunction random_state(const LatticeSpec& l, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CVector v(l.sites);
    for (int n = 0; n < l.sites; ++n) v[n] = Complex(g(rng), g(rng));
    return DiscreteWaveFunction::normalize(v, l.spacing);
}

}  // namespace

TEST_CASE("homogeneous amplitude") {
    auto psi = make_homogeneous(lat(10, 0.1));
    for (int n = 0; n < 10; ++n) CHECK(std::abs(psi.amplitudes()[n] - Complex(1.0, 0.0)) < 1e-14);
    auto p2 = make_homogeneous(lat(8, 0.5));
    CHECK(std::abs(p2.amplitudes()[3]) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(norm_sum(p2) - 1.0) < 1e-12);
}

TEST_CASE("inhomogeneous profile") {
    auto psi = make_inhomogeneous(lat(5, 0.25), 2.0, 0);
    CHECK(std::abs(psi.amplitudes()[0]) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(std::abs(psi.amplitudes()[3]) == doctest::Approx(0.70710678118654752).epsilon(1e-14));
    CHECK(std::abs(norm_sum(psi) - 1.0) < 1e-12);
    CHECK_THROWS_AS(make_inhomogeneous(lat(5, 0.25), 4.0, 0), ConfigError);
    CHECK_THROWS_AS(make_inhomogeneous(lat(5, 0.25), 0.0, 0), ConfigError);
    CHECK_THROWS_AS(make_inhomogeneous(lat(5, 0.25), 1.0, 5), ConfigError);
}

TEST_CASE("locality score") {
    CHECK(locality_score(make_single_site(lat(6, 0.3), 2)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(locality_score(make_homogeneous(lat(10, 0.7))) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(locality_score(make_inhomogeneous(lat(5, 0.25), 2.0, 1)) ==
          doctest::Approx(0.3125).epsilon(1e-14));

    std::mt19937_64 rng(7);
    auto l = lat(6, 0.4);
    for (int i = 0; i < 2000; ++i) CHECK(locality_score(random_state(l, rng)) <= 1.0 + 1e-14);
}

TEST_CASE("normalization of constructors") {
    auto l = lat(9, 0.37);
    CHECK(std::abs(norm_sum(make_gaussian(l, 4.0, 1.1, 0.3)) - 1.0) < 1e-12);
    CHECK(std::abs(norm_sum(make_single_site(l, 8)) - 1.0) < 1e-12);
    CVector bad = CVector::Zero(3);
    CHECK_THROWS_AS(DiscreteWaveFunction::normalize(bad, 1.0), ConfigError);
    bad[0] = Complex(std::nan(""), 0.0);
    CHECK_THROWS_AS(DiscreteWaveFunction::normalize(bad, 1.0), ConfigError);
    CHECK_THROWS_AS(DiscreteWaveFunction::from_normalized(CVector::Ones(3), 1.0), ConfigError);
}

TEST_CASE("lattice validation") {
    LatticeSpec l = lat(4, 0.5);
    l.alpha = 1e-3;
    l.prob_quantum = 16;
    CHECK(l.validate().empty());
    l.alpha = 0.01;  // above 1/K^2
    CHECK(l.validate().size() == 1);
    l.sites = 1;
    CHECK_THROWS_AS(l.validate(), ConfigError);
    l.sites = 4;
    l.prob_quantum = 1;
    CHECK_THROWS_AS(l.validate(), ConfigError);
}

TEST_CASE("json round trip") {
    auto psi = make_gaussian(lat(5, 0.5), 1.0, 0.7, 0.9);
    auto back = wave_function_from_json(to_json(psi));
    CHECK(back.spacing() == psi.spacing());
    CHECK((back.amplitudes() - psi.amplitudes()).norm() == 0.0);
}

TEST_CASE("expectations") {
    auto l = lat(12, 0.5);
    HamiltonianSpec free;
    LatticeHamiltonian h(free, l);
    CHECK(h.hermiticity_defect() < 1e-14);
    CHECK(std::abs(expectations(make_homogeneous(l), h).momentum) < 1e-14);
    CHECK(std::abs(expectations(make_gaussian(l, 5.5, 1.2), h).momentum) < 1e-13);

    HamiltonianSpec ho;
    ho.kind = HamiltonianKind::harmonic;
    ho.omega = 0.8;
    LatticeHamiltonian hh(ho, l);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hh.h());
    CVector g = es.eigenvectors().col(0);
    auto ground = DiscreteWaveFunction::normalize(g, l.spacing);
    CHECK(std::abs(expectations(ground, hh).energy - es.eigenvalues()[0]) < 1e-10);

    std::mt19937_64 rng(3);
    std::normal_distribution<double> gd;
    for (int i = 0; i < 20; ++i) {
        CVector v(12);
        for (int n = 0; n < 12; ++n) v[n] = Complex(gd(rng), gd(rng));
        auto psi = DiscreteWaveFunction::normalize(v, l.spacing);
        auto e0 = expectations(psi, hh);
        auto e1 = expectations(psi.with_global_phase(1.234), hh);
        CHECK(std::abs(e0.energy - e1.energy) < 1e-12);
        CHECK(std::abs(e0.momentum - e1.momentum) < 1e-12);
    }

    auto wrong = make_homogeneous(lat(5, 0.5));
    CHECK_THROWS_AS(expectations(wrong, hh), DimensionMismatch);
}

TEST_CASE("hermitian for every kind") {
    auto l = lat(6, 0.5);
    for (auto k : {HamiltonianKind::free, HamiltonianKind::harmonic, HamiltonianKind::double_well,
                   HamiltonianKind::pinning, HamiltonianKind::composite_detector}) {
        HamiltonianSpec s;
        s.kind = k;
        s.pin_depth = 3.0;
        s.particle_sites = 3;
        s.pointer_sites = 2;
        s.coupling = 2.0;
        for (auto b : {Boundary::periodic, Boundary::dirichlet}) {
            l.boundary = b;
            LatticeHamiltonian h(s, l);
            CHECK(h.hermiticity_defect() < 1e-13);
            CHECK((h.p() - h.p().adjoint()).norm() < 1e-13);
        }
    }
    HamiltonianSpec bad;
    bad.kind = HamiltonianKind::composite_detector;
    bad.particle_sites = 4;
    bad.pointer_sites = 2;
    CHECK_THROWS_AS(LatticeHamiltonian(bad, l), ConfigError);
}

TEST_CASE("boundary pair validation") {
    auto l = lat(16, 0.5);
    HamiltonianSpec free;
    LatticeHamiltonian h(free, l);
    auto g = make_gaussian(l, 3.0, 1.3);
    BoundaryPair same{g, g, 0, 1};
    auto r = validate_boundary_pair(same, h, 1e-10);
    CHECK(r.pass);
    CHECK(r.energy_residual == 0.0);
    CHECK(r.momentum_residual == 0.0);
    CHECK(r.angular_trivially_satisfied);

    BoundaryPair waves{make_gaussian(l, 4.0, 2.0, 0.5), make_gaussian(l, 4.0, 2.0, 1.5), 0, 3};
    CHECK_FALSE(validate_boundary_pair(waves, h, 1e-6).pass);

    // periodic lattice: translated packets are exact copies
    BoundaryPair shifted{make_gaussian(l, 3.0, 1.3), make_gaussian(l, 9.0, 1.3), 0, 3};
    auto rs = validate_boundary_pair(shifted, h, 1e-10);
    CHECK(rs.pass);

    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        auto a = random_state(l, rng);
        auto b = random_state(l, rng);
        double tol = 0.05 * (i % 7);
        BoundaryPair ab{a, b, 0, 1}, ba{b, a, 0, 1};
        CHECK(validate_boundary_pair(ab, h, tol).pass == validate_boundary_pair(ba, h, tol).pass);
    }
}
