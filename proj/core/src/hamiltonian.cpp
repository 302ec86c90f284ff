#include "corrlab/hamiltonian.hpp"

#include <cmath>

namespace corrlab {

namespace {

CMatrix kinetic(int n, const LatticeSpec& l, double mass) {
    const double t = l.hbar * l.hbar / (2.0 * mass * l.spacing * l.spacing);
    CMatrix k = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        k(i, i) += 2 * t;
        if (i + 1 < n) {
            k(i, i + 1) -= t;
            k(i + 1, i) -= t;
        } else if (l.boundary == Boundary::periodic) {
            k(i, 0) -= t;
            k(0, i) -= t;
        }
    }
    return k;
}

CMatrix momentum(int n, const LatticeSpec& l) {
    const Complex c(0.0, -l.hbar / (2.0 * l.spacing));
    CMatrix p = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        int j = i + 1;
        if (j == n) {
            if (l.boundary != Boundary::periodic) continue;
            j = 0;
        }
        p(i, j) += c;
        p(j, i) += std::conj(c);
    }
    return p;
}

// a (x) identity(nb)
CMatrix kron_left(const CMatrix& a, int nb) {
    CMatrix out = CMatrix::Zero(a.rows() * nb, a.cols() * nb);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (a(i, j) != Complex(0.0, 0.0))
                for (int k = 0; k < nb; ++k) out(i * nb + k, j * nb + k) = a(i, j);
    return out;
}

}  // namespace

std::string to_string(HamiltonianKind kind) {
    switch (kind) {
        case HamiltonianKind::free: return "free";
        case HamiltonianKind::harmonic: return "harmonic";
        case HamiltonianKind::double_well: return "double_well";
        case HamiltonianKind::pinning: return "pinning";
        case HamiltonianKind::composite_detector: return "composite_detector";
    }
    return "?";
}

HamiltonianKind hamiltonian_kind_from_string(const std::string& s) {
    for (auto k : {HamiltonianKind::free, HamiltonianKind::harmonic, HamiltonianKind::double_well,
                   HamiltonianKind::pinning, HamiltonianKind::composite_detector})
        if (to_string(k) == s) return k;
    throw ConfigError("unknown hamiltonian kind '" + s + "'");
}

LatticeHamiltonian::LatticeHamiltonian(const HamiltonianSpec& spec, const LatticeSpec& lattice)
    : spec_(spec), lattice_(lattice) {
    lattice.validate();
    if (!(spec.mass > 0)) throw ConfigError("mass must be positive");
    const int M = lattice.sites;
    const double a = lattice.spacing;
    const double xc = a * (M - 1) / 2.0;

    if (spec.kind == HamiltonianKind::composite_detector) {
        const int np = spec.particle_sites, nd = spec.pointer_sites;
        if (np < 1 || nd < 1 || np * nd != M)
            throw ConfigError("composite detector needs sites = particle_sites * pointer_sites");
        CMatrix kp = kinetic(np, lattice, spec.mass);
        CMatrix kd = kinetic(nd, lattice, spec.mass);
        CMatrix pp = momentum(np, lattice);
        CMatrix pd = momentum(nd, lattice);
        h_ = kron_left(kp, nd);
        p_ = kron_left(pp, nd);
        for (int r = 0; r < np; ++r) {
            h_.block(r * nd, r * nd, nd, nd) += kd;
            p_.block(r * nd, r * nd, nd, nd) += pd;
            int i = r * nd + r % nd;
            h_(i, i) -= spec.coupling;
        }
    } else {
        h_ = kinetic(M, lattice, spec.mass);
        p_ = momentum(M, lattice);
        for (int n = 0; n < M; ++n) {
            double x = a * n - xc;
            double v = 0;
            switch (spec.kind) {
                case HamiltonianKind::harmonic:
                    v = 0.5 * spec.mass * spec.omega * spec.omega * x * x;
                    break;
                case HamiltonianKind::double_well: {
                    if (!(spec.well_separation > 0))
                        throw ConfigError("well_separation must be positive");
                    double q = x * x / (spec.well_separation * spec.well_separation) - 1.0;
                    v = spec.barrier * q * q;
                    break;
                }
                case HamiltonianKind::pinning:
                    if (spec.pin_site < 0 || spec.pin_site >= M)
                        throw ConfigError("pin_site outside the lattice");
                    v = (n == spec.pin_site) ? -spec.pin_depth : 0.0;
                    break;
                default: break;
            }
            h_(n, n) += v;
        }
    }
    h_.diagonal().array() += spec.offset;
}

double LatticeHamiltonian::hermiticity_defect() const { return (h_ - h_.adjoint()).norm(); }

Expectations expectations(const DiscreteWaveFunction& psi, const LatticeHamiltonian& h) {
    if (psi.size() != h.dim())
        throw DimensionMismatch("wave function has " + std::to_string(psi.size()) +
                                " sites, hamiltonian " + std::to_string(h.dim()));
    const CVector& v = psi.amplitudes();
    const double a = psi.spacing();
    return {a * v.dot(h.h() * v).real(), a * v.dot(h.p() * v).real()};
}

BoundaryCheck validate_boundary_pair(const BoundaryPair& pair, const LatticeHamiltonian& h,
                                     double tol) {
    auto e1 = expectations(pair.psi1, h);
    auto e2 = expectations(pair.psi2, h);
    BoundaryCheck c;
    c.energy_residual = std::abs(e1.energy - e2.energy);
    c.momentum_residual = std::abs(e1.momentum - e2.momentum);
    c.pass = c.energy_residual <= tol && c.momentum_residual <= tol;
    c.angular_trivially_satisfied = true;
    return c;
}

Spectrum spectrum(const LatticeHamiltonian& h) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h.h());
    if (es.info() != Eigen::Success) throw SolverError("eigensolver failed");
    Spectrum s{es.eigenvalues(), es.eigenvectors() / std::sqrt(h.lattice().spacing)};
    return s;
}

DiscreteWaveFunction eigenstate(const LatticeHamiltonian& h, int index) {
    if (index < 0 || index >= h.dim()) throw ConfigError("eigenstate index out of range");
    auto s = spectrum(h);
    CVector v = s.states.col(index);
    int k;
    v.cwiseAbs().maxCoeff(&k);
    v *= std::abs(v[k]) / v[k];
    return DiscreteWaveFunction::normalize(v, h.lattice().spacing);
}

}  // namespace corrlab
