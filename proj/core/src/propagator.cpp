#include "corrlab/propagator.hpp"

#include <cmath>

namespace corrlab {

Propagator::Propagator(const LatticeHamiltonian& h, double dt, Scheme)
    : h_(h), dt_(dt) {
    if (!(std::abs(dt) > 0) || !std::isfinite(dt)) throw ConfigError("dt must be nonzero");
    const int n = h.dim();
    const Complex c(0.0, dt / (2.0 * h.lattice().hbar));
    CMatrix lhs = CMatrix::Identity(n, n) - c * h.h();
    CMatrix rhs = CMatrix::Identity(n, n) + c * h.h();
    Eigen::PartialPivLU<CMatrix> lu(lhs);
    double rc = lu.rcond();
    if (!(rc > 1e-14)) throw SolverError("Crank-Nicolson operator is singular for this dt and H");
    u_ = lu.solve(rhs);
}

DiscreteWaveFunction Propagator::step(const DiscreteWaveFunction& psi) const {
    if (psi.size() != h_.dim()) throw DimensionMismatch("state size differs from hamiltonian");
    return DiscreteWaveFunction::from_normalized(u_ * psi.amplitudes(), psi.spacing());
}

double Propagator::unitarity_defect() const {
    const int n = static_cast<int>(u_.rows());
    return (u_.adjoint() * u_ - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

WaveHistory propagate(const DiscreteWaveFunction& psi0, const Propagator& prop, int steps) {
    if (steps < 1) throw ConfigError("propagate needs at least one step");
    if (psi0.size() != prop.hamiltonian().dim())
        throw DimensionMismatch("state size differs from hamiltonian");
    if (std::abs(psi0.norm_sq() - 1.0) > 1e-10) throw ConfigError("initial state not normalized");
    std::vector<DiscreteWaveFunction> slices;
    slices.reserve(steps + 1);
    slices.push_back(psi0);
    CVector v = psi0.amplitudes();
    for (int k = 0; k < steps; ++k) {
        v = prop.matrix() * v;
        slices.push_back(DiscreteWaveFunction::from_normalized(v, psi0.spacing()));
    }
    LatticeSpec l = prop.hamiltonian().lattice();
    l.time_slices = steps + 1;
    l.dt = prop.dt();
    return WaveHistory(l, std::move(slices));
}

HistoryResidual schrodinger_residual(const WaveHistory& history, const Propagator& prop) {
    if (history.lattice().sites != prop.hamiltonian().dim())
        throw DimensionMismatch("history size differs from hamiltonian");
    HistoryResidual r;
    double ss = 0;
    const double a = history.lattice().spacing;
    for (int t = 0; t + 1 < history.size(); ++t) {
        CVector d = history[t + 1].amplitudes() - prop.matrix() * history[t].amplitudes();
        double x = std::sqrt(a * d.squaredNorm());
        r.slices.push_back(x);
        ss += x * x;
    }
    r.total = std::sqrt(ss);
    return r;
}

namespace {

std::vector<double> score_run(const DiscreteWaveFunction& psi0, const Propagator& prop, int horizon) {
    std::vector<double> out{locality_score(psi0)};
    CVector v = psi0.amplitudes();
    const double a = psi0.spacing();
    for (int k = 0; k < horizon; ++k) {
        v = prop.matrix() * v;
        out.push_back(locality_score(DiscreteWaveFunction::normalize(v, a)));
    }
    return out;
}

}  // namespace

LocalSolutionEvidence admits_local_solutions(const LatticeHamiltonian& h, double dt, int horizon,
                                             double threshold) {
    Propagator prop(h, dt);
    const auto& l = h.lattice();
    std::vector<std::pair<std::string, DiscreteWaveFunction>> cands;
    for (int i = 0; i < h.dim(); ++i) cands.emplace_back("eigenstate " + std::to_string(i), eigenstate(h, i));
    if (h.spec().kind != HamiltonianKind::composite_detector) {
        for (int n = 0; n < l.sites; ++n) {
            cands.emplace_back("site " + std::to_string(n), make_single_site(l, n));
            for (double w : {1.0, 2.0, 4.0})
                cands.emplace_back("gaussian at site " + std::to_string(n) + " width " +
                                       std::to_string(w) + "a",
                                   make_gaussian(l, l.spacing * n, w * l.spacing));
        }
    }
    LocalSolutionEvidence best;
    double best_min = -1;
    for (const auto& [name, psi] : cands) {
        if (locality_score(psi) < threshold) continue;
        auto s = score_run(psi, prop, horizon);
        double mn = *std::min_element(s.begin(), s.end());
        if (mn >= threshold) return {true, name, s};
        if (mn > best_min) {
            best_min = mn;
            best = {false, name, s};
        }
    }
    return best;
}

}  // namespace corrlab
