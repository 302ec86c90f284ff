#pragma once

#include <vector>

#include "corrlab/hamiltonian.hpp"
#include "corrlab/history.hpp"

namespace corrlab {

enum class Scheme { crank_nicolson };

// one-step map psi <- (1 - i dt H/2hbar)^-1 (1 + i dt H/2hbar) psi
class Propagator {
public:
    Propagator(const LatticeHamiltonian& h, double dt, Scheme scheme = Scheme::crank_nicolson);

    CVector step(const CVector& psi) const { return u_ * psi; }
    DiscreteWaveFunction step(const DiscreteWaveFunction& psi) const;
    const CMatrix& matrix() const { return u_; }
    double dt() const { return dt_; }
    const LatticeHamiltonian& hamiltonian() const { return h_; }
    double unitarity_defect() const;

private:
    LatticeHamiltonian h_;
    double dt_;
    CMatrix u_;
};

WaveHistory propagate(const DiscreteWaveFunction& psi0, const Propagator& prop, int steps);

struct HistoryResidual {
    std::vector<double> slices;  // one per step
    double total = 0.0;
};

HistoryResidual schrodinger_residual(const WaveHistory& history, const Propagator& prop);

struct LocalSolutionEvidence {
    bool admits = false;
    std::string witness;  // description of the witnessing initial state
    std::vector<double> scores;
};

LocalSolutionEvidence admits_local_solutions(const LatticeHamiltonian& h, double dt, int horizon,
                                             double threshold);

}  // namespace corrlab
