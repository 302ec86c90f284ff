#pragma once

#include <utility>
#include <vector>

#include "corrlab/correlator.hpp"
#include "corrlab/experiment_config.hpp"
#include "corrlab/records.hpp"

namespace corrlab {

struct BornSetup {
    LatticeSpec lattice;
    HamiltonianSpec hamiltonian;
    DiscreteWaveFunction initial;
    std::vector<DiscreteWaveFunction> branches;
    std::vector<double> probabilities;
    bool trivial = false;  // single branch
};

// lattice supplies spacing, dt, alpha, K; sites are overwritten
BornSetup born_rule_setup(const std::vector<double>& particle_probs, int pointer_sites,
                          double coupling, const LatticeSpec& base);

// localized combinations of the two lowest eigenstates
std::pair<DiscreteWaveFunction, DiscreteWaveFunction> localized_pair(const LatticeHamiltonian& h);

struct ExperimentOutcome {
    ResultRecord record;
    RunManifest manifest;
};

ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

// runs and persists under dir; returns the outcome
ExperimentOutcome run_and_write(const ExperimentConfig& cfg, const std::filesystem::path& dir);

}  // namespace corrlab
