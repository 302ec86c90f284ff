#pragma once

#include <optional>
#include <string>
#include <vector>

#include "corrlab/hamiltonian.hpp"
#include "corrlab/history.hpp"
#include "corrlab/propagator.hpp"

namespace corrlab {

enum class HistoryKind { schrodinger, collapse, frozen };

std::string to_string(HistoryKind kind);

struct HistoryFamily {
    HistoryKind kind;
    WaveHistory center;
    int collapse_slice = -1;
    std::optional<DiscreteWaveFunction> collapse_target;
};

HistoryFamily schrodinger_family(const DiscreteWaveFunction& psi1, const Propagator& prop,
                                 int steps);
// follows prop up to collapse_slice - 1, jumps to target, then follows prop again
HistoryFamily collapse_family(const DiscreteWaveFunction& psi1, const DiscreteWaveFunction& target,
                              int collapse_slice, const Propagator& prop, int steps);
HistoryFamily frozen_family(const DiscreteWaveFunction& psi1, int steps, const LatticeSpec& lattice);

struct FamilyContribution {
    HistoryKind kind;
    double log_measure;
    double log_fluctuation;
    double log_contribution;
    double phase;  // action phase of the center, mod 2 pi
};

struct FamilyRanking {
    std::vector<FamilyContribution> contributions;  // input order
    std::vector<int> order;                         // best first
    std::vector<std::vector<double>> log_ratios;    // [i][j] = log c_i - log c_j
    double leading_gap() const;                     // log c_first - log c_second
};

// each center must start at pair.psi1 and span |t2 - t1| steps
FamilyRanking compare_history_families(const std::vector<HistoryFamily>& families,
                                       const BoundaryPair& pair, const Propagator& prop,
                                       double alpha, double radius);

}  // namespace corrlab
