#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corrlab/amplitude_grid.hpp"
#include "corrlab/hamiltonian.hpp"

namespace corrlab {

struct CorrelatorEstimate {
    Complex value{0.0, 0.0};
    double abs_error = 0.0;
    std::uint64_t n_points = 0;
    double sign_diagnostic = 1.0;  // |sum w| / sum |w|
    bool reliable = true;
    double acceptance = 1.0;  // metropolis only
    std::vector<std::string> warnings;
};

struct CorrelatorOptions {
    double budget = 1e8;
    double boundary_tol = 1e-8;
    int threads = 0;  // 0 = hardware concurrency
};

// exhaustive sum over every interior grid configuration; the lattice supplies
// a, dt, hbar and alpha, the pair the slice count
CorrelatorEstimate correlator_bruteforce(const BoundaryPair& pair, const LatticeHamiltonian& h,
                                         const AmplitudeGrid& grid,
                                         const CorrelatorOptions& opt = {});

// required grid points, without running
double bruteforce_points(const BoundaryPair& pair, int sites, const AmplitudeGrid& grid);

struct MetropolisOptions {
    int chains = 16;
    long steps = 20000;
    std::uint64_t seed = 1;
    double burn_in_fraction = 0.1;
    double boundary_tol = 1e-8;
    int threads = 0;
};

CorrelatorEstimate correlator_metropolis(const BoundaryPair& pair, const LatticeHamiltonian& h,
                                         const AmplitudeGrid& grid, const MetropolisOptions& opt);

}  // namespace corrlab
