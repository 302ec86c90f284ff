#pragma once

#include <vector>

#include "corrlab/hamiltonian.hpp"
#include "corrlab/history.hpp"

namespace corrlab {

struct LogMeasure {
    double value;
};

struct ActionPhase {
    double value;
};

// sum of -4 ln|psi| over free slices; throws AmplitudeFloorViolation
LogMeasure measure_log_density(const WaveHistory& history);
double slice_log_measure(const DiscreteWaveFunction& psi);

// action over hbar, without the 1/alpha factor
double reduced_action(const std::vector<CVector>& slices, const CMatrix& h, double spacing,
                      double dt, double hbar);

ActionPhase action_phase(const WaveHistory& history, const LatticeHamiltonian& h);

// S(c + d) - S(c) = gradient.d + d.hessian_half.d over (Re, Im) of the free slices;
// exact since the reduced action is quadratic
struct ActionExpansion {
    double value;
    RVector gradient;
    RMatrix quadratic;
    int free_slices;
    int sites;
};

ActionExpansion action_expansion(const WaveHistory& history, const LatticeHamiltonian& h);

// log |int exp(-|d|^2/rho^2) exp(i (g.d + d.Q.d)/alpha) dd|, exact Gaussian integral
double fluctuation_log_magnitude(const ActionExpansion& ex, double alpha, double radius);

struct QuadratureResult {
    Complex value;
    double error_estimate;
    long long evaluations;
};

// tensor Gauss-Hermite cross-check, feasible for few real dimensions
QuadratureResult fluctuation_quadrature(const ActionExpansion& ex, double alpha, double radius,
                                        int nodes, double tol = 1e-6);

enum class FamilyKind { solution, non_solution };

struct FluctuationScaling {
    FamilyKind family;
    std::vector<double> alphas;
    std::vector<double> log_magnitudes;
    double center_log_measure;
    double center_residual;
    double slope;
    double radius;
};

FluctuationScaling fluctuation_scaling(const WaveHistory& center, const LatticeHamiltonian& h,
                                       const std::vector<double>& alphas, FamilyKind family,
                                       double radius);

// default perturbation radius for a lattice
double default_radius(const LatticeSpec& lattice, double factor);

// least-squares slope of y against x
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace corrlab
