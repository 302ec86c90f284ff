#pragma once

#include <string>
#include <vector>

#include "corrlab/types.hpp"

namespace corrlab {

enum class Boundary { periodic, dirichlet };

struct LatticeSpec {
    int sites = 2;
    double spacing = 1.0;
    int time_slices = 2;
    double dt = 0.1;
    double hbar = 1.0;
    double alpha = 1e-3;
    int prob_quantum = 16;
    Boundary boundary = Boundary::periodic;
    double locality_threshold = 0.5;

    // throws ConfigError; returns soft warnings
    std::vector<std::string> validate() const;
    double amplitude_floor() const;  // minimum |psi|^2
};

class DiscreteWaveFunction {
public:
    DiscreteWaveFunction() = default;

    // rescales to unit norm; rejects zero or non-finite input
    static DiscreteWaveFunction normalize(const CVector& amps, double spacing);
    // requires norm already within tol of one
    static DiscreteWaveFunction from_normalized(const CVector& amps, double spacing,
                                                double tol = 1e-10);

    const CVector& amplitudes() const { return amps_; }
    double spacing() const { return a_; }
    int size() const { return static_cast<int>(amps_.size()); }

    double norm_sq() const;
    Complex inner(const DiscreteWaveFunction& other) const;  // a * sum conj(this) other
    double probability(int n) const;
    DiscreteWaveFunction with_global_phase(double theta) const;

private:
    DiscreteWaveFunction(CVector amps, double a) : amps_(std::move(amps)), a_(a) {}
    CVector amps_;
    double a_ = 1.0;
};

DiscreteWaveFunction make_homogeneous(const LatticeSpec& lattice);
DiscreteWaveFunction make_inhomogeneous(const LatticeSpec& lattice, double b2, int peak_site);
DiscreteWaveFunction make_single_site(const LatticeSpec& lattice, int site);
DiscreteWaveFunction make_gaussian(const LatticeSpec& lattice, double center, double width,
                                   double wavenumber = 0.0);

// inverse participation ratio
double locality_score(const DiscreteWaveFunction& psi);
bool is_local(const DiscreteWaveFunction& psi, double threshold);

std::string to_json(const DiscreteWaveFunction& psi);
DiscreteWaveFunction wave_function_from_json(const std::string& text);

}  // namespace corrlab
