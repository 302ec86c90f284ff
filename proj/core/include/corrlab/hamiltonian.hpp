#pragma once

#include <string>

#include "corrlab/lattice.hpp"

namespace corrlab {

enum class HamiltonianKind { free, harmonic, double_well, pinning, composite_detector };

struct HamiltonianSpec {
    HamiltonianKind kind = HamiltonianKind::free;
    double mass = 1.0;
    double offset = 0.0;  // constant energy shift

    double omega = 1.0;  // harmonic

    double well_separation = 1.0;  // double_well: V = barrier*((x-xc)^2/s^2 - 1)^2
    double barrier = 1.0;

    int pin_site = 0;  // pinning
    double pin_depth = 0.0;

    int particle_sites = 2;  // composite_detector, sites = particle_sites * pointer_sites
    int pointer_sites = 2;
    double coupling = 0.0;
};

std::string to_string(HamiltonianKind kind);
HamiltonianKind hamiltonian_kind_from_string(const std::string& s);

// dense H and P on a lattice, immutable after construction
class LatticeHamiltonian {
public:
    LatticeHamiltonian(const HamiltonianSpec& spec, const LatticeSpec& lattice);

    const CMatrix& h() const { return h_; }
    const CMatrix& p() const { return p_; }
    const HamiltonianSpec& spec() const { return spec_; }
    const LatticeSpec& lattice() const { return lattice_; }
    int dim() const { return static_cast<int>(h_.rows()); }
    double hermiticity_defect() const;

private:
    HamiltonianSpec spec_;
    LatticeSpec lattice_;
    CMatrix h_;
    CMatrix p_;
};

struct Expectations {
    double energy;
    double momentum;
};

Expectations expectations(const DiscreteWaveFunction& psi, const LatticeHamiltonian& h);

struct BoundaryPair {
    DiscreteWaveFunction psi1;
    DiscreteWaveFunction psi2;
    int t1 = 0;
    int t2 = 1;  // t2 < t1 is allowed and means the inverted correlator
};

struct BoundaryCheck {
    bool pass;
    double energy_residual;
    double momentum_residual;
    bool angular_trivially_satisfied = true;
};

BoundaryCheck validate_boundary_pair(const BoundaryPair& pair, const LatticeHamiltonian& h,
                                     double tol);

// lowest eigenpairs of H, amplitudes normalized with the lattice spacing
struct Spectrum {
    RVector energies;
    CMatrix states;  // columns
};
Spectrum spectrum(const LatticeHamiltonian& h);
DiscreteWaveFunction eigenstate(const LatticeHamiltonian& h, int index);

}  // namespace corrlab
