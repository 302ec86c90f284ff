#pragma once

#include <vector>

#include "corrlab/lattice.hpp"

namespace corrlab {

class WaveHistory {
public:
    // lattice.time_slices must equal slices.size()
    WaveHistory(LatticeSpec lattice, std::vector<DiscreteWaveFunction> slices,
                bool fixed_first = true, bool fixed_last = true);

    const LatticeSpec& lattice() const { return lattice_; }
    const std::vector<DiscreteWaveFunction>& slices() const { return slices_; }
    const DiscreteWaveFunction& operator[](int t) const { return slices_[t]; }
    int size() const { return static_cast<int>(slices_.size()); }
    bool fixed_first() const { return fixed_first_; }
    bool fixed_last() const { return fixed_last_; }
    int first_free() const { return fixed_first_ ? 1 : 0; }
    int last_free() const { return fixed_last_ ? size() - 2 : size() - 1; }

    WaveHistory with_slice(int t, const DiscreteWaveFunction& psi) const;
    WaveHistory with_dt(double dt) const;

private:
    LatticeSpec lattice_;
    std::vector<DiscreteWaveFunction> slices_;
    bool fixed_first_;
    bool fixed_last_;
};

}  // namespace corrlab
