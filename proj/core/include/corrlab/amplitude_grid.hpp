#pragma once

#include <cstdint>
#include <vector>

#include "corrlab/lattice.hpp"

namespace corrlab {

struct AmplitudeGrid {
    int K = 16;
    int phase_points = 8;

    void validate(int sites) const;
    // C(K-1, M-1) * P^M
    double points_per_slice(int sites) const;
};

// all compositions of K into M parts, each >= 1, in lexicographic order
std::vector<std::vector<int>> compositions(int K, int M);

double binomial(int n, int k);

// amplitudes sqrt(n/(K a)) e^{2 pi i j/P}
CVector grid_amplitudes(const std::vector<int>& quanta, const std::vector<int>& phases, int K,
                        int P, double spacing);

}  // namespace corrlab
