#include "corrlab/amplitude_grid.hpp"

#include <cmath>

namespace corrlab {

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

void AmplitudeGrid::validate(int sites) const {
    if (K < sites) throw ConfigError("K must be at least the number of sites (every site holds a quantum)");
    if (phase_points < 1) throw ConfigError("phase_points must be positive");
}

double AmplitudeGrid::points_per_slice(int sites) const {
    return binomial(K - 1, sites - 1) * std::pow(double(phase_points), sites);
}

namespace {

void compose(int left, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (parts == 1) {
        cur.push_back(left);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int n = 1; n <= left - (parts - 1); ++n) {
        cur.push_back(n);
        compose(left - n, parts - 1, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<std::vector<int>> compositions(int K, int M) {
    std::vector<std::vector<int>> out;
    if (M < 1 || K < M) return out;
    std::vector<int> cur;
    compose(K, M, cur, out);
    return out;
}

CVector grid_amplitudes(const std::vector<int>& quanta, const std::vector<int>& phases, int K,
                        int P, double spacing) {
    CVector v(quanta.size());
    for (size_t n = 0; n < quanta.size(); ++n)
        v[n] = std::polar(std::sqrt(quanta[n] / (K * spacing)), 2 * M_PI * phases[n] / P);
    return v;
}

}  // namespace corrlab
