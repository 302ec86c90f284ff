#include "corrlab/history.hpp"

namespace corrlab {

WaveHistory::WaveHistory(LatticeSpec lattice, std::vector<DiscreteWaveFunction> slices,
                         bool fixed_first, bool fixed_last)
    : lattice_(std::move(lattice)),
      slices_(std::move(slices)),
      fixed_first_(fixed_first),
      fixed_last_(fixed_last) {
    if (static_cast<int>(slices_.size()) != lattice_.time_slices)
        throw ConfigError("history has " + std::to_string(slices_.size()) +
                          " slices, lattice expects " + std::to_string(lattice_.time_slices));
    for (const auto& s : slices_) {
        if (s.size() != lattice_.sites) throw DimensionMismatch("slice size differs from lattice");
        if (std::abs(s.norm_sq() - 1.0) > 1e-10) throw ConfigError("history slice not normalized");
    }
}

WaveHistory WaveHistory::with_slice(int t, const DiscreteWaveFunction& psi) const {
    auto s = slices_;
    s.at(t) = psi;
    return WaveHistory(lattice_, std::move(s), fixed_first_, fixed_last_);
}

WaveHistory WaveHistory::with_dt(double dt) const {
    auto l = lattice_;
    l.dt = dt;
    return WaveHistory(l, slices_, fixed_first_, fixed_last_);
}

}  // namespace corrlab
