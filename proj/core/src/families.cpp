#include "corrlab/families.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "corrlab/measure_weight.hpp"

namespace corrlab {

std::string to_string(HistoryKind kind) {
    switch (kind) {
        case HistoryKind::schrodinger: return "schrodinger";
        case HistoryKind::collapse: return "collapse";
        case HistoryKind::frozen: return "frozen";
    }
    return "?";
}

HistoryFamily schrodinger_family(const DiscreteWaveFunction& psi1, const Propagator& prop, int steps) {
    return {HistoryKind::schrodinger, propagate(psi1, prop, steps), -1, std::nullopt};
}

HistoryFamily collapse_family(const DiscreteWaveFunction& psi1, const DiscreteWaveFunction& target,
                              int collapse_slice, const Propagator& prop, int steps) {
    if (collapse_slice < 1 || collapse_slice > steps)
        throw ConfigError("collapse slice must lie in 1..steps");
    std::vector<DiscreteWaveFunction> sl{psi1};
    if (collapse_slice > 1) {
        auto pre = propagate(psi1, prop, collapse_slice - 1);
        sl.assign(pre.slices().begin(), pre.slices().end());
    }
    if (collapse_slice < steps) {
        auto post = propagate(target, prop, steps - collapse_slice);
        sl.insert(sl.end(), post.slices().begin(), post.slices().end());
    } else {
        sl.push_back(target);
    }
    LatticeSpec l = prop.hamiltonian().lattice();
    l.time_slices = steps + 1;
    l.dt = prop.dt();
    return {HistoryKind::collapse, WaveHistory(l, sl), collapse_slice, target};
}

HistoryFamily frozen_family(const DiscreteWaveFunction& psi1, int steps, const LatticeSpec& lattice) {
    LatticeSpec l = lattice;
    l.time_slices = steps + 1;
    return {HistoryKind::frozen, WaveHistory(l, std::vector<DiscreteWaveFunction>(steps + 1, psi1)), -1,
            std::nullopt};
}

double FamilyRanking::leading_gap() const {
    if (order.size() < 2) return INFINITY;
    return contributions[order[0]].log_contribution - contributions[order[1]].log_contribution;
}

FamilyRanking compare_history_families(const std::vector<HistoryFamily>& families,
                                       const BoundaryPair& pair, const Propagator& prop,
                                       double alpha, double radius) {
    if (families.empty()) throw ConfigError("no history families to compare");
    const int steps = std::abs(pair.t2 - pair.t1);
    constexpr double tol = 1e-10;
    FamilyRanking out;
    for (const auto& f : families) {
        const auto& c = f.center;
        if (c.size() != steps + 1)
            throw ConfigError(to_string(f.kind) + " center spans " + std::to_string(c.size() - 1) +
                              " steps, boundaries are " + std::to_string(steps) + " apart");
        if ((c[0].amplitudes() - pair.psi1.amplitudes()).norm() > tol)
            throw ConfigError(to_string(f.kind) + " center does not start at the initial boundary");
        if (std::abs(std::abs(c.lattice().dt) - std::abs(prop.dt())) > 1e-15)
            throw ConfigError(to_string(f.kind) + " center uses a different dt");
        auto res = schrodinger_residual(c, prop);
        if (f.kind == HistoryKind::schrodinger && res.total > tol)
            throw ConfigError("schrodinger center is not a solution (residual " +
                              std::to_string(res.total) + ")");
        if (f.kind == HistoryKind::collapse) {
            for (int k = 0; k < static_cast<int>(res.slices.size()); ++k) {
                bool jump = (k == f.collapse_slice - 1);
                if (!jump && res.slices[k] > tol)
                    throw ConfigError("collapse center deviates away from its collapse slice");
            }
        }
        auto ex = action_expansion(c, prop.hamiltonian());
        FamilyContribution fc;
        fc.kind = f.kind;
        fc.log_measure = measure_log_density(c).value;
        fc.log_fluctuation = fluctuation_log_magnitude(ex, alpha, radius);
        fc.log_contribution = fc.log_measure + fc.log_fluctuation;
        fc.phase = std::remainder(ex.value / alpha, 2 * M_PI);
        out.contributions.push_back(fc);
    }
    const int n = static_cast<int>(out.contributions.size());
    out.order.resize(n);
    std::iota(out.order.begin(), out.order.end(), 0);
    std::stable_sort(out.order.begin(), out.order.end(), [&](int x, int y) {
        return out.contributions[x].log_contribution > out.contributions[y].log_contribution;
    });
    out.log_ratios.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.log_ratios[i][j] = out.contributions[i].log_contribution - out.contributions[j].log_contribution;
    return out;
}

}  // namespace corrlab
