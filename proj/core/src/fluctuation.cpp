#include <cmath>

#include "corrlab/measure_weight.hpp"
#include "corrlab/propagator.hpp"

namespace corrlab {

FluctuationScaling fluctuation_scaling(const WaveHistory& center, const LatticeHamiltonian& h,
                                       const std::vector<double>& alphas, FamilyKind family,
                                       double radius) {
    if (alphas.size() < 2) throw ConfigError("need at least two alpha values");
    Propagator prop(h, center.lattice().dt);
    double res = schrodinger_residual(center, prop).total;
    constexpr double solution_tol = 1e-8;
    if (family == FamilyKind::solution && res > solution_tol)
        throw ConfigError("solution family center has residual " + std::to_string(res));
    if (family == FamilyKind::non_solution && res <= solution_tol)
        throw ConfigError("non-solution family center solves the dynamics");

    FluctuationScaling out;
    out.family = family;
    out.alphas = alphas;
    out.center_residual = res;
    out.center_log_measure = measure_log_density(center).value;
    out.radius = radius;
    auto ex = action_expansion(center, h);
    std::vector<double> la;
    for (double al : alphas) {
        out.log_magnitudes.push_back(fluctuation_log_magnitude(ex, al, radius));
        la.push_back(std::log(al));
    }
    out.slope = fit_slope(la, out.log_magnitudes);
    return out;
}

}  // namespace corrlab
