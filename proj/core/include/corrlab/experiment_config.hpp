#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corrlab/hamiltonian.hpp"

namespace corrlab {

enum class ExperimentKind {
    measure_dominance,
    alpha_scaling,
    collapse_timing,
    time_symmetry,
    nonlinearity,
    born_rule,
    ratios_sweep
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& s);
const std::vector<ExperimentKind>& all_experiment_kinds();

struct EngineKnobs {
    int phase_points = 8;
    int chains = 16;
    long steps = 20000;
    std::uint64_t seed = 1;
    double budget = 1e8;
    double radius_factor = 0.5;  // perturbation radius in units of 1/sqrt(aM)
    int threads = 0;
};

struct ExperimentParams {
    // measure_dominance
    std::vector<double> b2_values{1.0, 1.5, 2.0, 2.5, 3.0, 3.5};
    std::int64_t scan_max_sites = 1000000;
    double scan_b2 = 2.0;
    // alpha_scaling
    std::vector<double> alphas{1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
    double nonsolution_ab2 = 0.5;
    double packet_width = 0.8;
    double slope_tolerance = 0.02;
    // collapse_timing
    int short_steps = 2;
    int long_steps = 39;
    int collapse_slice = 1;
    // time_symmetry
    int pairs = 10;
    int interior_slices = 1;
    double symmetry_tolerance = 1e-10;
    // nonlinearity: sweep alphas, gate on lattice.alpha
    std::vector<double> sweep_alphas{1.0, 0.3, 0.1, 0.03, 0.01, 0.001};
    // born_rule
    std::vector<double> particle_probs{0.8, 0.2};
    double ratio_tolerance = 0.15;
    // ratios_sweep
    int random_inputs = 1000;
    std::int64_t asymptotic_sites = 10000;
    double identity_tolerance = 1e-12;
    // shared: factor separating two contributions
    double separation_factor = 2.0;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::ratios_sweep;
    LatticeSpec lattice;
    HamiltonianSpec hamiltonian;
    EngineKnobs engine;
    ExperimentParams params;
    std::string output;

    void validate() const;  // throws ConfigError
};

ExperimentConfig default_config(ExperimentKind kind);

// strict parse: unknown keys and wrong types are ConfigError; missing keys take
// the defaults of the named kind
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);  // canonical, sorted keys
std::string config_hash(const ExperimentConfig& cfg);     // fnv-1a 64 of the canonical form

std::string fnv1a_hex(const std::string& bytes);

}  // namespace corrlab
