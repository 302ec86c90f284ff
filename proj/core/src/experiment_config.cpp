#include "corrlab/experiment_config.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "json.hpp"

namespace corrlab {

using nlohmann::json;

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::measure_dominance: return "measure_dominance";
        case ExperimentKind::alpha_scaling: return "alpha_scaling";
        case ExperimentKind::collapse_timing: return "collapse_timing";
        case ExperimentKind::time_symmetry: return "time_symmetry";
        case ExperimentKind::nonlinearity: return "nonlinearity";
        case ExperimentKind::born_rule: return "born_rule";
        case ExperimentKind::ratios_sweep: return "ratios_sweep";
    }
    return "?";
}

const std::vector<ExperimentKind>& all_experiment_kinds() {
    static const std::vector<ExperimentKind> k{
        ExperimentKind::ratios_sweep,   ExperimentKind::measure_dominance, ExperimentKind::alpha_scaling,
        ExperimentKind::collapse_timing, ExperimentKind::time_symmetry,    ExperimentKind::nonlinearity,
        ExperimentKind::born_rule};
    return k;
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
    for (auto k : all_experiment_kinds())
        if (to_string(k) == s) return k;
    throw ConfigError("unknown experiment kind '" + s + "'");
}

ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig c;
    c.kind = kind;
    c.output = "runs/" + to_string(kind);
    auto& l = c.lattice;
    auto& h = c.hamiltonian;
    l.prob_quantum = 16;
    l.alpha = 1e-3;
    switch (kind) {
        case ExperimentKind::ratios_sweep:
        case ExperimentKind::measure_dominance:
            l.sites = 5;
            l.spacing = 0.25;
            l.time_slices = 3;
            l.dt = 0.1;
            break;
        case ExperimentKind::alpha_scaling:
            l.sites = 3;
            l.spacing = 1.0;
            l.time_slices = 3;
            l.dt = 1.0;
            h.kind = HamiltonianKind::harmonic;
            h.omega = 1.0;
            h.offset = 100.0;
            c.engine.radius_factor = 0.25;
            break;
        case ExperimentKind::collapse_timing:
            l.sites = 5;
            l.spacing = 1.0;
            l.time_slices = 3;
            l.dt = 0.05;
            h.kind = HamiltonianKind::pinning;
            h.pin_site = 0;
            h.pin_depth = 1.0;
            break;
        case ExperimentKind::time_symmetry:
            l.sites = 2;
            l.spacing = 1.0;
            l.time_slices = 3;
            l.dt = 0.25;
            l.prob_quantum = 8;
            l.alpha = 1e-2;
            break;
        case ExperimentKind::nonlinearity:
            l.sites = 4;
            l.spacing = 1.0;
            l.time_slices = 3;
            l.dt = 0.1;
            l.boundary = Boundary::dirichlet;
            l.alpha = 0.1;
            h.kind = HamiltonianKind::double_well;
            h.well_separation = 1.5;
            h.barrier = 2.0;
            break;
        case ExperimentKind::born_rule:
            l.sites = 4;
            l.spacing = 1.0;
            l.time_slices = 3;
            l.dt = 0.1;
            h.kind = HamiltonianKind::composite_detector;
            h.particle_sites = 2;
            h.pointer_sites = 2;
            h.coupling = 5.0;
            break;
    }
    return c;
}

void ExperimentConfig::validate() const {
    lattice.validate();
    LatticeHamiltonian probe(hamiltonian, lattice);  // throws on bad hamiltonian
    if (engine.phase_points < 1) throw ConfigError("engine.phase_points must be positive");
    if (engine.chains < 2) throw ConfigError("engine.chains must be >= 2");
    if (engine.steps < 10) throw ConfigError("engine.steps must be >= 10");
    if (!(engine.budget > 0)) throw ConfigError("engine.budget must be positive");
    if (!(engine.radius_factor > 0)) throw ConfigError("engine.radius_factor must be positive");
    if (!(params.separation_factor > 1)) throw ConfigError("params.separation_factor must exceed 1");
    switch (kind) {
        case ExperimentKind::alpha_scaling:
            if (params.alphas.size() < 2) throw ConfigError("params.alphas needs two values");
            for (double a : params.alphas)
                if (!(a > 0)) throw ConfigError("params.alphas must be positive");
            break;
        case ExperimentKind::collapse_timing:
            if (params.short_steps < 1 || params.long_steps <= params.short_steps)
                throw ConfigError("need 1 <= short_steps < long_steps");
            if (params.collapse_slice < 1 || params.collapse_slice > params.short_steps)
                throw ConfigError("collapse_slice must lie within the short horizon");
            break;
        case ExperimentKind::time_symmetry:
            if (params.pairs < 1) throw ConfigError("params.pairs must be positive");
            if (params.interior_slices < 0) throw ConfigError("params.interior_slices must be >= 0");
            break;
        case ExperimentKind::born_rule: {
            double s = 0;
            for (double p : params.particle_probs) {
                if (!(p > 0)) throw ConfigError("particle probabilities must be positive");
                s += p;
            }
            if (std::abs(s - 1) > 1e-12) throw ConfigError("particle probabilities must sum to 1");
            if (hamiltonian.kind != HamiltonianKind::composite_detector)
                throw ConfigError("born_rule needs the composite_detector hamiltonian");
            break;
        }
        case ExperimentKind::measure_dominance:
            for (double b : params.b2_values)
                if (!(b * lattice.spacing > 0 && b * lattice.spacing < 1))
                    throw ConfigError("b2_values must satisfy 0 < a*B2 < 1");
            break;
        default: break;
    }
}

namespace {

std::string boundary_name(Boundary b) { return b == Boundary::periodic ? "periodic" : "dirichlet"; }

json to_j(const ExperimentConfig& c) {
    json j;
    j["kind"] = to_string(c.kind);
    j["output"] = c.output;
    const auto& l = c.lattice;
    j["lattice"] = {{"sites", l.sites},
                    {"spacing", l.spacing},
                    {"time_slices", l.time_slices},
                    {"dt", l.dt},
                    {"hbar", l.hbar},
                    {"alpha", l.alpha},
                    {"prob_quantum", l.prob_quantum},
                    {"boundary", boundary_name(l.boundary)},
                    {"locality_threshold", l.locality_threshold}};
    const auto& h = c.hamiltonian;
    j["hamiltonian"] = {{"kind", to_string(h.kind)},     {"mass", h.mass},
                        {"offset", h.offset},            {"omega", h.omega},
                        {"well_separation", h.well_separation}, {"barrier", h.barrier},
                        {"pin_site", h.pin_site},        {"pin_depth", h.pin_depth},
                        {"particle_sites", h.particle_sites}, {"pointer_sites", h.pointer_sites},
                        {"coupling", h.coupling}};
    const auto& e = c.engine;
    j["engine"] = {{"phase_points", e.phase_points}, {"chains", e.chains},
                   {"steps", e.steps},               {"seed", e.seed},
                   {"budget", e.budget},             {"radius_factor", e.radius_factor},
                   {"threads", e.threads}};
    const auto& p = c.params;
    j["params"] = {{"b2_values", p.b2_values},
                   {"scan_max_sites", p.scan_max_sites},
                   {"scan_b2", p.scan_b2},
                   {"alphas", p.alphas},
                   {"nonsolution_ab2", p.nonsolution_ab2},
                   {"packet_width", p.packet_width},
                   {"slope_tolerance", p.slope_tolerance},
                   {"short_steps", p.short_steps},
                   {"long_steps", p.long_steps},
                   {"collapse_slice", p.collapse_slice},
                   {"pairs", p.pairs},
                   {"interior_slices", p.interior_slices},
                   {"symmetry_tolerance", p.symmetry_tolerance},
                   {"sweep_alphas", p.sweep_alphas},
                   {"particle_probs", p.particle_probs},
                   {"ratio_tolerance", p.ratio_tolerance},
                   {"random_inputs", p.random_inputs},
                   {"asymptotic_sites", p.asymptotic_sites},
                   {"identity_tolerance", p.identity_tolerance},
                   {"separation_factor", p.separation_factor}};
    return j;
}

// copy keys present in src onto dst, refusing unknown ones and type changes
void overlay(json& dst, const json& src, const std::string& where) {
    if (!src.is_object()) throw ConfigError(where + " must be an object");
    for (auto it = src.begin(); it != src.end(); ++it) {
        const std::string path = where.empty() ? it.key() : where + "." + it.key();
        if (!dst.contains(it.key())) throw ConfigError("unknown config key '" + path + "'");
        json& d = dst[it.key()];
        const json& v = it.value();
        if (d.is_object()) {
            overlay(d, v, path);
        } else if (d.is_number()) {
            if (!v.is_number()) throw ConfigError("config key '" + path + "' must be a number");
            if ((d.is_number_integer() || d.is_number_unsigned()) && !(v.is_number_integer() || v.is_number_unsigned()))
                throw ConfigError("config key '" + path + "' must be an integer");
            d = v;
        } else if (d.is_array()) {
            if (!v.is_array()) throw ConfigError("config key '" + path + "' must be an array");
            for (const auto& x : v)
                if (!x.is_number()) throw ConfigError("config key '" + path + "' must hold numbers");
            d = v;
        } else if (d.is_string()) {
            if (!v.is_string()) throw ConfigError("config key '" + path + "' must be a string");
            d = v;
        }
    }
}

template <class T>
T get(const json& j, const char* k) {
    return j.at(k).get<T>();
}

ExperimentConfig from_j(const json& j) {
    ExperimentConfig c;
    c.kind = experiment_kind_from_string(get<std::string>(j, "kind"));
    c.output = get<std::string>(j, "output");
    const auto& l = j.at("lattice");
    c.lattice.sites = get<int>(l, "sites");
    c.lattice.spacing = get<double>(l, "spacing");
    c.lattice.time_slices = get<int>(l, "time_slices");
    c.lattice.dt = get<double>(l, "dt");
    c.lattice.hbar = get<double>(l, "hbar");
    c.lattice.alpha = get<double>(l, "alpha");
    c.lattice.prob_quantum = get<int>(l, "prob_quantum");
    auto b = get<std::string>(l, "boundary");
    if (b == "periodic")
        c.lattice.boundary = Boundary::periodic;
    else if (b == "dirichlet")
        c.lattice.boundary = Boundary::dirichlet;
    else
        throw ConfigError("lattice.boundary must be periodic or dirichlet");
    c.lattice.locality_threshold = get<double>(l, "locality_threshold");
    const auto& h = j.at("hamiltonian");
    c.hamiltonian.kind = hamiltonian_kind_from_string(get<std::string>(h, "kind"));
    c.hamiltonian.mass = get<double>(h, "mass");
    c.hamiltonian.offset = get<double>(h, "offset");
    c.hamiltonian.omega = get<double>(h, "omega");
    c.hamiltonian.well_separation = get<double>(h, "well_separation");
    c.hamiltonian.barrier = get<double>(h, "barrier");
    c.hamiltonian.pin_site = get<int>(h, "pin_site");
    c.hamiltonian.pin_depth = get<double>(h, "pin_depth");
    c.hamiltonian.particle_sites = get<int>(h, "particle_sites");
    c.hamiltonian.pointer_sites = get<int>(h, "pointer_sites");
    c.hamiltonian.coupling = get<double>(h, "coupling");
    const auto& e = j.at("engine");
    c.engine.phase_points = get<int>(e, "phase_points");
    c.engine.chains = get<int>(e, "chains");
    c.engine.steps = get<long>(e, "steps");
    c.engine.seed = get<std::uint64_t>(e, "seed");
    c.engine.budget = get<double>(e, "budget");
    c.engine.radius_factor = get<double>(e, "radius_factor");
    c.engine.threads = get<int>(e, "threads");
    const auto& p = j.at("params");
    auto& q = c.params;
    q.b2_values = get<std::vector<double>>(p, "b2_values");
    q.scan_max_sites = get<std::int64_t>(p, "scan_max_sites");
    q.scan_b2 = get<double>(p, "scan_b2");
    q.alphas = get<std::vector<double>>(p, "alphas");
    q.nonsolution_ab2 = get<double>(p, "nonsolution_ab2");
    q.packet_width = get<double>(p, "packet_width");
    q.slope_tolerance = get<double>(p, "slope_tolerance");
    q.short_steps = get<int>(p, "short_steps");
    q.long_steps = get<int>(p, "long_steps");
    q.collapse_slice = get<int>(p, "collapse_slice");
    q.pairs = get<int>(p, "pairs");
    q.interior_slices = get<int>(p, "interior_slices");
    q.symmetry_tolerance = get<double>(p, "symmetry_tolerance");
    q.sweep_alphas = get<std::vector<double>>(p, "sweep_alphas");
    q.particle_probs = get<std::vector<double>>(p, "particle_probs");
    q.ratio_tolerance = get<double>(p, "ratio_tolerance");
    q.random_inputs = get<int>(p, "random_inputs");
    q.asymptotic_sites = get<std::int64_t>(p, "asymptotic_sites");
    q.identity_tolerance = get<double>(p, "identity_tolerance");
    q.separation_factor = get<double>(p, "separation_factor");
    return c;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
    json in;
    try {
        in = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!in.is_object() || !in.contains("kind") || !in["kind"].is_string())
        throw ConfigError("config needs a string 'kind'");
    json base = to_j(default_config(experiment_kind_from_string(in["kind"].get<std::string>())));
    overlay(base, in, "");
    ExperimentConfig c;
    try {
        c = from_j(base);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config has a bad value: ") + e.what());
    }
    c.validate();
    return c;
}

std::string config_to_json(const ExperimentConfig& cfg) { return to_j(cfg).dump(2) + "\n"; }

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string config_hash(const ExperimentConfig& cfg) {
    json j = to_j(cfg);
    j.erase("output");  // where results go does not change them
    return fnv1a_hex(j.dump());
}

}  // namespace corrlab
