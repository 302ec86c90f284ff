#include "corrlab/lattice.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace corrlab {

AmplitudeFloorViolation::AmplitudeFloorViolation(int slice_, int site_, double prob, double floor)
    : std::runtime_error("amplitude floor violated at slice " + std::to_string(slice_) + ", site " +
                         std::to_string(site_) + ": |psi|^2 = " + std::to_string(prob) +
                         " < " + std::to_string(floor)),
      slice(slice_),
      site(site_) {}

BudgetExceeded::BudgetExceeded(double required_, double budget_)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "grid needs " << required_ << " points, budget is " << budget_
             << "; lower K, phase_points or the slice count";
          return os.str();
      }()),
      required(required_),
      budget(budget_) {}

QuadratureError::QuadratureError(const std::string& what, double achieved_)
    : std::runtime_error(what + " (achieved error estimate " + std::to_string(achieved_) + ")"),
      achieved(achieved_) {}

std::vector<std::string> LatticeSpec::validate() const {
    if (sites < 2) throw ConfigError("lattice needs at least 2 sites");
    if (!(spacing > 0) || !std::isfinite(spacing)) throw ConfigError("spacing must be positive");
    if (time_slices < 2) throw ConfigError("time_slices must be >= 2");
    if (!(std::abs(dt) > 0) || !std::isfinite(dt)) throw ConfigError("dt must be nonzero");
    if (!(hbar > 0)) throw ConfigError("hbar must be positive");
    if (!(alpha > 0)) throw ConfigError("alpha must be positive");
    if (prob_quantum < 2) throw ConfigError("prob_quantum K must be >= 2");
    if (!(locality_threshold > 0 && locality_threshold <= 1))
        throw ConfigError("locality_threshold must lie in (0, 1]");
    std::vector<std::string> warn;
    double bound = 1.0 / (double(prob_quantum) * prob_quantum);
    if (alpha >= bound) {
        std::ostringstream os;
        os << "alpha = " << alpha << " >= 1/K^2 = " << bound
           << ": Schrodinger solutions need not dominate globally";
        warn.push_back(os.str());
    }
    return warn;
}

double LatticeSpec::amplitude_floor() const { return 1.0 / (double(prob_quantum) * spacing * sites); }

DiscreteWaveFunction DiscreteWaveFunction::normalize(const CVector& amps, double spacing) {
    if (!(spacing > 0)) throw ConfigError("spacing must be positive");
    if (!amps.allFinite()) throw ConfigError("wave function has non-finite amplitudes");
    double n2 = spacing * amps.squaredNorm();
    if (!(n2 > 0)) throw ConfigError("cannot normalize a zero wave function");
    return DiscreteWaveFunction(amps / std::sqrt(n2), spacing);
}

DiscreteWaveFunction DiscreteWaveFunction::from_normalized(const CVector& amps, double spacing,
                                                           double tol) {
    if (!(spacing > 0)) throw ConfigError("spacing must be positive");
    if (!amps.allFinite()) throw ConfigError("wave function has non-finite amplitudes");
    double n2 = spacing * amps.squaredNorm();
    if (std::abs(n2 - 1.0) > tol) {
        std::ostringstream os;
        os << "wave function not normalized: sum a|psi|^2 = " << n2;
        throw ConfigError(os.str());
    }
    return DiscreteWaveFunction(amps, spacing);
}

double DiscreteWaveFunction::norm_sq() const { return a_ * amps_.squaredNorm(); }

Complex DiscreteWaveFunction::inner(const DiscreteWaveFunction& other) const {
    if (other.size() != size()) throw DimensionMismatch("inner product of different sizes");
    return a_ * amps_.dot(other.amps_);
}

double DiscreteWaveFunction::probability(int n) const { return a_ * std::norm(amps_[n]); }

DiscreteWaveFunction DiscreteWaveFunction::with_global_phase(double theta) const {
    return DiscreteWaveFunction(amps_ * std::polar(1.0, theta), a_);
}

DiscreteWaveFunction make_homogeneous(const LatticeSpec& lattice) {
    lattice.validate();
    double A = std::sqrt(1.0 / (lattice.spacing * lattice.sites));
    return DiscreteWaveFunction::from_normalized(CVector::Constant(lattice.sites, Complex(A, 0.0)),
                                                 lattice.spacing, 1e-12);
}

DiscreteWaveFunction make_inhomogeneous(const LatticeSpec& lattice, double b2, int peak_site) {
    lattice.validate();
    const double a = lattice.spacing;
    const int M = lattice.sites;
    if (!(a * b2 > 0) || !(a * b2 < 1)) throw ConfigError("inhomogeneous state needs 0 < a*B2 < 1");
    if (peak_site < 0 || peak_site >= M) throw ConfigError("peak_site outside the lattice");
    double A = std::sqrt((1.0 - a * b2) / (a * (M - 1)));
    CVector v = CVector::Constant(M, Complex(A, 0.0));
    v[peak_site] = std::sqrt(b2);
    return DiscreteWaveFunction::from_normalized(v, a, 1e-12);
}

DiscreteWaveFunction make_single_site(const LatticeSpec& lattice, int site) {
    if (site < 0 || site >= lattice.sites) throw ConfigError("site outside the lattice");
    CVector v = CVector::Zero(lattice.sites);
    v[site] = 1.0 / std::sqrt(lattice.spacing);
    return DiscreteWaveFunction::from_normalized(v, lattice.spacing, 1e-12);
}

DiscreteWaveFunction make_gaussian(const LatticeSpec& lattice, double center, double width,
                                   double wavenumber) {
    if (!(width > 0)) throw ConfigError("gaussian width must be positive");
    const double a = lattice.spacing;
    const double L = a * lattice.sites;
    CVector v(lattice.sites);
    for (int n = 0; n < lattice.sites; ++n) {
        double d = a * n - center;
        if (lattice.boundary == Boundary::periodic) d -= L * std::round(d / L);
        v[n] = std::exp(-d * d / (2 * width * width)) * std::polar(1.0, wavenumber * d);
    }
    return DiscreteWaveFunction::normalize(v, a);
}

double locality_score(const DiscreteWaveFunction& psi) {
    double s = 0;
    for (int n = 0; n < psi.size(); ++n) {
        double p = psi.probability(n);
        s += p * p;
    }
    return s;
}

bool is_local(const DiscreteWaveFunction& psi, double threshold) {
    return locality_score(psi) >= threshold;
}

std::string to_json(const DiscreteWaveFunction& psi) {
    nlohmann::json j;
    j["sites"] = psi.size();
    j["spacing"] = psi.spacing();
    auto arr = nlohmann::json::array();
    for (int n = 0; n < psi.size(); ++n)
        arr.push_back({psi.amplitudes()[n].real(), psi.amplitudes()[n].imag()});
    j["amplitudes"] = arr;
    return j.dump();
}

DiscreteWaveFunction wave_function_from_json(const std::string& text) {
    try {
        auto j = nlohmann::json::parse(text);
        int M = j.at("sites").get<int>();
        double a = j.at("spacing").get<double>();
        const auto& arr = j.at("amplitudes");
        if (static_cast<int>(arr.size()) != M) throw ConfigError("amplitude count != sites");
        CVector v(M);
        for (int n = 0; n < M; ++n) v[n] = Complex(arr[n].at(0).get<double>(), arr[n].at(1).get<double>());
        return DiscreteWaveFunction::from_normalized(v, a);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad wave function json: ") + e.what());
    }
}

}  // namespace corrlab
