#include "corrlab/measure_weight.hpp"

#include <cmath>

namespace corrlab {

double slice_log_measure(const DiscreteWaveFunction& psi) {
    double s = 0;
    for (int n = 0; n < psi.size(); ++n) s -= 2.0 * std::log(std::norm(psi.amplitudes()[n]));
    return s;
}

LogMeasure measure_log_density(const WaveHistory& history) {
    const double floor = history.lattice().amplitude_floor() * (1.0 - 1e-12);
    double total = 0;
    for (int t = history.first_free(); t <= history.last_free(); ++t) {
        const auto& psi = history[t];
        for (int n = 0; n < psi.size(); ++n) {
            double p = std::norm(psi.amplitudes()[n]);
            if (!(p >= floor)) throw AmplitudeFloorViolation(t, n, p, floor);
        }
        total += slice_log_measure(psi);
    }
    return {total};
}

double reduced_action(const std::vector<CVector>& slices, const CMatrix& h, double spacing,
                      double dt, double hbar) {
    Complex acc(0.0, 0.0);
    double scale = 0;
    for (size_t t = 0; t + 1 < slices.size(); ++t) {
        const CVector& p = slices[t];
        const CVector& q = slices[t + 1];
        CVector m = 0.5 * (p + q);
        Complex pq = spacing * p.dot(q);
        Complex qp = spacing * q.dot(p);
        Complex e = spacing * m.dot(h * m);
        acc += Complex(0.0, -0.5) * (pq - qp) - (dt / hbar) * e;
        scale += std::abs(pq) + std::abs(dt / hbar * e);
    }
    if (std::abs(acc.imag()) > 1e-12 * std::max(1.0, scale))
        throw SolverError("action accumulator is not real");
    return acc.real();
}

ActionPhase action_phase(const WaveHistory& history, const LatticeHamiltonian& h) {
    const auto& l = history.lattice();
    if (l.sites != h.dim()) throw DimensionMismatch("history size differs from hamiltonian");
    std::vector<CVector> sl;
    sl.reserve(history.size());
    for (const auto& s : history.slices()) sl.push_back(s.amplitudes());
    return {reduced_action(sl, h.h(), l.spacing, l.dt, l.hbar) / l.alpha};
}

ActionExpansion action_expansion(const WaveHistory& history, const LatticeHamiltonian& h) {
    const auto& l = history.lattice();
    if (l.sites != h.dim()) throw DimensionMismatch("history size differs from hamiltonian");
    const int M = l.sites, T = history.size();
    const int f0 = history.first_free(), f1 = history.last_free();
    const int nf = f1 - f0 + 1;
    if (nf < 1) throw ConfigError("history has no free slices");
    const double a = l.spacing;

    // reduced action as z^dag A z on the stacked slices
    CMatrix A = CMatrix::Zero(M * T, M * T);
    CMatrix diag = -(l.dt * a / (4.0 * l.hbar)) * h.h();
    CMatrix id = CMatrix::Identity(M, M);
    for (int t = 0; t + 1 < T; ++t) {
        A.block(t * M, t * M, M, M) += diag;
        A.block((t + 1) * M, (t + 1) * M, M, M) += diag;
        A.block(t * M, (t + 1) * M, M, M) += diag + Complex(0.0, -a / 2) * id;
        A.block((t + 1) * M, t * M, M, M) += diag + Complex(0.0, a / 2) * id;
    }
    CVector z(M * T);
    for (int t = 0; t < T; ++t) z.segment(t * M, M) = history[t].amplitudes();

    ActionExpansion ex;
    std::vector<CVector> sl;
    for (const auto& s : history.slices()) sl.push_back(s.amplitudes());
    ex.value = reduced_action(sl, h.h(), a, l.dt, l.hbar);
    ex.free_slices = nf;
    ex.sites = M;

    const int n = nf * M;
    CVector g = (A * z).segment(f0 * M, n);
    ex.gradient.resize(2 * n);
    ex.gradient << 2.0 * g.real(), 2.0 * g.imag();
    CMatrix Af = A.block(f0 * M, f0 * M, n, n);
    ex.quadratic.resize(2 * n, 2 * n);
    ex.quadratic << Af.real(), -Af.imag(), Af.imag(), Af.real();
    return ex;
}

double fluctuation_log_magnitude(const ActionExpansion& ex, double alpha, double radius) {
    if (!(alpha > 0) || !(radius > 0)) throw ConfigError("alpha and radius must be positive");
    Eigen::SelfAdjointEigenSolver<RMatrix> es(ex.quadratic);
    if (es.info() != Eigen::Success) throw SolverError("eigensolver failed");
    RVector l = es.eigenvectors().transpose() * ex.gradient;
    const double r2 = 1.0 / (radius * radius);
    double s = 0;
    for (int i = 0; i < l.size(); ++i) {
        Complex c(r2, -es.eigenvalues()[i] / alpha);
        double ac2 = std::norm(c);
        double li = l[i] / alpha;
        s += 0.5 * std::log(M_PI) - 0.25 * std::log(ac2) - li * li * r2 / (4.0 * ac2);
    }
    return s;
}

namespace {

// Golub-Welsch nodes and weights for exp(-u^2)
void gauss_hermite(int n, RVector& x, RVector& w) {
    RMatrix J = RMatrix::Zero(n, n);
    for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(k / 2.0);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(J);
    x = es.eigenvalues();
    w = std::sqrt(M_PI) * es.eigenvectors().row(0).transpose().array().square();
}

Complex tensor_sum(const ActionExpansion& ex, double alpha, double radius, int nodes,
                   long long& evals) {
    const int d = static_cast<int>(ex.gradient.size());
    RVector x, w;
    gauss_hermite(nodes, x, w);
    std::vector<int> idx(d, 0);
    RVector pt(d);
    Complex total(0.0, 0.0);
    while (true) {
        double wt = 1;
        for (int k = 0; k < d; ++k) {
            pt[k] = radius * x[idx[k]];
            wt *= w[idx[k]];
        }
        double ph = (ex.gradient.dot(pt) + pt.dot(ex.quadratic * pt)) / alpha;
        total += wt * std::polar(1.0, ph);
        ++evals;
        int k = 0;
        while (k < d && ++idx[k] == nodes) idx[k++] = 0;
        if (k == d) break;
    }
    return total * std::pow(radius, d);
}

}  // namespace

QuadratureResult fluctuation_quadrature(const ActionExpansion& ex, double alpha, double radius,
                                        int nodes, double tol) {
    const int d = static_cast<int>(ex.gradient.size());
    const int coarse = std::max(2, (2 * nodes) / 3);
    double cost = std::pow(double(nodes), d) + std::pow(double(coarse), d);
    if (cost > 5e8) throw BudgetExceeded(cost, 5e8);
    QuadratureResult r{};
    Complex fine = tensor_sum(ex, alpha, radius, nodes, r.evaluations);
    Complex rough = tensor_sum(ex, alpha, radius, coarse, r.evaluations);
    r.value = fine;
    r.error_estimate = std::abs(fine - rough) / std::max(std::abs(fine), 1e-300);
    if (!(r.error_estimate <= tol))
        throw QuadratureError("Gauss-Hermite quadrature did not converge", r.error_estimate);
    return r;
}

double default_radius(const LatticeSpec& lattice, double factor) {
    return factor / std::sqrt(lattice.spacing * lattice.sites);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("slope fit needs two points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace corrlab
