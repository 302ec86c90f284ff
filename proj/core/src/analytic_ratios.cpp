#include "corrlab/analytic_ratios.hpp"

#include <cmath>
#include <initializer_list>

#include "corrlab/types.hpp"

namespace corrlab::ratios {

namespace {

using ld = long double;

// Neumaier summation
ld ksum(std::initializer_list<ld> terms) {
    ld s = 0, c = 0;
    for (ld t : terms) {
        ld u = s + t;
        if (std::fabs(s) >= std::fabs(t))
            c += (s - u) + t;
        else
            c += (t - u) + s;
        s = u;
    }
    return s + c;
}

ld L(double x) { return std::log(static_cast<ld>(x)); }

}  // namespace

void RatioInputs::validate() const {
    if (M < 2) throw ConfigError("ratio inputs need M >= 2");
    if (!(a > 0)) throw ConfigError("ratio inputs need a > 0");
    if (!(a * B2 > 0 && a * B2 < 1)) throw ConfigError("ratio inputs need 0 < a*B2 < 1");
    if (!(alpha > 0)) throw ConfigError("ratio inputs need alpha > 0");
    if (K < 2) throw ConfigError("ratio inputs need K >= 2");
}

double homogeneous_contribution(const RatioInputs& in) {
    in.validate();
    const ld M = static_cast<ld>(in.M);
    return static_cast<double>(2 * M * std::log(static_cast<ld>(in.a) * M));
}

double inhomogeneous_contribution(const RatioInputs& in) {
    in.validate();
    const ld M1 = static_cast<ld>(in.M - 1);
    const ld a = in.a;
    return static_cast<double>(
        -2 * ksum({L(in.B2), M1 * std::log1p(-a * in.B2), -M1 * std::log(a * M1)}));
}

double log_contribution_ratio_exact(const RatioInputs& in) {
    in.validate();
    const ld M = static_cast<ld>(in.M), M1 = M - 1, a = in.a;
    ld s = ksum({L(in.B2), M1 * std::log1p(-a * in.B2), M * std::log(a * M), -M1 * std::log(a * M1)});
    return static_cast<double>(2 * s);
}

double contribution_ratio_exact(const RatioInputs& in) {
    return std::exp(log_contribution_ratio_exact(in));
}

double log_contribution_ratio_rearranged(const RatioInputs& in) {
    in.validate();
    const ld M = static_cast<ld>(in.M), M1 = M - 1, a = in.a;
    ld s = ksum({std::log(M), std::log(a * in.B2), M1 * std::log1p(-a * in.B2),
                 M1 * std::log1p(1 / M1)});
    return static_cast<double>(2 * s);
}

double contribution_ratio_rearranged(const RatioInputs& in) {
    return std::exp(log_contribution_ratio_rearranged(in));
}

double log_contribution_ratio_asymptotic(const RatioInputs& in) {
    in.validate();
    const ld M = static_cast<ld>(in.M), M1 = M - 1, a = in.a;
    ld s = ksum({std::log(M), std::log(a * in.B2), M1 * std::log1p(-a * in.B2), 1});
    return static_cast<double>(2 * s);
}

double contribution_ratio_asymptotic(const RatioInputs& in) {
    return std::exp(log_contribution_ratio_asymptotic(in));
}

double log_reduced_form(const RatioInputs& in) {
    in.validate();
    const ld M = static_cast<ld>(in.M), M1 = M - 1, a = in.a;
    return static_cast<double>(2 * ksum({std::log(M), M1 * std::log1p(-a * in.B2)}));
}

double reduced_form(const RatioInputs& in) { return std::exp(log_reduced_form(in)); }

AlphaThreshold alpha_threshold(const RatioInputs& in) {
    in.validate();
    double x = 1.0 - in.a * in.B2;
    AlphaThreshold t;
    t.threshold = x * x;
    t.schrodinger_dominates = in.alpha < t.threshold;
    t.global_bound = 1.0 / (static_cast<double>(in.K) * static_cast<double>(in.K));
    return t;
}

}  // namespace corrlab::ratios
