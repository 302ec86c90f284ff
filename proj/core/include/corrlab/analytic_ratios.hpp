#pragma once

#include <cstdint>

namespace corrlab::ratios {

struct RatioInputs {
    std::int64_t M = 2;
    double a = 1.0;
    double B2 = 0.5;
    double alpha = 1e-3;
    std::int64_t K = 16;

    void validate() const;  // throws ConfigError
};

// all values per slice, log scale unless stated
double homogeneous_contribution(const RatioInputs& in);
double inhomogeneous_contribution(const RatioInputs& in);

double log_contribution_ratio_exact(const RatioInputs& in);
double contribution_ratio_exact(const RatioInputs& in);

double log_contribution_ratio_rearranged(const RatioInputs& in);
double contribution_ratio_rearranged(const RatioInputs& in);

double log_contribution_ratio_asymptotic(const RatioInputs& in);
double contribution_ratio_asymptotic(const RatioInputs& in);

// [M(1-aB2)^(M-1)]^2
double log_reduced_form(const RatioInputs& in);
double reduced_form(const RatioInputs& in);

struct AlphaThreshold {
    double threshold;
    bool schrodinger_dominates;
    double global_bound;
};

AlphaThreshold alpha_threshold(const RatioInputs& in);

}  // namespace corrlab::ratios
