#include "corrlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace corrlab {

std::string to_string(ClaimStatus s) {
    switch (s) {
        case ClaimStatus::pass: return "pass";
        case ClaimStatus::fail: return "fail";
        case ClaimStatus::not_run: return "not run";
        case ClaimStatus::integrity_error: return "integrity error";
    }
    return "?";
}

namespace {

struct ClaimSpec {
    const char* claim;
    ExperimentKind kind;
    std::vector<std::string> checks;
};

const std::vector<ClaimSpec>& claims() {
    static const std::vector<ClaimSpec> c{
        {"analytic_identities", ExperimentKind::ratios_sweep,
         {"exact_equals_log_difference", "exact_equals_rearranged", "asymptotic_convergence"}},
        {"local_measure_dominance", ExperimentKind::measure_dominance,
         {"inhomogeneous_exceeds_homogeneous", "matches_analytic", "reduced_form_below_one"}},
        {"solution_fluctuation_scaling", ExperimentKind::alpha_scaling, {"solution_slope"}},
        {"nonsolution_fluctuation_scaling", ExperimentKind::alpha_scaling, {"nonsolution_slope"}},
        {"solution_dominance_below_threshold", ExperimentKind::alpha_scaling,
         {"solution_dominates_below_threshold"}},
        {"temporal_inversion_symmetry", ExperimentKind::time_symmetry, {"magnitude_symmetry"}},
        {"collapse_history_dominance", ExperimentKind::collapse_timing,
         {"short_horizon_schrodinger_first", "long_horizon_collapse_first"}},
        {"correlator_nonlinearity", ExperimentKind::nonlinearity, {"superposition_suppressed"}},
        {"branch_probability_proportionality", ExperimentKind::born_rule, {"branch_ratio"}},
    };
    return c;
}

}  // namespace

std::vector<ClaimRow> verify_claims(const std::vector<LoadedRecord>& records) {
    std::vector<ClaimRow> rows;
    for (const auto& spec : claims()) {
        ClaimRow row{spec.claim, to_string(spec.kind), ClaimStatus::not_run, NAN, "no record"};
        const LoadedRecord* found = nullptr;
        bool tampered = false;
        std::string problem;
        for (const auto& r : records) {
            if (!r.integrity_ok) {
                // a damaged record may not even parse its kind; blame it on every claim it could serve
                if (r.record.kind == spec.kind || r.record.checks.empty()) {
                    tampered = true;
                    problem = r.dir.string() + ": " + r.problem;
                }
                continue;
            }
            if (r.record.kind == spec.kind) found = &r;
        }
        if (tampered) {
            row.status = ClaimStatus::integrity_error;
            row.detail = problem;
            rows.push_back(row);
            continue;
        }
        if (!found) {
            rows.push_back(row);
            continue;
        }
        bool ok = true;
        double margin = INFINITY;
        std::ostringstream detail;
        for (const auto& name : spec.checks) {
            const Check* c = found->record.find_check(name);
            if (!c) {
                ok = false;
                detail << name << ": missing; ";
                continue;
            }
            ok = ok && c->passed;
            margin = std::min(margin, c->margin);
            detail << name << ": " << (c->passed ? "pass" : "FAIL") << " (measured "
                   << format_double(c->measured) << ", threshold " << format_double(c->threshold) << "); ";
        }
        row.status = ok ? ClaimStatus::pass : ClaimStatus::fail;
        row.margin = margin;
        row.detail = detail.str();
        rows.push_back(row);
    }
    return rows;
}

std::string claim_matrix_text(const std::vector<ClaimRow>& rows) {
    std::ostringstream os;
    for (const auto& r : rows) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.4g", r.margin);
        os << r.claim << " [" << r.experiment << "] " << to_string(r.status) << " margin=" << buf << "  "
           << r.detail << "\n";
    }
    return os.str();
}

}  // namespace corrlab
