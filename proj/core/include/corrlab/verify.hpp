#pragma once

#include <string>
#include <vector>

#include "corrlab/records.hpp"

namespace corrlab {

enum class ClaimStatus { pass, fail, not_run, integrity_error };

std::string to_string(ClaimStatus s);

struct ClaimRow {
    std::string claim;
    std::string experiment;
    ClaimStatus status;
    double margin;
    std::string detail;
};

std::vector<ClaimRow> verify_claims(const std::vector<LoadedRecord>& records);

std::string claim_matrix_text(const std::vector<ClaimRow>& rows);

}  // namespace corrlab
