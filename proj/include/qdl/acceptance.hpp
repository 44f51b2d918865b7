#pragma once
// The acceptance suite: numbered criteria, each producing one PASS/FAIL line.

#include <functional>
#include <string>
#include <vector>

#include "qdl/report.hpp"

namespace qdl {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

struct AcceptanceOptions {
    std::string baseline_path;  // empty: QDL_DATA_DIR/envelope_baseline.json
    std::vector<int> only;      // empty: all
};

inline constexpr int kCriteria = 13;

CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {},
                                            const std::function<void(const CriterionResult&)>& on_result = {});
std::string format_result(const CriterionResult& r);

// Envelope sweep used by criterion 13; its summary is what the baseline stores.
ojson envelope_summary();

}  // namespace qdl
