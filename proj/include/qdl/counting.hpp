#pragma once
// Exact zero counts of diagonal forms in boxes, energy regions and under smooth weights.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdl/config.hpp"
#include "qdl/form.hpp"
#include "qdl/weights.hpp"

namespace qdl {

enum class CountMethod { Auto, Brute, Mitm };
CountMethod parse_count_method(const std::string& s);

struct CountResult {
    u64 count = 0;
    i64 bound = 0;
    std::string method;
    double seconds = 0;
};

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, double required)
        : std::runtime_error(what + " (needs about " + std::to_string((long long)required) + " bytes)"), required_bytes(required) {}
    double required_bytes;
};

CountResult count_box(const DiagonalForm& Q, i64 B, CountMethod m = CountMethod::Auto,
                      std::size_t budget = default_budget_bytes());
CountResult count_energy(const DiagonalForm& Q, i64 X, CountMethod m = CountMethod::Auto,
                         std::size_t budget = default_budget_bytes());
// Number of zeros with |x_i| <= ranges[i].
CountResult count_ranges(const DiagonalForm& Q, const std::vector<i64>& ranges, CountMethod m,
                         std::size_t budget = default_budget_bytes());
CountResult count_primitive(const DiagonalForm& Q, i64 B, CountMethod m = CountMethod::Auto,
                            std::size_t budget = default_budget_bytes());
// sum over zeros x of w(x / B).
double count_weighted(const DiagonalForm& Q, i64 B, const WeightDescriptor& w,
                      std::size_t budget = default_budget_bytes());
// All zeros in the box, lexicographically sorted.
std::vector<std::vector<i64>> enumerate_oracle(const DiagonalForm& Q, i64 B, double max_points = 1e8);

}  // namespace qdl
