#pragma once
// Complete exponential sums S_q(c) = sum_{(a,q)=1} sum_{b mod q} e_q(a Q(b) + b.c).

#include <cstddef>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qdl/form.hpp"

namespace qdl {

struct ExpSumValue {
    double value = 0;
    double imag = 0;  // leftover imaginary part of the accumulation
    double err = 0;
    long long rounded = 0;
};

class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr i64 kDefaultExpSumCap = 5000;

// O(n q^2) evaluation straight from the definition.
ExpSumValue sq_direct(const DiagonalForm& Q, i64 q, const std::vector<i64>& c, i64 cap = kDefaultExpSumCap);
// Product of sq_direct over the prime-power factors of q.
ExpSumValue sq_multiplicative(const DiagonalForm& Q, i64 q, const std::vector<i64>& c, i64 cap = kDefaultExpSumCap);
// n = 4, odd p not dividing the discriminant.
long long sp_closed(const DiagonalForm& Q, i64 p, const std::vector<i64>& c);

struct BoundRatios {
    double abs_value = 0;
    double general = 0;   // |S| / (q^3 prod gcd(q, A_i)^{1/2})
    double sqfree = -1;   // |S| / (q^{5/2} gcd(q, D Q^{-1}(c))^{1/2} prod gcd(q, A_i)^{1/2}); -1 if q not square-free
};
BoundRatios sq_bound_check(const DiagonalForm& Q, i64 q, const std::vector<i64>& c);

// Fast exact evaluator: prime-power values via completed squares against cached
// quadratic Gauss sums (direct sums on axes where that is not possible), then
// multiplicativity. Values are memoised per (prime power, |c| vector).
class ExpSumEngine {
public:
    explicit ExpSumEngine(const DiagonalForm& Q, i64 cap = kDefaultExpSumCap);
    // Exact S_q(c) as a floating value (integer-valued).
    double S(i64 q, const std::vector<i64>& c);
    // S at a prime power, rounded; throws if the rounding is not clean.
    long long S_prime_power(i64 p, int t, const std::vector<i64>& c);
    const DiagonalForm& form() const { return Q_; }

private:
    DiagonalForm Q_;
    std::vector<i64> A_;
    i64 cap_;
    std::map<std::pair<i64, std::vector<i64>>, long long> memo_;
};

double partial_sum_abs(const DiagonalForm& Q, i64 Y, const std::vector<i64>& c, i64 cap = kDefaultExpSumCap);
double partial_sum_signed(const DiagonalForm& Q, i64 Y, const std::vector<i64>& c, i64 cap = kDefaultExpSumCap);
// Cumulative sums at every Y in ys (ascending) in one pass.
std::vector<double> partial_sums_abs_at(ExpSumEngine& E, const std::vector<i64>& ys, const std::vector<i64>& c);
// Least-squares slope of log(value) against log(Y).
double growth_fit(const std::vector<std::pair<double, double>>& samples);
// sum_{q <= Y} q^{-n} S_q(0)
double singular_partial(const DiagonalForm& Q, i64 Y, i64 cap = kDefaultExpSumCap);

}  // namespace qdl
