#pragma once
// Local densities sigma_p from exact counts modulo p^k, and the singular series.

#include <string>
#include <vector>

#include <gmpxx.h>

#include "qdl/form.hpp"

namespace qdl {

enum class NkMethod { Auto, Convolution, Lift };

// #{x mod p^k : Q(x) = 0 mod p^k}.
// Convolution of square-count tables needs p^{2k} <= budget. Lift is a Hensel
// recursion on the p-adic valuations of the coefficients and works for any k.
mpz_class nk_count(const DiagonalForm& Q, i64 p, int k, NkMethod m = NkMethod::Auto, double budget = 1e7);

struct LocalDensity {
    i64 p = 0;
    std::vector<mpq_class> partials;  // p^{-k(n-1)} N_k for k = 0, 1, ...
    double value = 0;
    double err = 0;
    double tail_ratio = 0;
    std::string method;  // exact-stable, extrapolated, unconverged
};

LocalDensity sigma_p(const DiagonalForm& Q, i64 p, int kmax = 40);
// Closed form valid for odd p not dividing Delta.
double sigma_p_closed(const DiagonalForm& Q, i64 p);

struct SingularSeries {
    double value = 0;
    double lo = 0, hi = 0;  // interval accounting for primes above the cutoff
    i64 cutoff = 0;
    std::vector<LocalDensity> bad;  // primes dividing 2 Delta
    std::string tail;
};

SingularSeries singular_series(const DiagonalForm& Q, i64 P0 = 10000);

struct StagReport {
    int checked = 0;
    int violations = 0;
    double max_ratio = 0;  // max N_k / (4 p^{k(n-1)})
};
StagReport stag_check(const DiagonalForm& Q, double budget = 1e7, int kmax_lift = 12);

}  // namespace qdl
