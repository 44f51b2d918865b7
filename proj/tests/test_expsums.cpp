#include "doctest.h"

#include <cmath>
#include <complex>
#include <numeric>

#include "qdl/corpus.hpp"
#include "qdl/expsums.hpp"

using namespace qdl;

namespace {
// S_q(c) with std::polar, straight from the definition
double naive(const std::vector<i64>& A, i64 q, const std::vector<i64>& c) {
    std::size_t n = A.size();
    std::complex<double> tot = 0;
    for (i64 a = 1; a <= q; ++a) {
        if (std::gcd(a, q) != 1) continue;
        std::complex<double> prod = 1;
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<double> g = 0;
            for (i64 b = 0; b < q; ++b) {
                i64 e = ((a * A[i] % q * b % q * b + b * c[i]) % q + q) % q;
                g += std::polar(1.0, 2 * M_PI * (double)e / (double)q);
            }
            prod *= g;
        }
        tot += prod;
    }
    return tot.real();
}
}  // namespace

TEST_CASE("small values") {
    auto Q = parse_form("1,1,1,-1");
    CHECK(sq_direct(Q, 1, {0, 0, 0, 0}).rounded == 1);
    CHECK(sq_direct(Q, 2, {0, 0, 0, 0}).rounded == 0);
    CHECK(sq_direct(Q, 3, {0, 0, 0, 0}).rounded == -18);
    CHECK(sp_closed(Q, 3, {0, 0, 0, 0}) == -18);
    for (i64 q = 1; q <= 30; ++q)
        for (auto c : std::vector<std::vector<i64>>{{0, 0, 0, 0}, {1, 0, 2, 0}, {1, 1, 1, 1}})
            CHECK(sq_direct(Q, q, c).value == doctest::Approx(naive(Q.coeffs64(), q, c)).epsilon(1e-9));
}

TEST_CASE("multiplicativity, exhaustive to 400") {
    auto Q = parse_form("3,1,-2,5");
    std::vector<i64> c{1, 0, 2, 1};
    std::vector<double> v(401);
    for (i64 q = 1; q <= 400; ++q) v[q] = sq_direct(Q, q, c).value;
    for (i64 u = 2; u <= 400; ++u)
        for (i64 w = 2; u * w <= 400; ++w)
            if (std::gcd(u, w) == 1) CHECK(std::fabs(v[u * w] - v[u] * v[w]) < 1e-6);
    for (i64 q = 1; q <= 400; ++q) CHECK(std::fabs(sq_multiplicative(Q, q, c).value - v[q]) < 1e-6);
}

TEST_CASE("closed form at primes, both branches") {
    CorpusSpec cs;
    cs.seed = 5;
    cs.ns = {4};
    cs.count = 6;
    int zero_branch = 0, unit_branch = 0;
    for (auto& Q : generate_corpus(cs)) {
        auto D = invariants_of(Q).disc;
        for (i64 p : primes_up_to(101)) {
            if (p == 2 || mpz_divisible_ui_p(D.get_mpz_t(), p)) continue;
            for (auto c : std::vector<std::vector<i64>>{{0, 0, 0, 0}, {1, 0, 0, 0}, {1, 1, 0, 0}, {2, 1, 1, 3}}) {
                CHECK(sp_closed(Q, p, c) == sq_direct(Q, p, c).rounded);
                (mpz_divisible_ui_p(q_inverse_scaled(Q, c).get_mpz_t(), p) ? zero_branch : unit_branch)++;
            }
        }
        CHECK_THROWS(sp_closed(Q, 2, {0, 0, 0, 0}));
    }
    CHECK(zero_branch > 0);
    CHECK(unit_branch > 0);
}

TEST_CASE("engine agrees with direct summation") {
    for (auto s : {"1,1,1,-1", "4,-6,9,1", "1,-1,-1,-1,-1", "2,-8,3,5,-7"}) {
        auto Q = parse_form(s);
        ExpSumEngine E(Q);
        std::vector<std::vector<i64>> cs{std::vector<i64>(Q.n(), 0), std::vector<i64>(Q.n(), 1)};
        cs.push_back(std::vector<i64>(Q.n(), 0));
        cs.back()[0] = 3;
        cs.back()[1] = -2;
        for (auto& c : cs)
            for (i64 q = 1; q <= 150; ++q) CHECK(std::fabs(E.S(q, c) - sq_direct(Q, q, c).value) < 1e-6);
    }
}

TEST_CASE("symmetry and integrality") {
    auto Q = parse_form("2,-3,5,-7");
    for (i64 q : {7, 12, 45, 128, 243}) {
        auto a = sq_direct(Q, q, {1, -2, 3, 4});
        auto b = sq_direct(Q, q, {-1, 2, -3, -4});
        CHECK(a.rounded == b.rounded);
        CHECK(std::fabs(a.value - a.rounded) < 1e-6);
        CHECK(std::fabs(a.imag) < 1e-6);
    }
}

TEST_CASE("bounds and partial sums") {
    auto Q = parse_form("1,1,1,-1");
    auto r = sq_bound_check(Q, 15, {0, 0, 0, 0});
    CHECK(r.general <= 1.0);
    CHECK(r.sqfree > 0);
    CHECK(sq_bound_check(Q, 9, {0, 0, 0, 0}).sqfree == -1);
    double s = 0;
    for (i64 q = 1; q <= 50; ++q) s += std::fabs(sq_direct(Q, q, {1, 0, 0, 0}).value);
    CHECK(partial_sum_abs(Q, 50, {1, 0, 0, 0}) == doctest::Approx(s));
    double sp = 0;
    for (i64 q = 1; q <= 50; ++q) sp += sq_direct(Q, q, {0, 0, 0, 0}).value / std::pow((double)q, 4);
    CHECK(singular_partial(Q, 50) == doctest::Approx(sp).epsilon(1e-12));
    CHECK_THROWS_AS(sq_direct(Q, 6000, {0, 0, 0, 0}), CapExceeded);
    CHECK(growth_fit({{1, 1}, {2, 8}, {4, 64}}) == doctest::Approx(3.0));
}
