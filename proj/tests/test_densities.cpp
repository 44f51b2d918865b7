#include "doctest.h"

#include <cmath>

#include "qdl/corpus.hpp"
#include "qdl/densities.hpp"
#include "qdl/expsums.hpp"

using namespace qdl;

namespace {
// points mod m by nested loops
long brute_nk(const std::vector<i64>& A, i64 m) {
    std::size_t n = A.size();
    std::vector<i64> x(n, 0);
    long cnt = 0;
    while (true) {
        i64 s = 0;
        for (std::size_t i = 0; i < n; ++i) s = (s + A[i] % m * x[i] % m * x[i]) % m;
        cnt += (s % m + m) % m == 0;
        std::size_t k = n;
        while (k > 0) {
            --k;
            if (++x[k] < m) break;
            x[k] = 0;
            if (k == 0) return cnt;
        }
    }
}
}  // namespace

TEST_CASE("N_k(p) by enumeration") {
    auto Q = parse_form("1,1,1,-1");
    CHECK(nk_count(Q, 3, 1) == 21);
    CHECK(brute_nk(Q.coeffs64(), 3) == 21);
    for (auto s : {"1,1,1,-1", "3,1,1,-1", "9,5,-1,-1", "2,-4,3,1", "1,-1,-1,-1,-1"}) {
        auto F = parse_form(s);
        for (i64 p : {2, 3, 5}) {
            for (int k = 1; k <= 3; ++k) {
                double pts = std::pow((double)std::pow(p, k), (double)F.n());
                if (pts > 4e5) break;
                long b = brute_nk(F.coeffs64(), (i64)std::pow(p, k));
                CHECK(nk_count(F, p, k, NkMethod::Convolution) == b);
                CHECK(nk_count(F, p, k, NkMethod::Lift) == b);
            }
        }
    }
}

TEST_CASE("Hensel lift agrees with convolution") {
    CorpusSpec cs;
    cs.seed = 17;
    cs.ns = {4, 5};
    cs.amax = 50;
    cs.count = 10;
    for (auto& Q : generate_corpus(cs))
        for (i64 p : {2, 3, 5, 7})
            for (int k = 1; std::pow((double)p, 2.0 * k) <= 2e6; ++k)
                CHECK(nk_count(Q, p, k, NkMethod::Lift) == nk_count(Q, p, k, NkMethod::Convolution));
}

TEST_CASE("sigma_3 of (1,1,1,-1)") {
    auto Q = parse_form("1,1,1,-1");
    auto d = sigma_p(Q, 3);
    CHECK(d.value == doctest::Approx(5.0 / 6.0).epsilon(1e-9));
    CHECK(d.partials[0] == 1);
    CHECK(d.partials[1] == mpq_class(7, 9));
    CHECK(d.partials[2] == mpq_class(7, 9) + mpq_class(2, 27));
    CHECK(sigma_p_closed(Q, 3) == doctest::Approx(5.0 / 6.0));
    // the Euler-factor view of the same number
    mpq_class s = 1;
    for (int t = 1; t <= 5; ++t) {
        i64 q = (i64)std::pow(3, t);
        s += mpq_class(mpz_class((long)sq_direct(Q, q, {0, 0, 0, 0}).rounded), mpz_class((long)q) * q * q * q);
        s.canonicalize();
        CHECK(s == d.partials[t]);
    }
}

TEST_CASE("closed form against the generic computation") {
    CorpusSpec cs;
    cs.seed = 23;
    cs.ns = {4, 5, 6};
    cs.count = 9;
    for (auto& Q : generate_corpus(cs)) {
        auto D = invariants_of(Q).disc;
        for (i64 p : {3, 5, 7, 11, 13}) {
            if (mpz_divisible_ui_p(D.get_mpz_t(), p)) continue;
            CHECK(sigma_p(Q, p).value == doctest::Approx(sigma_p_closed(Q, p)).epsilon(1e-10));
            if (Q.n() == 4) {
                double f = sigma_p_closed(Q, p) * (1 - kronecker(D, p) / (double)p);
                CHECK(std::fabs(f - 1) <= 5 * std::pow((double)p, -1.5));
            }
        }
    }
}

TEST_CASE("permutation invariance and the bad primes") {
    auto Q = parse_form("9,5,-1,-1");
    auto P = permuted(Q, {3, 1, 0, 2});
    for (i64 p : {2, 3, 5}) CHECK(sigma_p(Q, p).value == doctest::Approx(sigma_p(P, p).value).epsilon(1e-12));
    for (i64 p : {3, 5}) CHECK(sigma_p(Q, p).value <= 4.0);
}

TEST_CASE("stag inequality") {
    CHECK(stag_check(parse_form("1,1,1,-1")).checked == 0);
    auto a = stag_check(parse_form("3,1,1,-1"));
    CHECK(a.checked > 0);
    CHECK(a.violations == 0);
    auto b = stag_check(parse_form("9,5,-1,-1"));
    CHECK(b.violations == 0);
    CHECK(b.max_ratio <= 1.0);
}

TEST_CASE("singular series") {
    auto s = singular_series(parse_form("1,1,1,-1"));
    CHECK(s.value > 0);
    CHECK(s.lo <= s.value);
    CHECK(s.value <= s.hi);
    auto t = singular_series(parse_form("1,1,1,1,-1"));
    CHECK(t.value > 0);
    CHECK(t.hi - t.lo < 0.02 * t.value);
    CHECK_THROWS(singular_series(parse_form("1,1,-1,-1")));
}
