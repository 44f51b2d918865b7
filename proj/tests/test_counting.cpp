#include "doctest.h"

#include <cmath>
#include <numeric>

#include "qdl/corpus.hpp"
#include "qdl/counting.hpp"

using namespace qdl;

namespace {
// plain nested loops, no shared code with the library
template <class F>
void each_point(std::size_t n, i64 B, F&& f) {
    std::vector<i64> x(n, -B);
    while (true) {
        f(x);
        std::size_t k = n;
        while (k > 0) {
            --k;
            if (++x[k] <= B) break;
            x[k] = -B;
            if (k == 0) return;
        }
    }
}

i64 value(const std::vector<i64>& A, const std::vector<i64>& x) {
    i64 s = 0;
    for (std::size_t i = 0; i < A.size(); ++i) s += A[i] * x[i] * x[i];
    return s;
}
}  // namespace

TEST_CASE("anchor counts") {
    CHECK(count_box(parse_form("1,1,-1,-1"), 1).count == 33);
    CHECK(count_box(parse_form("1,1,1,-1"), 1).count == 13);
}

TEST_CASE("box counts agree across methods and with nested loops") {
    CorpusSpec cs;
    cs.seed = 11;
    cs.ns = {3, 4, 5};
    cs.amax = 7;
    cs.count = 12;
    for (auto& Q : generate_corpus(cs)) {
        auto A = Q.coeffs64();
        for (i64 B : {1, 2, 3}) {
            u64 loops = 0;
            each_point(Q.n(), B, [&](const std::vector<i64>& x) { loops += value(A, x) == 0; });
            CHECK(count_box(Q, B, CountMethod::Brute).count == loops);
            CHECK(count_box(Q, B, CountMethod::Mitm).count == loops);
            CHECK(enumerate_oracle(Q, B).size() == loops);
        }
    }
}

TEST_CASE("energy and primitive counts") {
    auto Q = parse_form("2,3,-1,-5");
    auto A = Q.coeffs64();
    for (i64 X : {1, 5, 20, 60}) {
        u64 loops = 0;
        each_point(4, 8, [&](const std::vector<i64>& x) {
            bool in = true;
            for (std::size_t i = 0; i < 4; ++i) in = in && std::abs(A[i]) * x[i] * x[i] <= X;
            loops += in && value(A, x) == 0;
        });
        CHECK(count_energy(Q, X).count == loops);
    }
    for (i64 B : {1, 3, 5}) {
        u64 loops = 0;
        each_point(4, B, [&](const std::vector<i64>& x) {
            i64 g = 0;
            for (i64 v : x) g = std::gcd(g, v);
            loops += g == 1 && value(A, x) == 0;
        });
        CHECK(count_primitive(Q, B).count == loops);
    }
}

TEST_CASE("enumeration is sorted and complete") {
    auto pts = enumerate_oracle(parse_form("1,1,-2"), 4);
    CHECK(std::is_sorted(pts.begin(), pts.end()));
    for (auto& x : pts) CHECK(x[0] * x[0] + x[1] * x[1] - 2 * x[2] * x[2] == 0);
    CHECK_THROWS_AS(enumerate_oracle(parse_form("1,1,-1,-1,1,1"), 50, 1e6), BudgetExceeded);
}

TEST_CASE("weighted count equals the sum of the weight over zeros") {
    for (auto s : {"1,-1,-1,-1", "1,1,1,-1", "2,-1,-3,1,-1"}) {
        auto Q = parse_form(s);
        for (auto w : {WeightDescriptor::wdag(Q.n()), WeightDescriptor::wq(Q)}) {
            for (i64 B : {2, 3}) {
                double direct = 0;
                for (auto& x : enumerate_oracle(Q, 3 * B + 1)) {
                    std::vector<double> u(x.size());
                    for (std::size_t i = 0; i < x.size(); ++i) u[i] = (double)x[i] / B;
                    direct += weight_eval(w, u);
                }
                CHECK(count_weighted(Q, B, w) == doctest::Approx(direct).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("memory budget") {
    CHECK_THROWS_AS(count_box(parse_form("1,1,1,-1,-1,-1"), 200, CountMethod::Mitm, 1000), BudgetExceeded);
    CHECK_THROWS(count_box(parse_form("1,1,-1"), -1));
}
