#include "doctest.h"

#include <random>

#include "qdl/arith.hpp"
#include "qdl/form.hpp"

using namespace qdl;

namespace {
FormErrorKind kind_of(const std::string& s, bool primitive = false) {
    try {
        parse_form(s, primitive);
    } catch (const FormError& e) {
        return e.kind;
    }
    FAIL("no error for " << s);
    return FormErrorKind::Range;
}

// Euler's criterion, for odd primes only
int legendre_slow(i64 a, i64 p) {
    a = ((a % p) + p) % p;
    if (a == 0) return 0;
    i64 r = 1;
    for (i64 e = 0; e < (p - 1) / 2; ++e) r = r * a % p;
    return r == 1 ? 1 : -1;
}
}  // namespace

TEST_CASE("parsing and validation") {
    auto Q = parse_form("1, 1,-1,-1");
    CHECK(Q.n() == 4);
    CHECK(Q.a(2) == -1);
    CHECK(Q.str() == "1,1,-1,-1");
    CHECK(kind_of("1,1") == FormErrorKind::TooShort);
    CHECK(kind_of("1,0,-1") == FormErrorKind::ZeroCoefficient);
    CHECK(kind_of("1,2,3") == FormErrorKind::Definite);
    CHECK(kind_of("2,4,-6", true) == FormErrorKind::NotPrimitive);
    CHECK(kind_of("1,x,-1") == FormErrorKind::Parse);
    CHECK(kind_of("1,,-1") == FormErrorKind::Parse);
    CHECK_NOTHROW(parse_form("2,4,-6"));
}

TEST_CASE("invariants") {
    auto inv = invariants_of(parse_form("2,3,-5"));
    CHECK(inv.disc == -30);
    CHECK(inv.min_coeff == 2);
    CHECK(inv.height == 5);
    CHECK(delta_n(4) == 0);
    CHECK(delta_n(5) == 0);
    CHECK(delta_n(6) == 1);
    CHECK(delta_n(7) == 0);
    CHECK(delta_n(8) == 1);
    auto Q = parse_form("1,2,-3");
    // Delta = -6: (-6/1) 1 + (-6/2) 4 + (-6/-3) 9
    CHECK(q_inverse_scaled(Q, {1, 2, 3}) == -6 - 12 + 18);
}

TEST_CASE("evaluation uses exact arithmetic") {
    auto Q = parse_form("1000000007,-1,-1");
    CHECK(evaluate(Q, {100000, 3, 4}) == mpz_class("10000000070000000000") - 25);
}

TEST_CASE("normalisation and orientation") {
    auto N = normalize_for_delta(parse_form("-1,-2,3,4"));
    CHECK(N.form.str() == "3,-1,-2,4");
    CHECK(N.perm == std::vector<std::size_t>{2, 0, 1, 3});
    auto O = orient_for_weight(parse_form("1,1,1,1,-1"));
    CHECK(O.form.str() == "1,-1,-1,-1,-1");
    CHECK(O.sign == -1);
    CHECK(O.perm[0] == 4);
    // zero sets correspond
    std::vector<i64> x{3, 0, 0, 4, 5};
    std::vector<i64> y(5);
    for (std::size_t k = 0; k < 5; ++k) y[k] = x[O.perm[k]];
    CHECK(evaluate(parse_form("1,1,1,1,-1"), x) == 0);
    CHECK(evaluate(O.form, y) == 0);
    auto P = permuted(parse_form("1,2,-3"), {2, 0, 1});
    CHECK(P.str() == "-3,1,2");
}

TEST_CASE("kronecker symbol against Euler's criterion") {
    for (i64 p : primes_up_to(200)) {
        if (p == 2) continue;
        for (i64 a = -50; a <= 50; ++a) CHECK(kronecker(a, p) == legendre_slow(a, p));
    }
    // (d | 2) for d = 1 mod 8, 5 mod 8
    CHECK(kronecker(17, 2) == 1);
    CHECK(kronecker(5, 2) == -1);
    CHECK(kronecker(-1, 1) == 1);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 2000; ++i) {
        i64 a = (i64)(rng() % 2001) - 1000, m = 1 + (i64)(rng() % 300), k = 1 + (i64)(rng() % 300);
        CHECK(kronecker(a, m * k) == kronecker(a, m) * kronecker(a, k));
        CHECK(kronecker(mpz_class((long)a), m) == kronecker(a, m));
    }
}

TEST_CASE("arithmetic helpers") {
    CHECK(fundamental_discriminant(-1) == -4);
    CHECK(fundamental_discriminant(5) == 5);
    CHECK(fundamental_discriminant(12) == 12);
    CHECK(fundamental_discriminant(18) == 8);
    CHECK(fundamental_discriminant(-3) == -3);
    CHECK(fundamental_discriminant(-27) == -3);
    CHECK(is_square(mpz_class(49)));
    CHECK_FALSE(is_square(mpz_class(-4)));
    CHECK(mobius(30) == -1);
    CHECK(mobius(12) == 0);
    CHECK(euler_phi(36) == 12);
    CHECK(vp(mpz_class(72), 2) == 3);
    CHECK_THROWS(ipow(10, 30));
    auto f = factorize(360);
    CHECK(f == std::vector<std::pair<i64, int>>{{2, 3}, {3, 2}, {5, 1}});
}
