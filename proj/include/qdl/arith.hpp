#pragma once
// Elementary number theory on machine integers.

#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace qdl {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

i64 gcd64(i64 a, i64 b);
i64 mod_pos(i64 a, i64 m);
i64 mulmod(i64 a, i64 b, i64 m);
i64 ipow(i64 b, unsigned e);               // throws on overflow
bool is_prime(i64 n);
std::vector<i64> primes_up_to(i64 n);
std::vector<std::pair<i64, int>> factorize(i64 n);   // |n| >= 1, trial division
int mobius(i64 n);
i64 euler_phi(i64 n);
bool is_squarefree(i64 n);

// Kronecker symbol (a|n), n >= 0.
int kronecker(i64 a, i64 n);
int kronecker(const mpz_class& a, i64 n);

bool is_square(const mpz_class& a);
// Fundamental discriminant of Q(sqrt(d)), d non-square. Returned value D has |D| the conductor.
mpz_class fundamental_discriminant(const mpz_class& d);

// p-adic valuation of nonzero a.
int vp(const mpz_class& a, i64 p);

}  // namespace qdl
