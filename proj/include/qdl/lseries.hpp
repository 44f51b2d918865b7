#pragma once
// The quadratic character attached to a form, L-series partial sums and the series D(s; c).

#include <complex>
#include <vector>

#include <gmpxx.h>

#include "qdl/form.hpp"

namespace qdl {

using cplx = std::complex<double>;

struct CharacterQ {
    mpz_class disc;  // Delta_Q
    mpz_class fund;  // fundamental discriminant of Q(sqrt(Delta)); 1 when Delta is a square
    i64 conductor = 1;
    bool principal = false;

    // Kronecker symbol (Delta | m)
    int operator()(i64 m) const { return kronecker(disc, m); }
    // The primitive character (D | m) underlying it; agrees with operator() at primes p not dividing 2 Delta.
    int primitive(i64 m) const { return principal ? 1 : kronecker(fund, m); }
};

CharacterQ character_of(const DiagonalForm& Q);
CharacterQ character_of_disc(const mpz_class& disc);
int chi_q(const DiagonalForm& Q, i64 m);

struct SeriesValue {
    cplx value;
    i64 terms = 0;
    double tail_bound = 0;
};

// sum_{m <= N} chi(m) m^{-s} over the primitive character, with a partial-summation tail bound.
SeriesValue l_partial(const CharacterQ& chi, cplx s, i64 N);
// L(1, chi) for the primitive character, from the digamma identity.
double l_one(const CharacterQ& chi);
SeriesValue dirichlet_d(const DiagonalForm& Q, const std::vector<i64>& c, cplx s, i64 Y);
SeriesValue euler_factor(const DiagonalForm& Q, const std::vector<i64>& c, i64 p, cplx s, int tmax);
// |D(s; c) / L(s - 3, chi)|; n = 4, non-square discriminant, Q^{-1}(c) = 0.
double factorization_check(const DiagonalForm& Q, const std::vector<i64>& c, cplx s, i64 Y);

}  // namespace qdl
