#include "qdl/lseries.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/digamma.hpp>

#include "qdl/expsums.hpp"

namespace qdl {

CharacterQ character_of_disc(const mpz_class& disc) {
    CharacterQ chi;
    chi.disc = disc;
    if (is_square(disc)) {
        chi.principal = true;
        chi.fund = 1;
        chi.conductor = 1;
    } else {
        chi.fund = fundamental_discriminant(disc);
        mpz_class k = abs(chi.fund);
        if (!k.fits_slong_p()) throw std::overflow_error("conductor too large");
        chi.conductor = k.get_si();
    }
    return chi;
}

CharacterQ character_of(const DiagonalForm& Q) { return character_of_disc(invariants_of(Q).disc); }

int chi_q(const DiagonalForm& Q, i64 m) {
    if (m < 1) throw std::invalid_argument("chi_q: m must be >= 1");
    return kronecker(invariants_of(Q).disc, m);
}

namespace {

cplx mpow(double m, cplx s) { return std::exp(-s * std::log(m)); }

}  // namespace

SeriesValue l_partial(const CharacterQ& chi, cplx s, i64 N) {
    if (N < 1) throw std::invalid_argument("l_partial: N must be >= 1");
    double sig = s.real();
    if (chi.principal && sig <= 1.0) throw std::domain_error("l_partial: principal character diverges for Re s <= 1");
    if (!chi.principal && sig <= 0.5) throw std::domain_error("l_partial: needs Re s > 1/2");
    // periodic table of the character
    std::vector<int> tab(chi.conductor);
    for (i64 a = 0; a < chi.conductor; ++a) tab[a] = chi.primitive(a == 0 ? chi.conductor : a);
    cplx sum = 0;
    // sum from the small terms upward in blocks, large-m tail first for accuracy
    for (i64 m = N; m >= 1; --m) {
        int x = chi.principal ? 1 : tab[m % chi.conductor];
        if (x) sum += (double)x * mpow((double)m, s);
    }
    SeriesValue r;
    r.value = sum;
    r.terms = N;
    if (chi.principal) {
        r.tail_bound = std::pow((double)N, 1 - sig) / (sig - 1) + std::pow((double)N, -sig);
    } else {
        double k = (double)chi.conductor;
        double P = std::sqrt(k) * std::max(1.0, std::log(k));
        r.tail_bound = 2 * P * std::pow((double)N, -sig) * (1 + std::abs(s) / sig);
    }
    return r;
}

double l_one(const CharacterQ& chi) {
    if (chi.principal) throw std::domain_error("l_one: principal character has a pole at s = 1");
    double k = (double)chi.conductor;
    long double s = 0;
    for (i64 a = 1; a < chi.conductor; ++a) {
        int x = chi.primitive(a);
        if (x) s += x * (long double)boost::math::digamma((double)a / k);
    }
    return (double)(-s / k);
}

SeriesValue dirichlet_d(const DiagonalForm& Q, const std::vector<i64>& c, cplx s, i64 Y) {
    if (s.real() <= 4.0) throw std::domain_error("dirichlet_d: needs Re s > 4");
    ExpSumEngine E(Q, std::max<i64>(Y, kDefaultExpSumCap));
    cplx sum = 0, block = 0;
    for (i64 q = 1; q <= Y; ++q) {
        double S = E.S(q, c);
        if (S == 0) continue;
        cplx t = S * mpow((double)q, s);
        sum += t;
        if (2 * q > Y) block += t;
    }
    SeriesValue r;
    r.value = sum;
    r.terms = Y;
    r.tail_bound = std::abs(block);
    return r;
}

SeriesValue euler_factor(const DiagonalForm& Q, const std::vector<i64>& c, i64 p, cplx s, int tmax) {
    if (!is_prime(p)) throw std::invalid_argument("euler_factor: p must be prime");
    ExpSumEngine E(Q, std::max<i64>(ipow(p, tmax), kDefaultExpSumCap));
    cplx sum = 1.0, last = 0;
    for (int t = 1; t <= tmax; ++t) {
        cplx v = (double)E.S_prime_power(p, t, c) * mpow(std::pow((double)p, t), s);
        sum += v;
        last = v;
    }
    SeriesValue r;
    r.value = sum;
    r.terms = tmax + 1;
    r.tail_bound = std::abs(last);
    return r;
}

double factorization_check(const DiagonalForm& Q, const std::vector<i64>& c, cplx s, i64 Y) {
    if (Q.n() != 4) throw std::invalid_argument("factorization_check: needs n = 4");
    auto chi = character_of(Q);
    if (chi.principal) throw std::domain_error("factorization_check: square discriminant");
    if (q_inverse_scaled(Q, c) != 0) throw std::domain_error("factorization_check: needs Q^{-1}(c) = 0");
    if (s.real() < 4.0) throw std::domain_error("factorization_check: needs Re s >= 4");
    auto D = dirichlet_d(Q, c, s.real() > 4.0 ? s : s + 1e-9, Y);
    auto L = l_partial(chi, s - 3.0, std::max<i64>(Y, 200000));
    return std::abs(D.value / L.value);
}

}  // namespace qdl
