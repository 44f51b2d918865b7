#include "qdl/densities.hpp"

#include <cmath>
#include <stdexcept>

#include "qdl/lseries.hpp"

namespace qdl {

namespace {

using u128 = unsigned __int128;

mpz_class to_mpz(u128 v) {
    mpz_class hi = (unsigned long)(u64)(v >> 64), lo = (unsigned long)(u64)v;
    return (hi << 64) + lo;
}

// counts mod q = p^k via convolution of r_i(v) = #{b : A_i b^2 = v}.
// coeffs given mod q; if 'unit' is non-empty the count is restricted to x with
// some coordinate in that index set not divisible by p.
mpz_class conv_count(const std::vector<i64>& Amod, i64 p, i64 q, const std::vector<bool>& unit) {
    bool restrict = !unit.empty();
    // state 0: no marked unit coordinate yet, state 1: at least one
    std::vector<u128> cur0(q, 0), cur1(q, 0);
    cur0[0] = 1;
    for (std::size_t i = 0; i < Amod.size(); ++i) {
        std::vector<u128> r0(q, 0), r1(q, 0);
        for (i64 b = 0; b < q; ++b) {
            i64 v = mulmod(Amod[i], mulmod(b, b, q), q);
            if (restrict && unit[i] && b % p != 0)
                r1[v]++;
            else
                r0[v]++;
        }
        std::vector<u128> n0(q, 0), n1(q, 0);
        std::vector<i64> nz0, nz1;
        for (i64 v = 0; v < q; ++v) {
            if (r0[v]) nz0.push_back(v);
            if (r1[v]) nz1.push_back(v);
        }
        for (i64 s = 0; s < q; ++s) {
            u128 a0 = cur0[s], a1 = cur1[s];
            if (!a0 && !a1) continue;
            for (i64 v : nz0) {
                i64 t = s + v;
                if (t >= q) t -= q;
                n0[t] += a0 * r0[v];
                n1[t] += a1 * r0[v];
            }
            for (i64 v : nz1) {
                i64 t = s + v;
                if (t >= q) t -= q;
                n1[t] += (a0 + a1) * r1[v];
            }
        }
        cur0.swap(n0);
        cur1.swap(n1);
    }
    return restrict ? to_mpz(cur1[0]) : to_mpz(cur0[0] + cur1[0]);
}

struct Coef {
    int v;        // p-adic valuation
    mpz_class u;  // unit part
};

std::vector<Coef> split(const DiagonalForm& Q, i64 p) {
    std::vector<Coef> out;
    for (auto& a : Q.coeffs()) {
        Coef c{0, a};
        while (c.u % p == 0) {
            c.u /= p;
            ++c.v;
        }
        out.push_back(c);
    }
    return out;
}

// #{x mod p^k: Q(x)=0, some x_i with v_i = 0 not divisible by p}, for k = k0,
// where k0 = 1 (odd p) or 3 (p = 2)
mpz_class base_unit_count(const std::vector<Coef>& cs, i64 p, int k0) {
    std::size_t n = cs.size();
    if (p != 2) {
        // closed count of isotropic vectors of the unit part over F_p
        int r = 0;
        mpz_class d = 1;
        for (auto& c : cs)
            if (c.v == 0) {
                ++r;
                d *= c.u;
            }
        int s = (int)n - r;
        if (r == 0) return 0;
        mpz_class pr = 1;
        for (int i = 0; i < r - 1; ++i) pr *= p;
        mpz_class zeros = pr;  // r odd
        if (r % 2 == 0) {
            mpz_class sgnd = (r / 2) % 2 ? mpz_class(-d) : d;
            mpz_class t = p - 1;
            for (int i = 0; i < r / 2 - 1; ++i) t *= p;
            zeros += kronecker(sgnd, p) * t;
        }
        mpz_class ps = 1;
        for (int i = 0; i < s; ++i) ps *= p;
        return (zeros - 1) * ps;
    }
    i64 q = ipow(2, k0);
    std::vector<i64> Am;
    std::vector<bool> unit;
    for (auto& c : cs) {
        mpz_class a = c.u;
        for (int i = 0; i < c.v && i < k0 + 1; ++i) a *= 2;
        mpz_class r = a % q;
        if (r < 0) r += q;
        Am.push_back(r.get_si());
        unit.push_back(c.v == 0);
    }
    return conv_count(Am, 2, q, unit);
}

mpz_class lift_count(std::vector<Coef> cs, i64 p, int k) {
    std::size_t n = cs.size();
    int k0 = p == 2 ? 3 : 1;
    // N_k = f(k) + p^s N_{k-1}(Q'), f(k) = f(k0) p^{(k-k0)(n-1)} for k >= k0
    mpz_class total = 0, mult = 1;
    while (k > 0) {
        if (k < k0) {
            i64 q = ipow(p, k);
            std::vector<i64> Am;
            for (auto& c : cs) {
                mpz_class a = c.u;
                for (int i = 0; i < c.v && i < k + 1; ++i) a *= p;
                mpz_class r = a % q;
                if (r < 0) r += q;
                Am.push_back(r.get_si());
            }
            total += mult * conv_count(Am, p, q, {});
            return total;
        }
        int s = 0;
        for (auto& c : cs)
            if (c.v > 0) ++s;
        mpz_class f = base_unit_count(cs, p, k0);
        mpz_class pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), p, (unsigned long)(k - k0) * (n - 1));
        total += mult * f * pw;
        mpz_class ps;
        mpz_ui_pow_ui(ps.get_mpz_t(), p, s);
        mult *= ps;
        for (auto& c : cs) c.v = c.v == 0 ? 1 : c.v - 1;
        --k;
    }
    return total + mult;  // N_0 = 1
}

}  // namespace

mpz_class nk_count(const DiagonalForm& Q, i64 p, int k, NkMethod m, double budget) {
    if (!is_prime(p)) throw std::invalid_argument("nk_count: p must be prime");
    if (k < 0) throw std::invalid_argument("nk_count: k must be >= 0");
    if (k == 0) return 1;
    double q2 = std::pow((double)p, 2.0 * k);
    if (m == NkMethod::Auto) m = q2 <= budget ? NkMethod::Convolution : NkMethod::Lift;
    if (m == NkMethod::Convolution) {
        if (q2 > budget) throw std::length_error("nk_count: p^{2k} exceeds budget");
        i64 q = ipow(p, k);
        std::vector<i64> Am;
        for (auto& a : Q.coeffs()) {
            mpz_class r = a % q;
            if (r < 0) r += q;
            Am.push_back(r.get_si());
        }
        return conv_count(Am, p, q, {});
    }
    return lift_count(split(Q, p), p, k);
}

double sigma_p_closed(const DiagonalForm& Q, i64 p) {
    auto inv = invariants_of(Q);
    if (p == 2 || inv.disc % p == 0) throw std::domain_error("sigma_p_closed: needs odd p not dividing Delta");
    double n = (double)Q.n();
    double pp = (double)p;
    if (Q.n() % 2 == 1) {
        double x = std::pow(pp, 2 - n);
        return 1 + (1 - 1 / pp) * x / (1 - x);
    }
    mpz_class d = (Q.n() / 2) % 2 ? mpz_class(-inv.disc) : inv.disc;
    double x = kronecker(d, p) * std::pow(pp, 1 - n / 2);
    return 1 + (1 - 1 / pp) * x / (1 - x);
}

LocalDensity sigma_p(const DiagonalForm& Q, i64 p, int kmax) {
    if (Q.n() < 4) throw std::invalid_argument("sigma_p: needs n >= 4");
    LocalDensity ld;
    ld.p = p;
    auto cs = split(Q, p);
    std::size_t n = Q.n();
    mpz_class scale = 1;
    ld.partials.push_back(mpq_class(1));
    for (int k = 1; k <= kmax; ++k) {
        for (std::size_t i = 0; i + 1 < n; ++i) scale *= p;
        mpq_class v(lift_count(cs, p, k), scale);
        v.canonicalize();
        ld.partials.push_back(v);
    }
    auto& P = ld.partials;
    int K = (int)P.size() - 1;
    auto diff = [&](int k, int per) { return mpq_class(P[k] - P[k - per]); };
    // exact stabilisation
    bool allzero = true;
    for (int k = K - 3; k <= K; ++k)
        if (diff(k, 1) != 0) allzero = false;
    if (allzero) {
        ld.value = P[K].get_d();
        ld.method = "exact-stable";
        return ld;
    }
    for (int per : {1, 2}) {
        if (K < 4 * per) continue;
        mpq_class b0 = diff(K, per), b1 = diff(K - per, per), b2 = diff(K - 2 * per, per), b3 = diff(K - 3 * per, per);
        if (b1 == 0 || b2 == 0 || b3 == 0) continue;
        mpq_class r0 = b0 / b1, r1 = b1 / b2, r2 = b2 / b3;
        double rd = r0.get_d();
        if (std::fabs(rd) >= 1) continue;
        if (r0 == r1 && r1 == r2) {
            mpq_class tail = b0 * r0 / (1 - r0);
            ld.value = mpq_class(P[K] + tail).get_d();
            ld.tail_ratio = rd;
            ld.method = "exact-stable";
            return ld;
        }
        double a = r0.get_d(), b = r1.get_d(), c = r2.get_d();
        if (std::fabs(a - b) < 1e-3 && std::fabs(b - c) < 1e-3) {
            double tail = b0.get_d() * a / (1 - a);
            ld.value = P[K].get_d() + tail;
            ld.err = std::fabs(tail) * std::fabs(a - c) + 1e-15;
            ld.tail_ratio = a;
            ld.method = "extrapolated";
            return ld;
        }
    }
    ld.value = P[K].get_d();
    ld.err = 10 * std::fabs(diff(K, 1).get_d()) + 1e-12;
    ld.method = "unconverged";
    return ld;
}

SingularSeries singular_series(const DiagonalForm& Q, i64 P0) {
    std::size_t n = Q.n();
    if (n < 4) throw std::invalid_argument("singular_series: needs n >= 4");
    auto inv = invariants_of(Q);
    auto chi = character_of_disc(inv.disc);
    if (n == 4 && chi.principal) throw std::domain_error("singular_series: square discriminant with n = 4");
    SingularSeries ss;
    ss.cutoff = P0;
    long double logprod = 0;
    long double logeuler = 0;  // n = 4: sum log (1 - chi(p)/p)^{-1} over p <= P0
    for (i64 p : primes_up_to(P0)) {
        double sp;
        if (p == 2 || inv.disc % p == 0) {
            auto ld = sigma_p(Q, p);
            sp = ld.value;
            ss.bad.push_back(ld);
        } else {
            sp = sigma_p_closed(Q, p);
        }
        if (sp <= 0) {
            ss.value = ss.lo = ss.hi = 0;
            ss.tail = "local obstruction";
            return ss;
        }
        logprod += std::log((long double)sp);
        if (n == 4) logeuler -= std::log1p(-(long double)chi.primitive(p) / p);
    }
    double L = (double)P0;
    if (n == 4) {
        // primes above P0: factors (1 - chi(p)/p)^{-1} (1 - chi(p)/p^2)
        long double tail = std::log((long double)l_one(chi)) - logeuler;
        double corr = 1.3 / (L * std::log(L));
        ss.value = (double)std::exp(logprod + tail);
        ss.lo = ss.value * std::exp(-corr);
        ss.hi = ss.value * std::exp(corr);
        ss.tail = "L(1,chi) anchored";
    } else {
        double e = (double)n / 2 - 2;
        double tau = 2.0 * std::pow(L, -e) / (e * std::log(L));
        ss.value = (double)std::exp(logprod);
        ss.lo = ss.value * std::exp(-tau);
        ss.hi = ss.value * std::exp(tau);
        ss.tail = "p^{-3/2} interval";
    }
    return ss;
}

StagReport stag_check(const DiagonalForm& Q, double budget, int kmax_lift) {
    StagReport rep;
    auto inv = invariants_of(Q);
    mpz_class d = abs(inv.disc);
    std::size_t n = Q.n();
    std::vector<i64> odd;
    for (i64 p = 2; mpz_class(p) * p <= d; ++p) {
        if (d % p != 0) continue;
        if (p != 2) odd.push_back(p);
        while (d % p == 0) d /= p;
    }
    if (d > 1) {
        if (!d.fits_slong_p()) throw std::overflow_error("stag_check: prime factor too large");
        if (d != 2) odd.push_back(d.get_si());
    }
    for (i64 p : odd) {
        for (int k = 1; k <= kmax_lift; ++k) {
            bool conv = std::pow((double)p, 2.0 * k) <= budget;
            mpz_class N = nk_count(Q, p, k, conv ? NkMethod::Convolution : NkMethod::Lift, budget);
            mpz_class bound;
            mpz_ui_pow_ui(bound.get_mpz_t(), p, (unsigned long)k * (n - 1));
            bound *= 4;
            ++rep.checked;
            if (N > bound) ++rep.violations;
            rep.max_ratio = std::max(rep.max_ratio, mpq_class(N, bound).get_d());
        }
    }
    return rep;
}

}  // namespace qdl
