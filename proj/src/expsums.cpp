#include "qdl/expsums.hpp"

#include <cfloat>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <unordered_map>

namespace qdl {

namespace {

using cd = std::complex<long double>;

std::vector<cd> roots(i64 q) {
    std::vector<cd> r(q);
    for (i64 k = 0; k < q; ++k) {
        long double t = 2.0L * std::numbers::pi_v<long double> * (long double)k / (long double)q;
        r[k] = cd(std::cos(t), std::sin(t));
    }
    return r;
}

// Neumaier-compensated complex accumulator
struct Acc {
    long double re = 0, im = 0, cre = 0, cim = 0;
    static void add1(long double& s, long double& c, long double x) {
        long double t = s + x;
        if (std::fabs(s) >= std::fabs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    void add(cd z) {
        add1(re, cre, z.real());
        add1(im, cim, z.imag());
    }
    cd value() const { return {re + cre, im + cim}; }
};

// G(a) = sum_b e_q(m b^2 + c b) for m = a*A mod q, all a in [0, q)
std::vector<cd> axis_sums_direct(i64 q, i64 A, i64 c, const std::vector<cd>& rt) {
    std::vector<cd> G(q);
    i64 cm = mod_pos(c, q);
    for (i64 a = 0; a < q; ++a) {
        i64 m = mulmod(a, A, q);
        i64 idx = 0, d = mod_pos(m + cm, q), dd = mod_pos(2 * m, q);
        long double sr = 0, si = 0;
        for (i64 b = 0; b < q; ++b) {
            sr += rt[idx].real();
            si += rt[idx].imag();
            idx += d;
            if (idx >= q) idx -= q;
            d += dd;
            if (d >= q) d -= q;
        }
        G[a] = {sr, si};
    }
    return G;
}

ExpSumValue finish(cd v, double err) {
    ExpSumValue r;
    r.value = v.real();
    r.imag = v.imag();
    r.err = err;
    if (std::fabs(r.value) > 9e18) throw CapExceeded("exponential sum too large to round into 64 bits");
    r.rounded = std::llround(r.value);
    return r;
}

i64 inv_mod(i64 a, i64 m) {
    i64 g = m, x = 0, x1 = 1, a1 = mod_pos(a, m);
    while (a1) {
        i64 qt = g / a1;
        std::tie(g, a1) = std::make_pair(a1, g - qt * a1);
        std::tie(x, x1) = std::make_pair(x1, x - qt * x1);
    }
    if (g != 1) throw std::invalid_argument("inv_mod: not invertible");
    return mod_pos(x, m);
}

// g_q(m) = sum_b e_q(m b^2) for all m mod q; shared across forms
const std::vector<cd>& gauss_table(i64 q) {
    static std::mutex mu;
    static std::unordered_map<i64, std::unique_ptr<std::vector<cd>>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(q);
    if (it != cache.end()) return *it->second;
    auto rt = roots(q);
    std::vector<i64> cnt(q, 0);
    for (i64 b = 0; b < q; ++b) cnt[mulmod(b, b, q)]++;
    std::vector<long double> re(q, 0.0L), im(q, 0.0L);
    for (i64 v = 0; v < q; ++v) {
        if (!cnt[v]) continue;
        long double w = (long double)cnt[v];
        i64 idx = 0;
        for (i64 m = 0; m < q; ++m) {
            re[m] += w * rt[idx].real();
            im[m] += w * rt[idx].imag();
            idx += v;
            if (idx >= q) idx -= q;
        }
    }
    auto tab = std::make_unique<std::vector<cd>>(q);
    for (i64 m = 0; m < q; ++m) (*tab)[m] = {re[m], im[m]};
    auto& ref = *tab;
    cache.emplace(q, std::move(tab));
    return ref;
}

}  // namespace

ExpSumValue sq_direct(const DiagonalForm& Q, i64 q, const std::vector<i64>& c, i64 cap) {
    if (q < 1) throw std::invalid_argument("sq_direct: q must be >= 1");
    if (q > cap) throw CapExceeded("sq_direct: q exceeds cap " + std::to_string(cap));
    if (c.size() != Q.n()) throw FormError(FormErrorKind::DimensionMismatch, "dimension mismatch");
    if (q == 1) return finish({1.0, 0.0}, 0.0);
    auto rt = roots(q);
    std::size_t n = Q.n();
    std::vector<std::vector<cd>> G(n);
    for (std::size_t i = 0; i < n; ++i) G[i] = axis_sums_direct(q, mod_pos(Q.a(i), q), c[i], rt);
    Acc acc;
    double errsum = 0;
    const double u = LDBL_EPSILON;
    for (i64 a = 1; a < q; ++a) {
        if (gcd64(a, q) != 1) continue;
        cd p = 1.0;
        double mag = 1.0, rel = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            p *= G[i][a];
            double g = (double)std::abs(G[i][a]);
            mag *= std::max(g, 1.0);
            rel += q / std::max(g, 1.0);
        }
        acc.add(p);
        errsum += mag * (rel + n);
    }
    return finish(acc.value(), 4 * u * (errsum + q));
}

ExpSumValue sq_multiplicative(const DiagonalForm& Q, i64 q, const std::vector<i64>& c, i64 cap) {
    if (q < 1) throw std::invalid_argument("sq_multiplicative: q must be >= 1");
    double v = 1.0, err = 0.0, im = 0.0;
    for (auto [p, e] : factorize(q)) {
        i64 pe = ipow(p, e);
        auto s = sq_direct(Q, pe, c, cap);
        err = std::fabs(v) * s.err + std::fabs(s.value) * err + err * s.err;
        v *= s.value;
        im += std::fabs(s.imag);
    }
    ExpSumValue r = finish({v, 0.0}, err);
    r.imag = im;
    return r;
}

long long sp_closed(const DiagonalForm& Q, i64 p, const std::vector<i64>& c) {
    if (Q.n() != 4) throw std::invalid_argument("sp_closed: needs n = 4");
    if (p == 2 || !is_prime(p)) throw std::invalid_argument("sp_closed: p must be an odd prime");
    auto inv = invariants_of(Q);
    if (inv.disc % p == 0) throw std::domain_error("sp_closed: p divides the discriminant; only a bound is available");
    int chi = kronecker(inv.disc, p);
    mpz_class qi = q_inverse_scaled(Q, c);
    long long p2 = p * p;
    if (qi % p != 0) return -chi * p2;
    return chi * p2 * (p - 1);
}

BoundRatios sq_bound_check(const DiagonalForm& Q, i64 q, const std::vector<i64>& c) {
    if (Q.n() != 4) throw std::invalid_argument("sq_bound_check: needs n = 4");
    ExpSumEngine E(Q, std::max<i64>(q, kDefaultExpSumCap));
    BoundRatios r;
    r.abs_value = std::fabs(E.S(q, c));
    double gA = 1;
    for (std::size_t i = 0; i < 4; ++i) gA *= std::sqrt((double)gcd64(q, Q.a(i)));
    r.general = r.abs_value / (std::pow((double)q, 3.0) * gA);
    if (is_squarefree(q)) {
        mpz_class qi = q_inverse_scaled(Q, c);
        mpz_class g;
        mpz_class qq = (long)q;
        mpz_gcd(g.get_mpz_t(), qq.get_mpz_t(), qi.get_mpz_t());
        r.sqfree = r.abs_value / (std::pow((double)q, 2.5) * std::sqrt(g.get_d()) * gA);
    }
    return r;
}

ExpSumEngine::ExpSumEngine(const DiagonalForm& Q, i64 cap) : Q_(Q), A_(Q.coeffs64()), cap_(cap) {}

long long ExpSumEngine::S_prime_power(i64 p, int t, const std::vector<i64>& c) {
    i64 q = ipow(p, t);
    if (q > cap_) throw CapExceeded("exponential sum modulus exceeds cap " + std::to_string(cap_));
    std::vector<i64> key(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        i64 r = mod_pos(c[i], q);
        key[i] = std::min(r, q - r);  // S depends on c_i only up to sign
    }
    auto k = std::make_pair(q, key);
    auto it = memo_.find(k);
    if (it != memo_.end()) return it->second;

    std::size_t n = A_.size();
    const auto& g = gauss_table(q);
    std::vector<cd> rt;
    std::vector<std::vector<cd>> direct(n);
    std::vector<i64> inv4A(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        bool easy = (p != 2) && (A_[i] % p != 0);
        if (easy) {
            inv4A[i] = inv_mod(mulmod(4, A_[i], q), q);
        } else {
            if (rt.empty()) rt = roots(q);
            direct[i] = axis_sums_direct(q, mod_pos(A_[i], q), key[i], rt);
        }
    }
    if (rt.empty()) rt = roots(q);
    Acc acc;
    double errsum = 0;
    for (i64 a = 1; a < q; ++a) {
        if (a % p == 0) continue;
        i64 ainv = -1;
        cd prod = 1.0;
        double mag = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            cd Gi;
            if (direct[i].empty()) {
                // sum_b e_q(m b^2 + c b) = e_q(-(4m)^{-1} c^2) g(m) for gcd(2m, q) = 1
                if (ainv < 0) ainv = inv_mod(a, q);
                i64 m = mulmod(a, A_[i], q);
                Gi = g[m];
                if (key[i]) {
                    i64 ph = mulmod(mulmod(ainv, inv4A[i], q), mulmod(key[i], key[i], q), q);
                    Gi *= rt[mod_pos(-ph, q)];
                }
            } else {
                Gi = direct[i][a];
            }
            prod *= Gi;
            mag *= std::max((double)std::abs(Gi), 1.0);
        }
        acc.add(prod);
        errsum += mag * (double)(q + n);
    }
    cd v = acc.value();
    double err = 8 * LDBL_EPSILON * errsum + 1e-9;
    long long r = std::llround(v.real());
    if (std::fabs(v.real() - r) > std::max(err, 1e-6) * 4 + 1e-3 || std::fabs(v.imag()) > std::max(err, 1e-6) * 4 + 1e-3)
        throw std::runtime_error("exponential sum failed integrality check at q=" + std::to_string(q));
    memo_.emplace(k, r);
    return r;
}

double ExpSumEngine::S(i64 q, const std::vector<i64>& c) {
    if (c.size() != A_.size()) throw FormError(FormErrorKind::DimensionMismatch, "dimension mismatch");
    if (q > cap_) throw CapExceeded("exponential sum modulus exceeds cap " + std::to_string(cap_));
    double v = 1.0;
    for (auto [p, e] : factorize(q)) {
        long long s = S_prime_power(p, e, c);
        if (s == 0) return 0.0;
        v *= (double)s;
    }
    return v;
}

std::vector<double> partial_sums_abs_at(ExpSumEngine& E, const std::vector<i64>& ys, const std::vector<i64>& c) {
    std::vector<double> out;
    long double s = 0;
    i64 q = 1;
    for (i64 Y : ys) {
        for (; q <= Y; ++q) s += std::fabs(E.S(q, c));
        out.push_back((double)s);
    }
    return out;
}

double partial_sum_abs(const DiagonalForm& Q, i64 Y, const std::vector<i64>& c, i64 cap) {
    if (Y > cap) throw CapExceeded("partial sum bound exceeds cap");
    ExpSumEngine E(Q, cap);
    return partial_sums_abs_at(E, {Y}, c)[0];
}

double partial_sum_signed(const DiagonalForm& Q, i64 Y, const std::vector<i64>& c, i64 cap) {
    if (Y > cap) throw CapExceeded("partial sum bound exceeds cap");
    ExpSumEngine E(Q, cap);
    long double s = 0;
    for (i64 q = 1; q <= Y; ++q) s += E.S(q, c);
    return (double)s;
}

double growth_fit(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 2) throw std::invalid_argument("growth_fit: need at least two samples");
    double mx = 0, my = 0;
    for (auto [x, y] : samples) {
        mx += std::log(x);
        my += std::log(y);
    }
    mx /= samples.size();
    my /= samples.size();
    double sxy = 0, sxx = 0;
    for (auto [x, y] : samples) {
        double dx = std::log(x) - mx;
        sxy += dx * (std::log(y) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

double singular_partial(const DiagonalForm& Q, i64 Y, i64 cap) {
    if (Y > cap) throw CapExceeded("partial sum bound exceeds cap");
    ExpSumEngine E(Q, cap);
    std::vector<i64> zero(Q.n(), 0);
    long double s = 0;
    for (i64 q = 1; q <= Y; ++q) s += E.S(q, zero) / std::pow((long double)q, (long double)Q.n());
    return (double)s;
}

}  // namespace qdl
