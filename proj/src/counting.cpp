#include "qdl/counting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

namespace qdl {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

template <class W>
using Table = std::vector<std::pair<i64, W>>;

template <class W>
void compress(Table<W>& t) {
    std::sort(t.begin(), t.end(), [](auto& a, auto& b) { return a.first < b.first; });
    std::size_t k = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (k > 0 && t[k - 1].first == t[i].first)
            t[k - 1].second += t[i].second;
        else
            t[k++] = t[i];
    }
    t.resize(k);
}

// All sums over the given axes, with multiplicities.
template <class W>
Table<W> sums(const std::vector<const Table<W>*>& axes) {
    Table<W> cur{{0, W(1)}};
    for (auto* ax : axes) {
        Table<W> next;
        next.reserve(cur.size() * ax->size());
        for (auto& [v, m] : cur)
            for (auto& [a, ma] : *ax) next.push_back({v + a, m * ma});
        compress(next);
        cur.swap(next);
    }
    return cur;
}

// sum of wl * wr over l + r == target; both tables sorted ascending
template <class W>
W match(const Table<W>& L, const Table<W>& R, i64 target) {
    W s = W(0);
    std::size_t i = 0;
    std::ptrdiff_t j = (std::ptrdiff_t)R.size() - 1;
    while (i < L.size() && j >= 0) {
        i64 v = L[i].first + R[j].first;
        if (v == target) {
            s += L[i].second * R[j].second;
            ++i;
            --j;
        } else if (v < target) {
            ++i;
        } else {
            --j;
        }
    }
    return s;
}

// Split axes into two halves with balanced log-size.
std::vector<int> balanced_split(const std::vector<double>& logsz) {
    int n = (int)logsz.size();
    double total = 0;
    for (double l : logsz) total += l;
    int best = 0;
    double bestv = 1e300;
    for (int mask = 0; mask < (1 << n); ++mask) {
        double s = 0;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) s += logsz[i];
        double v = std::max(s, total - s);
        if (v < bestv - 1e-12) {
            bestv = v;
            best = mask;
        }
    }
    std::vector<int> side(n);
    for (int i = 0; i < n; ++i) side[i] = best >> i & 1;
    return side;
}

template <class W>
W mitm_count(const std::vector<Table<W>>& axes, i64 target, std::size_t budget) {
    std::vector<double> logsz;
    for (auto& a : axes) logsz.push_back(std::log((double)std::max<std::size_t>(1, a.size())));
    auto side = balanced_split(logsz);
    std::vector<const Table<W>*> L, R;
    double szL = 1, szR = 1;
    for (std::size_t i = 0; i < axes.size(); ++i) {
        if (side[i]) {
            L.push_back(&axes[i]);
            szL *= axes[i].size();
        } else {
            R.push_back(&axes[i]);
            szR *= axes[i].size();
        }
    }
    double need = 2.0 * std::max(szL, szR) * sizeof(std::pair<i64, W>);
    if (need > (double)budget) throw BudgetExceeded("meet-in-the-middle table exceeds memory budget", need);
    auto TL = sums(L);
    auto TR = sums(R);
    return match(TL, TR, target);
}

void check_range(const DiagonalForm& Q, const std::vector<i64>& ranges) {
    double m = 0;
    for (std::size_t i = 0; i < Q.n(); ++i) m += std::fabs((double)Q.a(i)) * (double)ranges[i] * (double)ranges[i];
    if (m > 4e18) throw FormError(FormErrorKind::Range, "box too large for 64-bit partial sums");
}

u64 brute_count(const DiagonalForm& Q, const std::vector<i64>& ranges) {
    std::size_t n = Q.n();
    auto A = Q.coeffs64();
    std::vector<i64> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = -ranges[i];
    u64 cnt = 0;
    while (true) {
        i64 s = 0;
        for (std::size_t i = 0; i < n; ++i) s += A[i] * x[i] * x[i];
        if (s == 0) ++cnt;
        std::size_t k = n;
        while (k > 0) {
            --k;
            if (x[k] < ranges[k]) {
                ++x[k];
                break;
            }
            x[k] = -ranges[k];
            if (k == 0) return cnt;
        }
    }
}

}  // namespace

CountMethod parse_count_method(const std::string& s) {
    if (s == "auto") return CountMethod::Auto;
    if (s == "brute") return CountMethod::Brute;
    if (s == "mitm") return CountMethod::Mitm;
    throw std::invalid_argument("unknown count method: " + s);
}

CountResult count_ranges(const DiagonalForm& Q, const std::vector<i64>& ranges, CountMethod m, std::size_t budget) {
    auto t0 = Clock::now();
    if (ranges.size() != Q.n()) throw FormError(FormErrorKind::DimensionMismatch, "dimension mismatch");
    check_range(Q, ranges);
    CountResult r;
    if (m == CountMethod::Brute) {
        double pts = 1;
        for (i64 b : ranges) pts *= 2.0 * b + 1;
        if (pts > 1e10) throw BudgetExceeded("brute-force box too large", pts);
        r.count = brute_count(Q, ranges);
        r.method = "brute";
    } else {
        std::vector<Table<u64>> axes(Q.n());
        for (std::size_t i = 0; i < Q.n(); ++i) {
            i64 A = Q.a(i);
            for (i64 x = 0; x <= ranges[i]; ++x) axes[i].push_back({A * x * x, x == 0 ? 1u : 2u});
        }
        r.count = mitm_count(axes, 0, budget);
        r.method = "mitm";
    }
    r.seconds = since(t0);
    return r;
}

CountResult count_box(const DiagonalForm& Q, i64 B, CountMethod m, std::size_t budget) {
    if (B < 1) throw std::invalid_argument("count_box: B must be >= 1");
    auto r = count_ranges(Q, std::vector<i64>(Q.n(), B), m, budget);
    r.bound = B;
    return r;
}

CountResult count_energy(const DiagonalForm& Q, i64 X, CountMethod m, std::size_t budget) {
    if (X < 1) throw std::invalid_argument("count_energy: X must be >= 1");
    std::vector<i64> ranges;
    for (std::size_t i = 0; i < Q.n(); ++i) {
        mpz_class t = mpz_class((long)X) / abs(Q.coeff(i));
        mpz_class s;
        mpz_sqrt(s.get_mpz_t(), t.get_mpz_t());
        ranges.push_back(s.get_si());
    }
    auto r = count_ranges(Q, ranges, m, budget);
    r.bound = X;
    return r;
}

CountResult count_primitive(const DiagonalForm& Q, i64 B, CountMethod m, std::size_t budget) {
    auto t0 = Clock::now();
    std::map<i64, u64> cache;
    long long total = 0;
    for (i64 d = 1; d <= B; ++d) {
        int mu = mobius(d);
        if (mu == 0) continue;
        i64 b = B / d;
        auto it = cache.find(b);
        if (it == cache.end()) it = cache.emplace(b, count_box(Q, b, m, budget).count).first;
        total += mu * (long long)(it->second - 1);
    }
    CountResult r;
    r.count = (u64)total;
    r.bound = B;
    r.method = m == CountMethod::Brute ? "brute" : "mitm";
    r.seconds = since(t0);
    return r;
}

double count_weighted(const DiagonalForm& Q, i64 B, const WeightDescriptor& w, std::size_t budget) {
    if (B < 1) throw std::invalid_argument("count_weighted: B must be >= 1");
    if (w.tag == WeightTag::OmegaEps || w.n != Q.n()) throw std::invalid_argument("count_weighted: unsupported weight");
    auto A = Q.coeffs64();
    std::size_t n = Q.n();
    double lo, hi;
    lead_support(w, lo, hi);
    i64 x1lo = (i64)std::floor(lo * B), x1hi = (i64)std::ceil(hi * B);
    std::vector<double> part;
    std::vector<i64> x1s;
    for (i64 x1 = x1lo; x1 <= x1hi; ++x1) x1s.push_back(x1);
    part.assign(x1s.size(), 0.0);
    std::vector<i64> rng(n, 0);
    for (i64 x1 : x1s) rng[0] = std::max(rng[0], std::abs(x1));
    for (std::size_t k = 0; k < x1s.size(); ++k) {
        double u1 = (double)x1s[k] / B;
        double lf = lead_factor(w, u1);
        if (lf == 0.0) continue;
        std::vector<Table<double>> axes(n - 1);
        bool empty = false;
        for (std::size_t i = 1; i < n; ++i) {
            double a, b;
            axis_support(w, i, u1, a, b);
            i64 xa = (i64)std::floor(a * B), xb = (i64)std::ceil(b * B);
            rng[i] = std::max({rng[i], std::abs(xa), std::abs(xb)});
            for (i64 x = xa; x <= xb; ++x) {
                double f = axis_factor(w, i, u1, (double)x / B);
                if (f != 0.0) axes[i - 1].push_back({A[i] * x * x, f});
            }
            compress(axes[i - 1]);
            if (axes[i - 1].empty()) empty = true;
        }
        if (empty) continue;
        check_range(Q, rng);
        part[k] = lf * mitm_count(axes, -A[0] * x1s[k] * x1s[k], budget);
    }
    double s = 0;
    for (double p : part) s += p;
    return s;
}

std::vector<std::vector<i64>> enumerate_oracle(const DiagonalForm& Q, i64 B, double max_points) {
    double pts = std::pow(2.0 * B + 1, (double)Q.n());
    if (pts > max_points) throw BudgetExceeded("enumeration box exceeds point budget", pts);
    std::size_t n = Q.n();
    auto A = Q.coeffs64();
    std::vector<std::vector<i64>> out;
    std::vector<i64> x(n, -B);
    while (true) {
        i64 s = 0;
        for (std::size_t i = 0; i < n; ++i) s += A[i] * x[i] * x[i];
        if (s == 0) out.push_back(x);
        std::size_t k = n;
        bool done = true;
        while (k > 0) {
            --k;
            if (x[k] < B) {
                ++x[k];
                done = false;
                break;
            }
            x[k] = -B;
        }
        if (done) break;
    }
    return out;
}

}  // namespace qdl
