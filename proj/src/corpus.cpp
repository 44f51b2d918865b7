#include "qdl/corpus.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qdl {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

i64 SplitMix64::uniform(i64 lo, i64 hi) {
    std::uint64_t span = (std::uint64_t)(hi - lo) + 1;
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v;
    do v = next();
    while (v >= limit);
    return lo + (i64)(v % span);
}

std::vector<DiagonalForm> generate_corpus(const CorpusSpec& spec) {
    if (spec.count < 1) throw std::invalid_argument("corpus: count must be >= 1");
    if (spec.ns.empty()) throw std::invalid_argument("corpus: no dimensions given");
    if (spec.amin < 1 || spec.amax < spec.amin) throw std::invalid_argument("corpus: bad coefficient range");
    SplitMix64 rng(spec.seed);
    std::vector<DiagonalForm> out;
    long rejections = 0;
    for (std::size_t k = 0; k < spec.count; ++k) {
        int n = spec.ns[k % spec.ns.size()];
        if (n < 3) throw std::invalid_argument("corpus: n must be >= 3");
        while (true) {
            if (rejections > 1000000) throw std::runtime_error("corpus: constraints not satisfiable within 10^6 rejections");
            std::vector<i64> a(n);
            for (auto& v : a) {
                v = rng.uniform(spec.amin, spec.amax);
                if (rng.next() >> 63) v = -v;
            }
            bool pos = false, neg = false;
            i64 g = 0, m = INT64_MAX, H = 0;
            for (i64 v : a) {
                (v > 0 ? pos : neg) = true;
                g = std::gcd(g, v);
                m = std::min(m, std::abs(v));
                H = std::max(H, std::abs(v));
            }
            bool ok = (!spec.indefinite || (pos && neg)) && (!spec.primitive || g == 1) && (!spec.same_order || H <= 4 * m);
            DiagonalForm F;
            if (ok) {
                F = DiagonalForm::make(a);
                auto D = invariants_of(F).disc;
                double ad = std::fabs(D.get_d());
                if (spec.nonsquare && is_square(D)) ok = false;
                if (spec.min_abs_disc > 0 && ad < spec.min_abs_disc) ok = false;
                if (spec.max_abs_disc > 0 && ad > spec.max_abs_disc) ok = false;
            }
            if (!ok) {
                ++rejections;
                continue;
            }
            out.push_back(F);
            break;
        }
    }
    return out;
}

}  // namespace qdl
