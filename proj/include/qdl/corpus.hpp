#pragma once
// Seeded corpora of diagonal forms.

#include <cstdint>
#include <vector>

#include "qdl/form.hpp"

namespace qdl {

// splitmix64: state += 0x9E3779B97F4A7C15, then
// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9; z = (z ^ (z >> 27)) * 0x94D049BB133111EB; z ^ (z >> 31).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : s_(seed) {}
    std::uint64_t next();
    // uniform on [lo, hi] by rejection
    i64 uniform(i64 lo, i64 hi);

private:
    std::uint64_t s_;
};

struct CorpusSpec {
    std::uint64_t seed = 1;
    std::vector<int> ns{4};
    i64 amin = 1, amax = 10;  // range of |A_i|
    std::size_t count = 10;
    bool primitive = true;
    bool nonsquare = false;   // reject square discriminants
    bool same_order = false;  // H <= 4 m
    bool indefinite = true;
    // |Delta| bounds, 0 = none
    double min_abs_disc = 0, max_abs_disc = 0;
};

// Form i has n = ns[i mod |ns|]. Throws std::runtime_error after 10^6 rejections.
std::vector<DiagonalForm> generate_corpus(const CorpusSpec& spec);

}  // namespace qdl
