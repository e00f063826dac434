#pragma once

#include <numeric>
#include <random>
#include <vector>

#include "hbc/gf2.hpp"

namespace testutil {

inline hbc::HGMatrix random_hg(int s, std::mt19937_64& rng) {
    uint32_t n = uint32_t{1} << s;
    std::vector<hbc::GF2Vector> cols;
    cols.reserve(n);
    for (uint32_t v = 0; v < n; ++v) cols.emplace_back(v, s);
    for (uint32_t i = n - 1; i > 0; --i) std::swap(cols[i], cols[rng() % (i + 1)]);
    return hbc::HGMatrix(s, std::move(cols));
}

inline hbc::GF2Vector random_nonzero(int s, std::mt19937_64& rng) {
    return {static_cast<uint32_t>(1 + rng() % ((uint64_t{1} << s) - 1)), s};
}

inline hbc::HGMatrix from_bits(int s, std::vector<uint32_t> bits) {
    std::vector<hbc::GF2Vector> cols;
    for (uint32_t b : bits) cols.emplace_back(b, s);
    return hbc::HGMatrix(s, std::move(cols));
}

inline std::vector<hbc::GF2Vector> vecs_from_bits(int s, const std::vector<uint32_t>& bits) {
    std::vector<hbc::GF2Vector> out;
    for (uint32_t b : bits) out.emplace_back(b, s);
    return out;
}

// Pairs whose sums differ between two matrices.
inline std::vector<int> changed_pairs(const hbc::HGMatrix& before, const hbc::HGMatrix& after) {
    std::vector<int> out;
    for (int t = 0; t < before.pairs(); ++t)
        if (before.pair_sum(t) != after.pair_sum(t)) out.push_back(t);
    return out;
}

}  // namespace testutil
