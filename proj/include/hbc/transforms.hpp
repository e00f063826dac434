#pragma once

#include <array>
#include <bit>
#include <utility>
#include <vector>

#include "hbc/pairgraph.hpp"

namespace hbc {

struct GoodBadOutcome {
    HGMatrix matrix;
    bool bad = false;  // set iff the fallback branch ran; pair t then sums to v + y
};

/// Steers the sum of pair t to the request v, or failing that to v + y where
/// y is the pair sum at entry. The final pair is spent as scratch: no pair
/// sum other than t and n/2-1 moves. Three attempts look for a reordering
/// whose path crosses the spare pair; each probes a different shift, with a
/// column swap against the spare setting up attempts two and three.
inline GoodBadOutcome find_good_or_bad_request(HGMatrix G, int t, GF2Vector v) {
    int n = G.n();
    int last = n / 2 - 1;
    require(t >= 0 && t < last, ErrorKind::Input,
            "find_good_or_bad_request: pair index must precede the redundancy pair");
    require(v.dim == G.dim() && !v.is_zero(), ErrorKind::Input,
            "find_good_or_bad_request: request must be nonzero and of matching dimension");

    GF2Vector y = G.pair_sum(t);
    if (v == y) return {std::move(G), false};
    GF2Vector u = G.col(2 * t + 1) + G.col(n - 2);

    GF2Vector a;
    for (int p = 1; p <= 3; ++p) {
        if (p == 1) {
            a = v + y;
        } else if (p == 2) {
            a = v + y + u;
            G.swap_cols(2 * t + 1, n - 2);
        } else {
            a = v + u;
            G.swap_cols(2 * t, n - 2);
        }
        if (a.is_zero()) {
            // The swap alone brought the pair sum to v.
            require(G.pair_sum(t) == v, ErrorKind::Internal, "find_good_or_bad_request: zero shift without match");
            return {std::move(G), false};
        }
        GoodPath path = good_path_between_pair(G, a, t);
        bool spare_on_path = false;
        for (size_t i = 1; i + 1 < path.nodes.size(); i += 2) {
            if (path.nodes[i] / 2 == last) {
                spare_on_path = true;
                break;
            }
        }
        if (spare_on_path) {
            shift_pair_sums(G, a, t, last);
            require(G.pair_sum(t) == v, ErrorKind::Internal, "find_good_or_bad_request: pair sum missed request");
            return {std::move(G), false};
        }
    }

    // Fallback: reorder along the pair's own path (moves no pair sum), then
    // swap the working column against the spare. The failed membership tests
    // imply the spare pair is off this path; that is checked, not assumed.
    GoodPath path = good_path_between_pair(G, a, t);
    for (int node : path.nodes)
        require(node / 2 != last, ErrorKind::Internal,
                "find_good_or_bad_request: fallback path touched the spare pair");
    G = apply_reordering(std::move(G), path);
    G.swap_cols(2 * t, n - 2);
    require(G.pair_sum(t) == v + y, ErrorKind::Internal, "find_good_or_bad_request: fallback sum mismatch");
    return {std::move(G), true};
}

/// Rescue move for the pair-binding search: the cycle of pair t in the
/// a-type graph must hold an earlier pair t' whose sum differs from the
/// request at t. Reordering fixes pair t and corrupts pair t'; swapping the
/// two pairs (columns and requests) makes the corrupted pair the working one
/// while every earlier binding stays intact. Returns t'.
inline int bad_case_correction(HGMatrix& G, const GF2Vector& a, RequestBatch& M, int t) {
    require(!a.is_zero() && a.dim == G.dim(), ErrorKind::Input, "bad_case_correction: bad shift");
    require(t >= 0 && t < M.k() && t < G.pairs(), ErrorKind::Input, "bad_case_correction: index out of range");

    GoodPath path = good_path_between_pair(G, a, t);
    int chosen = -1;
    for (size_t i = 1; i + 1 < path.nodes.size(); i += 2) {
        int tp = path.nodes[i] / 2;
        if (tp < t && G.pair_sum(tp) != M[t] && (chosen < 0 || tp < chosen)) chosen = tp;
    }
    require(chosen >= 0, ErrorKind::Internal, "bad_case_correction: no eligible pair on the cycle");

    shift_pair_sums(G, a, t, chosen);
    require(G.pair_sum(t) == M[t], ErrorKind::Internal, "bad_case_correction: pair sum missed request");
    G.swap_cols(2 * chosen, 2 * t);
    G.swap_cols(2 * chosen + 1, 2 * t + 1);
    std::swap(M.requests[t], M.requests[chosen]);
    return chosen;
}

/// Among the s+1 pair sums of the scratch window starting at column 4t, finds
/// the first linearly dependent subset (size h <= s+1) and swaps its pairs to
/// the window front, so the first h pair sums add to zero. Only unused
/// columns move. Returns h.
inline int reorder_dependent_pairs(HGMatrix& G, int t) {
    int s = G.dim();
    int base = 4 * t;
    require(base >= 0 && base + 2 * (s + 1) <= G.n() - 2, ErrorKind::Input,
            "reorder_dependent_pairs: fewer than 2(s+1) unused columns after the window");

    std::array<uint32_t, kMaxDim> lead_vec{};
    std::array<uint32_t, kMaxDim> lead_rep{};
    uint32_t dep = 0;
    for (int i = 0; i <= s; ++i) {
        uint32_t v = (G.col(base + 2 * i) + G.col(base + 2 * i + 1)).bits;
        uint32_t rep = 1u << i;
        while (v != 0) {
            int b = std::bit_width(v) - 1;
            if (lead_vec[b]) {
                v ^= lead_vec[b];
                rep ^= lead_rep[b];
            } else {
                lead_vec[b] = v;
                lead_rep[b] = rep;
                break;
            }
        }
        if (v == 0) {
            dep = rep;
            break;
        }
    }
    require(dep != 0, ErrorKind::Internal, "reorder_dependent_pairs: no dependence among s+1 vectors");
    int h = std::popcount(dep);
    require(h >= 2, ErrorKind::Internal, "reorder_dependent_pairs: pair sums cannot be zero");

    std::vector<int> members;
    for (int i = 0; i <= s; ++i)
        if ((dep >> i) & 1u) members.push_back(i);
    std::vector<int> slot_of(s + 1), at_slot(s + 1);
    for (int i = 0; i <= s; ++i) slot_of[i] = at_slot[i] = i;
    for (int r = 0; r < h; ++r) {
        int c = slot_of[members[r]];
        if (c == r) continue;
        G.swap_cols(base + 2 * r, base + 2 * c);
        G.swap_cols(base + 2 * r + 1, base + 2 * c + 1);
        int displaced = at_slot[r];
        std::swap(at_slot[r], at_slot[c]);
        slot_of[members[r]] = r;
        slot_of[displaced] = c;
    }

    GF2Vector acc{0, s};
    for (int i = 0; i < h; ++i) acc = acc + G.col(base + 2 * i) + G.col(base + 2 * i + 1);
    require(acc.is_zero(), ErrorKind::Internal, "reorder_dependent_pairs: moved window does not sum to zero");
    return h;
}

/// Given a window whose first h pair sums add to zero, reorders so the first
/// two window pair sums are equal. Each round steers the lead pair toward the
/// i-th window sum; after h-1 misses the accumulated sum telescopes onto the
/// final candidate, so the loop always lands.
inline void find_equiv_sums(HGMatrix& G, int t, int h) {
    int s = G.dim();
    int base = 4 * t;
    require(h >= 2 && base + 2 * h <= G.n() - 2, ErrorKind::Input, "find_equiv_sums: bad window");
    {
        GF2Vector acc{0, s};
        for (int i = 0; i < h; ++i) acc = acc + G.col(base + 2 * i) + G.col(base + 2 * i + 1);
        require(acc.is_zero(), ErrorKind::Input, "find_equiv_sums: window prefix does not sum to zero");
    }
    auto window_sum = [&](int i) { return G.col(base + 2 * i) + G.col(base + 2 * i + 1); };
    for (int i = 1; i < h; ++i) {
        GF2Vector xi = window_sum(i);
        if (G.pair_sum(2 * t) != xi) {
            auto out = find_good_or_bad_request(std::move(G), 2 * t, xi);
            G = std::move(out.matrix);
            xi = window_sum(i);
        }
        if (G.pair_sum(2 * t) == xi) {
            G.swap_cols(base + 2, base + 2 * i);
            G.swap_cols(base + 3, base + 2 * i + 1);
            return;
        }
    }
    fail(ErrorKind::Internal, "find_equiv_sums: telescoping failed to converge");
}

}  // namespace hbc
