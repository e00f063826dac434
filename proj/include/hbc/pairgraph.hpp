#pragma once

#include <atomic>
#include <cstdio>
#include <string>
#include <vector>

#include "hbc/gf2.hpp"

namespace hbc {

/// When set, every reordering application logs its shift and endpoint pairs
/// to stderr.
inline std::atomic<bool> g_trace_reorderings{false};

/// 2-regular graph on the columns of an HG-matrix: pair-type edges join
/// columns 2t and 2t+1, x-type edges join columns whose values differ by x.
/// Built fresh per query; reorderings invalidate it.
struct XTypeGraph {
    const HGMatrix* base = nullptr;
    GF2Vector shift;
    std::vector<int32_t> partner;  // x-type partner per column index

    int pair_of(int i) const { return i ^ 1; }
};

inline XTypeGraph build_xtype_graph(const HGMatrix& G, const GF2Vector& x) {
    require(x.dim == G.dim(), ErrorKind::Input, "xtype graph: shift dimension mismatch");
    require(!x.is_zero(), ErrorKind::Input, "xtype graph: shift must be nonzero");
    XTypeGraph g;
    g.base = &G;
    g.shift = x;
    g.partner.resize(G.n());
    for (int i = 0; i < G.n(); ++i) g.partner[i] = G.shift_partner(i, x);
    return g;
}

/// Disjoint simple cycles of an x-type graph. Each cycle is a node sequence
/// starting at its lowest column index, walking the pair edge first, so edges
/// alternate pair/x and every cycle has even length >= 2.
struct CyclePartition {
    std::vector<std::vector<int>> cycles;
    std::vector<int32_t> membership;  // pair index t -> cycle id
};

inline CyclePartition cycle_partition(const XTypeGraph& g) {
    int n = static_cast<int>(g.partner.size());
    CyclePartition out;
    out.membership.assign(n / 2, -1);
    std::vector<char> seen(n, 0);
    for (int start = 0; start < n; ++start) {
        if (seen[start]) continue;
        std::vector<int> cyc;
        int cur = start;
        do {
            cyc.push_back(cur);
            cyc.push_back(cur ^ 1);
            seen[cur] = seen[cur ^ 1] = 1;
            out.membership[cur / 2] = static_cast<int32_t>(out.cycles.size());
            cur = g.partner[cur ^ 1];
        } while (cur != start);
        out.cycles.push_back(std::move(cyc));
    }
    return out;
}

/// Stable debug rendering: one line per cycle, pair indices in traversal order.
inline std::string cycle_dump(const CyclePartition& p) {
    std::string out;
    for (const auto& cyc : p.cycles) {
        for (size_t i = 0; i < cyc.size(); i += 2) {
            if (i) out += ' ';
            out += std::to_string(cyc[i] / 2);
        }
        out += '\n';
    }
    return out;
}

/// Simple path whose first and last edges are x-type; interior nodes come in
/// whole pairs. Adding the shift to every node permutes the matrix columns.
struct GoodPath {
    std::vector<int> nodes;
    GF2Vector shift;
};

/// The good-path between the two columns of pair t, obtained by deleting the
/// pair edge from its cycle in the x-type graph.
inline GoodPath good_path_between_pair(const HGMatrix& G, const GF2Vector& x, int t) {
    require(x.dim == G.dim(), ErrorKind::Input, "good path: shift dimension mismatch");
    require(!x.is_zero(), ErrorKind::Input, "good path: shift must be nonzero");
    require(t >= 0 && t < G.pairs(), ErrorKind::Input, "good path: pair index out of range");
    GoodPath p;
    p.shift = x;
    int a = 2 * t, b = 2 * t + 1;
    p.nodes.push_back(a);
    int cur = G.shift_partner(a, x);
    p.nodes.push_back(cur);
    int guard = 2 * G.n();
    while (cur != b) {
        cur ^= 1;
        p.nodes.push_back(cur);
        cur = G.shift_partner(cur, x);
        p.nodes.push_back(cur);
        require(--guard > 0, ErrorKind::Internal, "good path: walk failed to close");
    }
    return p;
}

/// Check the structural invariants of a good-path against a matrix: distinct
/// nodes, even node count, x-type edges at even positions, pair edges at odd.
inline bool good_path_valid(const HGMatrix& G, const GoodPath& p) {
    size_t len = p.nodes.size();
    if (len < 2 || len % 2 != 0) return false;
    if (p.shift.dim != G.dim() || p.shift.is_zero()) return false;
    std::vector<char> seen(G.n(), 0);
    for (int u : p.nodes) {
        if (u < 0 || u >= G.n() || seen[u]) return false;
        seen[u] = 1;
    }
    for (size_t i = 0; i + 1 < len; ++i) {
        int u = p.nodes[i], w = p.nodes[i + 1];
        if (i % 2 == 0) {
            if ((G.col(u) + p.shift) != G.col(w)) return false;
        } else {
            if (w != (u ^ 1)) return false;
        }
    }
    return true;
}

/// The reordering function: adds the path's shift to every node on it. The
/// path is revalidated against the matrix first. Equivalent to swapping the
/// columns of each x-type edge, so the result is again an HG-matrix; only the
/// two endpoint pair sums move (by the shift), and not even those when the
/// endpoints form a pair.
inline HGMatrix apply_reordering(HGMatrix G, const GoodPath& path) {
    require(good_path_valid(G, path), ErrorKind::Input, "reordering: path is not a good-path of this matrix");
    if (g_trace_reorderings.load(std::memory_order_relaxed)) {
        std::fprintf(stderr, "[trace] F shift=%#x pairs=(%d,%d) len=%zu\n", path.shift.bits,
                     path.nodes.front() / 2, path.nodes.back() / 2, path.nodes.size());
    }
    G.add_to_cols(path.nodes, path.shift);
    require(G.valid(), ErrorKind::Internal, "reordering: output is not an HG-matrix");
    return G;
}

namespace detail {

inline int index_on_path(const std::vector<int>& nodes, int col) {
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] == col) return static_cast<int>(i);
    return -1;
}

}  // namespace detail

/// Of the two columns of pair m, picks the one nearer to column 2t+1 along
/// the good-path between pair t. Requires both pairs on one cycle of the
/// x-type graph. Distances count edges; the strict comparison sends ties to
/// 2m+1, though adjacent path nodes make ties impossible.
inline int find_short_path(const HGMatrix& G, const GF2Vector& x, int t, int m) {
    require(m != t, ErrorKind::Input, "find_short_path: pairs must differ");
    GoodPath p = good_path_between_pair(G, x, t);
    int end = static_cast<int>(p.nodes.size()) - 1;  // position of column 2t+1
    int i1 = detail::index_on_path(p.nodes, 2 * m);
    int i2 = detail::index_on_path(p.nodes, 2 * m + 1);
    require(i1 >= 0 && i2 >= 0, ErrorKind::Input, "find_short_path: pairs are not on one cycle");
    int d1 = end - i1;
    int d2 = end - i2;
    return d1 < d2 ? 2 * m : 2 * m + 1;
}

/// Shared correction motif: with pair m on the cycle of pair t in the x-type
/// graph, reorders along the sub-path from column 2t+1 to the nearer column
/// of pair m. Pair sums t and m shift by x; everything else stays.
inline void shift_pair_sums(HGMatrix& G, const GF2Vector& x, int t, int m) {
    GoodPath p = good_path_between_pair(G, x, t);
    int j = find_short_path(G, x, t, m);
    int cut = detail::index_on_path(p.nodes, j);
    require(cut >= 0, ErrorKind::Internal, "shift_pair_sums: chosen column not on path");
    GoodPath sub;
    sub.shift = x;
    sub.nodes.assign(p.nodes.rbegin(), p.nodes.rend() - cut);
    G = apply_reordering(std::move(G), sub);
}

}  // namespace hbc
