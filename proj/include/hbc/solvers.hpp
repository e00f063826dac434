#pragma once

#include <algorithm>
#include <numeric>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hbc/oracle.hpp"
#include "hbc/solution.hpp"
#include "hbc/transforms.hpp"

namespace hbc {

inline int64_t pow2(int e) { return int64_t{1} << e; }

// Largest admissible batch per construction.
inline int64_t fb23_kmax(int s) { return pow2(s) / 3; }  // floor((2/3) * 2^{s-1})
inline int64_t fb56_kmax(int s) { return s >= 7 ? (5 * pow2(s - 1)) / 6 - s : fb23_kmax(s); }
inline int64_t alpha_kmax(int s) { return pow2(s - 1); }
inline int64_t opt_kmax(int s) { return pow2(s); }

/// Number of extra all-e columns the alpha construction appends: ceil((3a-2) * 2^{s-2}).
inline int64_t alpha_tail_count(int s, const Rational& a) {
    int64_t excess = 3 * a.num - 2 * a.den;  // (3a - 2) * den, nonnegative for a >= 2/3
    require(excess >= 0, ErrorKind::Input, "alpha below 2/3");
    if (s >= 2) return ceil_div(excess * pow2(s - 2), a.den);
    return ceil_div(excess, 2 * a.den);
}

inline int64_t alpha_server_count(int s, const Rational& a) { return pow2(s) + alpha_tail_count(s, a) - 1; }

/// Counters exposed for instrumentation of the pair-binding search.
struct SolveStats {
    int64_t bad_case_corrections = 0;
    int64_t binding_restarts = 0;
};

/// Working snapshot between solver stages.
struct StageState {
    HGMatrix matrix;
    int frozen = 0;             // leading pairs bound to completed recovery sums
    std::vector<int> bad;
    int request_cursor = 0;
    RequestBatch work;          // requests, possibly permuted in place
    std::vector<int> ids;       // work position -> original request index
};

namespace detail {

/// Drops zero columns, remaps set indices, verifies, and packages a Solution.
inline Solution finalize_solution(int s, Strategy strategy, std::optional<Rational> alpha,
                                  const std::vector<GF2Vector>& cols,
                                  std::vector<std::vector<int>> sets_by_request, const RequestBatch& M,
                                  int64_t expected_servers) {
    std::vector<int> remap(cols.size(), -1);
    Solution sol;
    sol.s = s;
    sol.strategy = strategy;
    sol.alpha = alpha;
    for (size_t i = 0; i < cols.size(); ++i) {
        if (!cols[i].is_zero()) {
            remap[i] = sol.n_servers();
            sol.servers.push_back(cols[i]);
        }
    }
    sol.recovery_sets.reserve(sets_by_request.size());
    for (auto& set : sets_by_request) {
        std::vector<int> mapped;
        for (int idx : set)
            if (remap[idx] >= 0) mapped.push_back(remap[idx]);
        std::sort(mapped.begin(), mapped.end());
        sol.recovery_sets.push_back(std::move(mapped));
    }
    require(sol.n_servers() == expected_servers, ErrorKind::Internal,
            "solution: server count does not match the construction's promise");
    auto check = verify_solution(sol.servers, M, sol);
    require(check.ok, ErrorKind::Internal, "solution failed verification: " + check.diagnostic);
    return sol;
}

/// Hadamard solution when the batch holds a single request value: the pairing
/// of cosets {v, v+x} serves every request from its own pair.
inline Solution single_kind_solution(const RequestBatch& M, Strategy strategy,
                                     std::optional<Rational> alpha, int64_t tail, int64_t expected) {
    HGMatrix G = uniform_pairsum_hg(M.dim, M[0]);
    std::vector<GF2Vector> cols = G.columns();
    for (int64_t i = 0; i < tail; ++i) cols.push_back(unit_last(M.dim));
    std::vector<std::vector<int>> sets(M.k());
    for (int t = 0; t < M.k(); ++t) sets[t] = {2 * t, 2 * t + 1};
    return finalize_solution(M.dim, strategy, alpha, cols, std::move(sets), M, expected);
}

/// Reorders along the spare pair's own good-path so that column n-2 takes the
/// given value. No pair sum moves.
inline void retarget_spare_column(HGMatrix& G, const GF2Vector& want) {
    int last = G.pairs() - 1;
    if (G.col(G.n() - 2) == want) return;
    GF2Vector x = G.col(G.n() - 2) + want;
    GoodPath path = good_path_between_pair(G, x, last);
    G = apply_reordering(std::move(G), path);
    require(G.col(G.n() - 2) == want, ErrorKind::Internal, "spare column retarget missed");
}

}  // namespace detail

/// First pass of the triple-set pipeline: binds pair t to request t up to an
/// additive e, collecting the indices that came out offset (the bad set).
inline std::pair<HGMatrix, std::vector<int>> fb_solution(int tau, const RequestBatch& M) {
    int s = M.dim;
    require(M.k() >= 1, ErrorKind::Input, "fb_solution: empty batch");
    require(tau <= M.k(), ErrorKind::Input, "fb_solution: tau exceeds batch size");
    HGMatrix G = canonical_hg(s);
    require(tau <= G.pairs() - 1, ErrorKind::Input, "fb_solution: tau exceeds available pairs");
    std::vector<int> bad;
    for (int t = 0; t < tau; ++t) {
        auto out = find_good_or_bad_request(std::move(G), t, M[t]);
        G = std::move(out.matrix);
        if (out.bad) bad.push_back(t);
    }
    GF2Vector e = unit_last(s);
    for (int t = 0; t < tau; ++t) {
        bool is_bad = std::binary_search(bad.begin(), bad.end(), t);
        require(G.pair_sum(t) == (is_bad ? M[t] + e : M[t]), ErrorKind::Internal,
                "fb_solution: pair sum postcondition violated");
    }
    return {std::move(G), std::move(bad)};
}

/// Repairs bad pairs two at a time whenever they share a cycle of the e-type
/// graph, then clears any bad pair that shares a cycle with the spare pair.
/// Afterwards every e-cycle holds at most one bad index and none holds the
/// spare, which caps the bad set at half the bound prefix.
inline std::pair<HGMatrix, std::vector<int>> clear_bad_cycles(HGMatrix G, std::vector<int> bad) {
    GF2Vector e = unit_last(G.dim());
    int last = G.pairs() - 1;
    for (;;) {
        if (bad.empty()) break;
        auto part = cycle_partition(build_xtype_graph(G, e));
        int t1 = -1, t2 = -1;
        for (size_t i = 0; i < bad.size() && t1 < 0; ++i) {
            for (size_t j = i + 1; j < bad.size(); ++j) {
                if (part.membership[bad[i]] == part.membership[bad[j]]) {
                    t1 = bad[i];
                    t2 = bad[j];
                    break;
                }
            }
        }
        if (t1 >= 0) {
            shift_pair_sums(G, e, t1, t2);
            bad.erase(std::remove(bad.begin(), bad.end(), t1), bad.end());
            bad.erase(std::remove(bad.begin(), bad.end(), t2), bad.end());
            continue;
        }
        int tr = -1;
        for (int b : bad) {
            if (part.membership[b] == part.membership[last]) {
                tr = b;
                break;
            }
        }
        if (tr >= 0) {
            shift_pair_sums(G, e, tr, last);
            bad.erase(std::remove(bad.begin(), bad.end(), tr), bad.end());
            continue;
        }
        break;
    }
    return {std::move(G), std::move(bad)};
}

/// Builds recovery sets over a finished matrix for the pair/triple layouts.
/// Good pairs stand alone; bad pairs borrow a redundant pair (sum e), a tail
/// column (value e), or as a last resort the spare column.
inline Solution assemble_recovery_sets(const HGMatrix& G, const std::vector<int>& bad, const RequestBatch& M,
                                       Strategy layout, std::optional<Rational> alpha_opt = {}) {
    int s = G.dim();
    int n = G.n();
    int half = n / 2;
    GF2Vector e = unit_last(s);
    std::vector<GF2Vector> cols = G.columns();
    std::vector<std::vector<int>> sets(M.k());
    std::vector<int> B = bad;
    std::sort(B.begin(), B.end());

    if (layout == Strategy::fb23) {
        int k = M.k();
        std::vector<int> pool;
        for (int r = k; r < half - 1; ++r) pool.push_back(r);
        require(B.size() <= pool.size(), ErrorKind::Internal,
                "assemble: bad set exceeds the redundant pool");
        for (int t = 0; t < k; ++t)
            if (!std::binary_search(B.begin(), B.end(), t)) sets[t] = {2 * t, 2 * t + 1};
        for (size_t i = 0; i < B.size(); ++i) {
            int r = pool[i];
            require(G.pair_sum(r) == e, ErrorKind::Internal, "assemble: redundant pair sum is not e");
            sets[B[i]] = {2 * B[i], 2 * B[i] + 1, 2 * r, 2 * r + 1};
        }
        return detail::finalize_solution(s, Strategy::fb23, {}, cols, std::move(sets), M, n - 1);
    }

    require(layout == Strategy::alpha && alpha_opt.has_value(), ErrorKind::Input,
            "assemble: unsupported layout");
    Rational a = *alpha_opt;
    int64_t tail = alpha_tail_count(s, a);
    for (int64_t i = 0; i < tail; ++i) cols.push_back(e);

    if (a == Rational(1, 1)) {
        require(M.k() == half, ErrorKind::Input, "assemble: alpha=1 expects 2^{s-1} requests");
        for (int t = 0; t < half - 1; ++t)
            if (!std::binary_search(B.begin(), B.end(), t)) sets[t] = {2 * t, 2 * t + 1};
        require(static_cast<int64_t>(B.size()) <= tail, ErrorKind::Internal,
                "assemble: bad set exceeds the tail");
        for (size_t i = 0; i < B.size(); ++i) sets[B[i]] = {2 * B[i], 2 * B[i] + 1, n + static_cast<int>(i)};
        require(cols[n - 2] == M[half - 1], ErrorKind::Internal,
                "assemble: spare column does not hold the last request");
        sets[half - 1] = {n - 2};
    } else {
        int k = M.k();
        std::vector<int> pool;
        for (int r = k; r < half - 1; ++r) pool.push_back(r);
        bool spare_used = static_cast<int64_t>(B.size()) > static_cast<int64_t>(pool.size()) + tail;
        std::vector<int> rest = B;
        if (spare_used) {
            int bmax = rest.back();
            rest.pop_back();
            require(cols[n - 2] == e, ErrorKind::Internal, "assemble: spare column is not e");
            sets[bmax] = {2 * bmax, 2 * bmax + 1, n - 2};
        }
        require(static_cast<int64_t>(rest.size()) <= static_cast<int64_t>(pool.size()) + tail,
                ErrorKind::Internal, "assemble: bad set exceeds redundant pool plus tail");
        for (int t = 0; t < k; ++t)
            if (!std::binary_search(B.begin(), B.end(), t)) sets[t] = {2 * t, 2 * t + 1};
        for (size_t i = 0; i < rest.size(); ++i) {
            if (i < pool.size()) {
                int r = pool[i];
                require(G.pair_sum(r) == e, ErrorKind::Internal, "assemble: redundant pair sum is not e");
                sets[rest[i]] = {2 * rest[i], 2 * rest[i] + 1, 2 * r, 2 * r + 1};
            } else {
                int slot = n + static_cast<int>(i - pool.size());
                sets[rest[i]] = {2 * rest[i], 2 * rest[i] + 1, slot};
            }
        }
    }
    return detail::finalize_solution(s, Strategy::alpha, a, cols, std::move(sets), M,
                                     alpha_server_count(s, a));
}

/// The floor((2/3) 2^{s-1}) construction over 2^s - 1 servers.
inline Solution fb23_solve(const RequestBatch& M) {
    int s = M.dim;
    require(M.k() >= 1, ErrorKind::Input, "fb23: empty batch");
    require(M.k() <= fb23_kmax(s), ErrorKind::Budget, "fb23: too many requests");
    if (M.single_kind()) return detail::single_kind_solution(M, Strategy::fb23, {}, 0, pow2(s) - 1);
    auto [G, bad] = fb_solution(M.k(), M);
    auto [G2, bad2] = clear_bad_cycles(std::move(G), std::move(bad));
    return assemble_recovery_sets(G2, bad2, M, Strategy::fb23);
}

/// The alpha family: floor(alpha 2^{s-1}) requests over
/// 2^s + ceil((3 alpha - 2) 2^{s-2}) - 1 servers, 2/3 <= alpha <= 1.
inline Solution alpha_fb_solution(const RequestBatch& M, const Rational& a) {
    int s = M.dim;
    require(Rational(2, 3) <= a && a <= Rational(1, 1), ErrorKind::Budget, "alpha out of range [2/3, 1]");
    int64_t half = pow2(s - 1);
    int64_t expected_k = a.floor_scale(half);
    require(M.k() == expected_k, ErrorKind::Budget,
            "alpha: batch size must equal floor(alpha*2^{s-1}) = " + std::to_string(expected_k));
    require(M.k() >= 1, ErrorKind::Input, "alpha: empty batch");
    int64_t tail = alpha_tail_count(s, a);
    if (M.single_kind())
        return detail::single_kind_solution(M, Strategy::alpha, a, tail, alpha_server_count(s, a));

    bool full = a == Rational(1, 1);
    int tau = full ? static_cast<int>(half - 1) : M.k();
    auto [G, bad] = fb_solution(tau, M);
    auto [G2, bad2] = clear_bad_cycles(std::move(G), std::move(bad));
    detail::retarget_spare_column(G2, full ? M[M.k() - 1] : unit_last(s));
    return assemble_recovery_sets(G2, bad2, M, Strategy::alpha, a);
}

/// The length-doubling construction: 2^s requests over 2^{s+1} - 2 servers.
/// Requests are lifted one dimension, solved there, and the extra row is
/// dropped, which erases every residual e offset at once.
inline Solution opt_fb_solution(const RequestBatch& M) {
    int s = M.dim;
    require(s + 1 <= kMaxDim, ErrorKind::Input, "opt: dimension cap exceeded");
    require(M.k() == opt_kmax(s), ErrorKind::Budget, "opt: batch size must equal 2^s");
    int d = s + 1;
    std::vector<GF2Vector> lifted;
    lifted.reserve(M.k());
    for (const auto& v : M.requests) lifted.emplace_back(v.bits, d);
    RequestBatch Mlift = make_request_batch(d, std::move(lifted));

    std::vector<GF2Vector> cols;
    std::vector<std::vector<int>> sets(M.k());
    int n = 2 * static_cast<int>(pow2(s));
    if (Mlift.single_kind()) {
        cols = uniform_pairsum_hg(d, Mlift[0]).columns();
        for (int t = 0; t < M.k(); ++t) sets[t] = {2 * t, 2 * t + 1};
    } else {
        int tau = static_cast<int>(pow2(s)) - 1;
        auto [G, bad] = fb_solution(tau, Mlift);
        GF2Vector y{0, d};
        for (const auto& w : Mlift.requests) y = y + w;
        if (!y.is_zero()) detail::retarget_spare_column(G, y);
        for (int t = 0; t < tau; ++t) sets[t] = {2 * t, 2 * t + 1};
        sets[M.k() - 1] = y.is_zero() ? std::vector<int>{n - 2, n - 1} : std::vector<int>{n - 1};
        cols = G.columns();
    }
    // Remove the lifted row; every vector of F_2^s now appears exactly twice.
    for (auto& c : cols) {
        c.bits &= static_cast<uint32_t>(pow2(s)) - 1;
        c.dim = s;
    }
    require(is_double_hg(cols, s), ErrorKind::Internal, "opt: projection is not a double HG-matrix");
    return detail::finalize_solution(s, Strategy::opt, {}, cols, std::move(sets), M, pow2(s + 1) - 2);
}

namespace detail {

/// One iteration of the direct pair-binding search: try to place two free
/// columns as pair t so that some pending request is met without moving any
/// bound pair sum. Returns false when every candidate fails.
inline bool try_bind_pair(HGMatrix& G, RequestBatch& M, std::vector<int>& ids, int t, int tau) {
    int n = G.n();
    std::unordered_set<uint32_t> tried;
    for (int hpos = 2 * t + 1; hpos < n; ++hpos) {
        if (hpos != 2 * t + 1) G.swap_cols(hpos, 2 * t + 1);
        GF2Vector y = G.pair_sum(t);
        tried.clear();
        for (int m = t; m < tau; ++m) {
            const GF2Vector v = M[m];
            if (!tried.insert(v.bits).second) continue;
            if (v == y) {
                std::swap(M.requests[t], M.requests[m]);
                std::swap(ids[t], ids[m]);
                return true;
            }
            GF2Vector a = v + y;
            GoodPath path = good_path_between_pair(G, a, t);
            int ell = -1;
            for (size_t i = 1; i + 1 < path.nodes.size(); i += 2) {
                int tp = path.nodes[i] / 2;
                if (tp > t) {
                    ell = tp;
                    break;
                }
            }
            if (ell < 0) continue;
            std::swap(M.requests[t], M.requests[m]);
            std::swap(ids[t], ids[m]);
            shift_pair_sums(G, a, t, ell);
            require(G.pair_sum(t) == v, ErrorKind::Internal, "pair binding missed its request");
            return true;
        }
        if (hpos != 2 * t + 1) G.swap_cols(hpos, 2 * t + 1);
    }
    return false;
}

inline HGMatrix fb_solution2_run(int tau, RequestBatch& M, std::vector<int>& ids, SolveStats* stats) {
    int s = M.dim;
    HGMatrix G = canonical_hg(s);
    int n = G.n();
    require(tau <= n / 3 && tau <= M.k(), ErrorKind::Input, "fb_solution2: tau exceeds floor(n/3)");
    for (int t = 0; t < tau; ++t) {
        int attempts = 0;
        while (!try_bind_pair(G, M, ids, t, tau)) {
            require(attempts < 32, ErrorKind::Internal,
                    "fb_solution2: search exhausted at iteration " + std::to_string(t) + " of " +
                        std::to_string(tau) + " (s=" + std::to_string(s) + ")");
            GF2Vector a = M[t] + G.pair_sum(t);
            require(!a.is_zero(), ErrorKind::Internal, "fb_solution2: zero shift after failed search");
            int tp = bad_case_correction(G, a, M, t);
            std::swap(ids[t], ids[tp]);
            if (stats) ++stats->bad_case_corrections;
            ++attempts;
        }
        if (stats && attempts) stats->binding_restarts += attempts;
        for (int r = 0; r <= t; ++r)
            require(G.pair_sum(r) == M[r], ErrorKind::Internal, "fb_solution2: bound prefix drifted");
    }
    return G;
}

}  // namespace detail

/// Direct pair binding: the first tau <= floor(n/3) requests each get a
/// recovery set of exactly two columns. Requests are permuted in place; the
/// returned state carries the permutation.
inline StageState fb_solution2(int tau, RequestBatch M, SolveStats* stats = nullptr) {
    std::vector<int> ids(M.k());
    std::iota(ids.begin(), ids.end(), 0);
    HGMatrix G = detail::fb_solution2_run(tau, M, ids, stats);
    return StageState{std::move(G), tau, {}, tau, std::move(M), std::move(ids)};
}

/// Size-4 stage: each iteration claims a fresh window of scratch columns,
/// aligns two window pairs to a common sum, then steers the lead pair to the
/// request. Good outcomes use the lead pair alone; bad ones take the whole
/// window of four. Returns the window indices that came out bad.
inline std::vector<int> fb_solution3(HGMatrix& G, int tau, const RequestBatch& rest) {
    int s = G.dim();
    require(s >= 7, ErrorKind::Input, "fb_solution3: needs s >= 7");
    require(tau <= rest.k(), ErrorKind::Input, "fb_solution3: tau exceeds pending requests");
    std::vector<int> bad;
    for (int t = 0; t < tau; ++t) {
        int h = reorder_dependent_pairs(G, t);
        find_equiv_sums(G, t, h);
        require(G.pair_sum(2 * t) == G.pair_sum(2 * t + 1), ErrorKind::Internal,
                "fb_solution3: window pairs not aligned");
        auto out = find_good_or_bad_request(std::move(G), 2 * t, rest[t]);
        G = std::move(out.matrix);
        if (out.bad) bad.push_back(t);
    }
    return bad;
}

/// The floor((5/6) 2^{s-1}) - s construction over 2^s - 1 servers, s >= 7.
/// Stage one binds floor(n/3) requests to plain pairs; the unused columns are
/// then regrouped in front and stage two serves the remainder from size-4
/// windows, with the spare pair covering one final request.
inline Solution fb56_solve(const RequestBatch& M) {
    int s = M.dim;
    if (s < 7) return fb23_solve(M);
    require(M.k() >= 1, ErrorKind::Input, "fb56: empty batch");
    require(M.k() <= fb56_kmax(s), ErrorKind::Budget, "fb56: too many requests");
    if (M.single_kind()) return detail::single_kind_solution(M, Strategy::fb56, {}, 0, pow2(s) - 1);

    int n = static_cast<int>(pow2(s));
    int k = M.k();
    int tau1 = std::min<int64_t>(k, n / 3);
    RequestBatch work = M;
    std::vector<int> ids(k);
    std::iota(ids.begin(), ids.end(), 0);
    HGMatrix G = detail::fb_solution2_run(tau1, work, ids, nullptr);

    std::vector<std::vector<int>> sets_by_pos(k);
    if (k <= tau1) {
        for (int t = 0; t < k; ++t) sets_by_pos[t] = {2 * t, 2 * t + 1};
    } else {
        // Regroup: unused columns first, bound pairs after them, spare pair
        // fixed at the end. Bound pairs move as blocks so their sums survive.
        int moved = n - 2 * tau1 - 2;
        std::vector<GF2Vector> perm;
        perm.reserve(n);
        for (int i = 2 * tau1; i < n - 2; ++i) perm.push_back(G.col(i));
        for (int i = 0; i < 2 * tau1; ++i) perm.push_back(G.col(i));
        perm.push_back(G.col(n - 2));
        perm.push_back(G.col(n - 1));
        G = HGMatrix(s, std::move(perm));
        for (int t = 0; t < tau1; ++t) sets_by_pos[t] = {moved + 2 * t, moved + 2 * t + 1};

        int stage2 = k - tau1 - 1;
        require(stage2 <= pow2(s - 1) / 6 - s, ErrorKind::Internal, "fb56: stage-2 overflow");
        if (stage2 > 0) {
            require(4 * (stage2 - 1) + 2 * (s + 1) <= moved, ErrorKind::Internal,
                    "fb56: scratch window exceeds the unused block");
            RequestBatch rest{s, {work.requests.begin() + tau1, work.requests.begin() + tau1 + stage2}};
            std::vector<int> bad = fb_solution3(G, stage2, rest);
            for (int t = 0; t < stage2; ++t) sets_by_pos[tau1 + t] = {4 * t, 4 * t + 1};
            for (int b : bad) sets_by_pos[tau1 + b] = {4 * b, 4 * b + 1, 4 * b + 2, 4 * b + 3};
        }
        const GF2Vector& vlast = work[k - 1];
        if (G.pair_sum(n / 2 - 1) == vlast) {
            sets_by_pos[k - 1] = {n - 2, n - 1};
        } else {
            detail::retarget_spare_column(G, vlast);
            sets_by_pos[k - 1] = {n - 2};
        }
    }
    std::vector<std::vector<int>> sets(k);
    for (int pos = 0; pos < k; ++pos) sets[ids[pos]] = std::move(sets_by_pos[pos]);
    return detail::finalize_solution(s, Strategy::fb56, {}, G.columns(), std::move(sets), M, pow2(s) - 1);
}

/// Non-recursive batch decoder for 2^{s-1} requests over 2^s - 1 servers.
/// Requires a row combination of the request matrix equal to all ones; the
/// solve runs in that basis, where a parity argument guarantees each
/// iteration finds a free pair on its cycle, and the inverse row operations
/// carry the finished matrix back.
inline Solution b_solution(const RequestBatch& M) {
    int s = M.dim;
    int n = static_cast<int>(pow2(s));
    require(M.k() == n / 2, ErrorKind::Budget, "batch: batch size must equal 2^{s-1}");
    auto red = row_ops_to_all_ones(M);
    require(red.has_value(), ErrorKind::Budget, "batch: not reducible, no row combination is all ones");
    const RequestBatch& Mp = red->transformed;

    std::vector<std::vector<int>> sets(M.k());
    HGMatrix G = canonical_hg(s);
    if (Mp.single_kind()) {
        G = uniform_pairsum_hg(s, Mp[0]);
        for (int t = 0; t < M.k(); ++t) sets[t] = {2 * t, 2 * t + 1};
    } else {
        int tau = n / 2;
        for (int t = 0; t <= tau - 2; ++t) {
            for (int r = 0; r < t; ++r)
                require(first_coord(G.pair_sum(r)) == 1, ErrorKind::Internal, "batch: bound prefix lost parity");
            if (first_coord(G.pair_sum(t)) == 1) {
                int p = -1, h = -1;
                for (int i = 2 * t; i < n && p < 0; ++i)
                    for (int j = i + 1; j < n; ++j)
                        if (first_coord(G.col(i)) == first_coord(G.col(j))) {
                            p = i;
                            h = j;
                            break;
                        }
                require(p >= 0, ErrorKind::Internal, "batch: no equal-parity column pair");
                if (p != 2 * t) {
                    G.swap_cols(p, 2 * t);
                    if (h == 2 * t) h = p;
                }
                if (h != 2 * t + 1) G.swap_cols(h, 2 * t + 1);
            }
            GF2Vector y = G.pair_sum(t);
            require(first_coord(y) == 0 && first_coord(Mp[t]) == 1, ErrorKind::Internal,
                    "batch: parity setup failed");
            GF2Vector a = Mp[t] + y;
            GoodPath path = good_path_between_pair(G, a, t);
            int m = -1;
            for (size_t i = 1; i + 1 < path.nodes.size(); i += 2) {
                int tp = path.nodes[i] / 2;
                if (tp > t) {
                    m = tp;
                    break;
                }
            }
            require(m >= 0, ErrorKind::Internal, "batch: cycle holds no free pair");
            shift_pair_sums(G, a, t, m);
            require(G.pair_sum(t) == Mp[t], ErrorKind::Internal, "batch: pair sum missed request");
            sets[t] = {2 * t, 2 * t + 1};
        }
        const GF2Vector& vlast = Mp[tau - 1];
        if (G.pair_sum(n / 2 - 1) == vlast) {
            sets[tau - 1] = {n - 2, n - 1};
        } else {
            detail::retarget_spare_column(G, vlast);
            sets[tau - 1] = {n - 2};
        }
    }
    std::vector<GF2Vector> cols = G.columns();
    for (auto& c : cols) apply_row_ops_inverse(c, red->ops);
    return detail::finalize_solution(s, Strategy::batch, {}, cols, std::move(sets), M, pow2(s) - 1);
}

/// Strategy dispatch. Auto prefers the tightest construction whose budget
/// admits (k, s); the batch decoder runs only on explicit request.
inline Solution solve(const RequestBatch& M, Strategy strategy, std::optional<Rational> alpha = {}) {
    int s = M.dim;
    require(M.k() >= 1, ErrorKind::Input, "solve: empty batch");
    switch (strategy) {
        case Strategy::fb23: return fb23_solve(M);
        case Strategy::fb56: return fb56_solve(M);
        case Strategy::opt: return opt_fb_solution(M);
        case Strategy::batch: return b_solution(M);
        case Strategy::alpha:
            require(alpha.has_value(), ErrorKind::Input, "solve: alpha strategy needs --alpha p/q");
            return alpha_fb_solution(M, *alpha);
        case Strategy::automatic: break;
        case Strategy::oracle: fail(ErrorKind::Input, "solve: oracle is not a construction");
    }
    int64_t k = M.k();
    if (s >= 7 && k <= fb56_kmax(s)) return fb56_solve(M);
    if (k <= fb23_kmax(s)) return fb23_solve(M);
    if (k <= alpha_kmax(s)) return alpha_fb_solution(M, Rational(k, pow2(s - 1)));
    if (k <= opt_kmax(s)) {
        // Pad to the full batch the doubling construction expects, then keep
        // only the requested sets.
        RequestBatch padded = M;
        while (padded.k() < opt_kmax(s)) padded.requests.push_back(unit_last(s));
        Solution sol = opt_fb_solution(padded);
        sol.recovery_sets.resize(M.k());
        auto check = verify_solution(sol.servers, M, sol);
        require(check.ok, ErrorKind::Internal, "solve: truncated solution failed verification");
        return sol;
    }
    fail(ErrorKind::Budget, "solve: no construction admits k > 2^s requests");
}

}  // namespace hbc
