#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "hbc/solution.hpp"

namespace hbc {

struct VerifyResult {
    bool ok = false;
    std::string diagnostic;
    explicit operator bool() const { return ok; }
};

/// Ground truth for every solution in this project: recovery sets must be
/// pairwise disjoint, in range, and XOR to their requests; servers must be
/// nonzero. Names the first violation on failure.
inline VerifyResult verify_solution(const std::vector<GF2Vector>& servers, const RequestBatch& M,
                                    const Solution& sol) {
    auto failed = [](std::string msg) { return VerifyResult{false, std::move(msg)}; };
    int n = static_cast<int>(servers.size());
    for (int j = 0; j < n; ++j) {
        if (servers[j].dim != M.dim) return failed("server " + std::to_string(j) + ": dimension mismatch");
        if (servers[j].is_zero()) return failed("server " + std::to_string(j) + ": stores the zero combination");
    }
    if (static_cast<int>(sol.recovery_sets.size()) != M.k())
        return failed("expected " + std::to_string(M.k()) + " recovery sets, got " +
                      std::to_string(sol.recovery_sets.size()));
    std::vector<char> used(n, 0);
    for (int i = 0; i < M.k(); ++i) {
        GF2Vector sum{0, M.dim};
        for (int idx : sol.recovery_sets[i]) {
            if (idx < 0 || idx >= n)
                return failed("request " + std::to_string(i) + ": server index " + std::to_string(idx) +
                              " out of range");
            if (used[idx])
                return failed("request " + std::to_string(i) + ": server " + std::to_string(idx) +
                              " is already taken");
            used[idx] = 1;
            sum = sum + servers[idx];
        }
        if (sum != M[i]) return failed("request " + std::to_string(i) + ": recovery sum mismatch");
    }
    return {true, ""};
}

struct BruteForceLimits {
    int max_servers = 16;
    int max_requests = 8;
    bool force = false;
};

namespace detail {

struct BruteState {
    const std::vector<GF2Vector>* servers;
    const RequestBatch* requests;
    std::vector<std::vector<int>> sets;
    std::unordered_set<uint64_t> dead;  // (free-column mask, cursor) known infeasible
};

inline bool brute_request_span(const BruteState& st, uint32_t mask, const GF2Vector& v) {
    // Quick prune: v must lie in the span of the free columns.
    uint32_t lead[kMaxDim] = {};
    uint32_t rest = v.bits;
    for (int j = 0; j < static_cast<int>(st.servers->size()); ++j) {
        if (!((mask >> j) & 1u)) continue;
        uint32_t w = (*st.servers)[j].bits;
        while (w) {
            int b = std::bit_width(w) - 1;
            if (lead[b])
                w ^= lead[b];
            else {
                lead[b] = w;
                break;
            }
        }
    }
    while (rest) {
        int b = std::bit_width(rest) - 1;
        if (!lead[b]) return false;
        rest ^= lead[b];
    }
    return true;
}

inline bool brute_extend(BruteState& st, uint32_t mask, int cursor);

/// Enumerates subsets of the free columns of exactly the given size, smallest
/// index first, recursing into the next request on an exact hit.
inline bool brute_subsets(BruteState& st, uint32_t mask, int cursor, int size, int start, uint32_t chosen,
                          GF2Vector partial) {
    const auto& servers = *st.servers;
    int n = static_cast<int>(servers.size());
    if (size == 0) {
        if (partial != (*st.requests)[cursor]) return false;
        std::vector<int> set;
        for (int j = 0; j < n; ++j)
            if ((chosen >> j) & 1u) set.push_back(j);
        st.sets.push_back(std::move(set));
        if (brute_extend(st, mask & ~chosen, cursor + 1)) return true;
        st.sets.pop_back();
        return false;
    }
    for (int j = start; j <= n - size; ++j) {
        if (!((mask >> j) & 1u)) continue;
        if (brute_subsets(st, mask, cursor, size - 1, j + 1, chosen | (1u << j), partial + servers[j]))
            return true;
    }
    return false;
}

inline bool brute_extend(BruteState& st, uint32_t mask, int cursor) {
    if (cursor == st.requests->k()) return true;
    uint64_t key = (uint64_t{mask} << 8) | static_cast<uint64_t>(cursor);
    if (st.dead.count(key)) return false;
    if (brute_request_span(st, mask, (*st.requests)[cursor])) {
        int free_cols = std::popcount(mask);
        for (int size = 1; size <= free_cols; ++size)
            if (brute_subsets(st, mask, cursor, size, 0, 0, GF2Vector{0, st.requests->dim})) return true;
    }
    st.dead.insert(key);
    return false;
}

}  // namespace detail

/// Exhaustive backtracking over disjoint recovery sets, independent of every
/// construction in this project. Depth-first over requests in order; subsets
/// are tried smallest-first then lexicographically, so identical inputs give
/// identical solutions. Practical only for small instances; the soft caps
/// guard against accidental blowups.
inline std::optional<Solution> brute_force_solve(const std::vector<GF2Vector>& servers, const RequestBatch& M,
                                                 BruteForceLimits lim = {}) {
    int n = static_cast<int>(servers.size());
    require(n <= 31 && M.k() <= 56, ErrorKind::Limit, "brute force: instance beyond hard limits");
    if (!lim.force)
        require(n <= lim.max_servers && M.k() <= lim.max_requests, ErrorKind::Limit,
                "brute force: instance beyond soft limits (use force to override)");
    for (const auto& srv : servers)
        require(srv.dim == M.dim, ErrorKind::Input, "brute force: server dimension mismatch");

    detail::BruteState st;
    st.servers = &servers;
    st.requests = &M;
    uint32_t full = static_cast<uint32_t>((uint64_t{1} << n) - 1);
    if (!detail::brute_extend(st, full, 0)) return std::nullopt;

    Solution sol;
    sol.s = M.dim;
    sol.strategy = Strategy::oracle;
    sol.servers = servers;
    sol.recovery_sets = std::move(st.sets);
    auto check = verify_solution(servers, M, sol);
    require(check.ok, ErrorKind::Internal, "brute force: produced an invalid solution: " + check.diagnostic);
    return sol;
}

}  // namespace hbc
