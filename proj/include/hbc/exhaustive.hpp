#pragma once

#include <algorithm>
#include <chrono>
#include <random>
#include <thread>
#include <vector>

#include "hbc/solvers.hpp"

namespace hbc {

/// Outcome of a feasibility sweep over request multisets.
struct FeasibilityReport {
    int s = 0;
    int k = 0;
    int64_t n = 0;
    bool full = false;
    int64_t tried = 0;
    std::vector<std::vector<GF2Vector>> failures;  // infeasible multisets, enumeration order
    int64_t constructive_checked = 0;
    std::vector<std::vector<GF2Vector>> constructive_failures;
    double elapsed_seconds = 0.0;
};

struct ExhaustiveOptions {
    bool full = true;
    int64_t samples = 10000;
    uint64_t seed = 0;
    int jobs = 1;
    bool force = false;
};

namespace detail {

/// Non-decreasing k-tuples over [1, 2^s - 1], lexicographic.
inline std::vector<std::vector<uint32_t>> all_multisets(int s, int k) {
    uint32_t top = (uint32_t{1} << s) - 1;
    std::vector<std::vector<uint32_t>> out;
    std::vector<uint32_t> tup(k, 1);
    for (;;) {
        out.push_back(tup);
        int i = k - 1;
        while (i >= 0 && tup[i] == top) --i;
        if (i < 0) break;
        ++tup[i];
        for (int j = i + 1; j < k; ++j) tup[j] = tup[i];
    }
    return out;
}

inline std::vector<std::vector<uint32_t>> sampled_multisets(int s, int k, int64_t count, uint64_t seed) {
    uint32_t top = (uint32_t{1} << s) - 1;
    std::mt19937_64 rng(seed);
    std::vector<std::vector<uint32_t>> out;
    out.reserve(count);
    for (int64_t i = 0; i < count; ++i) {
        std::vector<uint32_t> tup(k);
        for (auto& v : tup) v = 1 + static_cast<uint32_t>(rng() % top);
        std::sort(tup.begin(), tup.end());
        out.push_back(std::move(tup));
    }
    return out;
}

}  // namespace detail

/// Sweeps request multisets of size k against the canonical server list of
/// all 2^s - 1 nonzero columns, asking the exhaustive solver for feasibility.
/// Whenever a construction's budget admits the instance, it is run too and
/// must succeed. Full enumeration is gated to s <= 4; larger dimensions use
/// seeded sampling. Output is independent of the worker count.
inline FeasibilityReport exhaustive_check(int s, int k, int64_t n, ExhaustiveOptions opts = {}) {
    require(valid_dim(s) && k >= 1, ErrorKind::Input, "exhaustive: bad parameters");
    require(n == pow2(s) - 1, ErrorKind::Input, "exhaustive: n must be 2^s - 1");
    require(n <= 31 && k <= 56, ErrorKind::Limit, "exhaustive: instance beyond brute-force reach");
    if (opts.full)
        require(s <= 4 || opts.force, ErrorKind::Limit,
                "exhaustive: full enumeration above s=4 needs force");

    auto t0 = std::chrono::steady_clock::now();
    std::vector<GF2Vector> servers;
    for (uint32_t v = 1; v < (uint32_t{1} << s); ++v) servers.emplace_back(v, s);

    auto multisets =
        opts.full ? detail::all_multisets(s, k) : detail::sampled_multisets(s, k, opts.samples, opts.seed);

    enum : uint8_t { kOk = 0, kInfeasible = 1, kConstructiveFail = 2 };
    std::vector<uint8_t> flags(multisets.size(), kOk);
    std::vector<char> checked(multisets.size(), 0);

    auto worker = [&](size_t begin, size_t stride) {
        for (size_t i = begin; i < multisets.size(); i += stride) {
            std::vector<GF2Vector> reqs;
            for (uint32_t bits : multisets[i]) reqs.emplace_back(bits, s);
            RequestBatch M = make_request_batch(s, std::move(reqs));
            auto sol = brute_force_solve(servers, M, BruteForceLimits{30, 56, true});
            if (!sol.has_value()) {
                flags[i] = kInfeasible;
                continue;
            }
            bool ran = false;
            try {
                if (M.k() <= fb23_kmax(s)) {
                    fb23_solve(M);
                    ran = true;
                }
                if (s >= 7 && M.k() <= fb56_kmax(s)) {
                    fb56_solve(M);
                    ran = true;
                }
                if (M.k() == pow2(s - 1) && row_ops_to_all_ones(M).has_value()) {
                    b_solution(M);
                    ran = true;
                }
            } catch (const Error&) {
                flags[i] = kConstructiveFail;
            }
            checked[i] = ran ? 1 : 0;
        }
    };

    int jobs = std::max(1, opts.jobs);
    if (jobs == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w) pool.emplace_back(worker, static_cast<size_t>(w), static_cast<size_t>(jobs));
        for (auto& th : pool) th.join();
    }

    FeasibilityReport rep;
    rep.s = s;
    rep.k = k;
    rep.n = n;
    rep.full = opts.full;
    rep.tried = static_cast<int64_t>(multisets.size());
    for (size_t i = 0; i < multisets.size(); ++i) {
        std::vector<GF2Vector> reqs;
        for (uint32_t bits : multisets[i]) reqs.emplace_back(bits, s);
        if (flags[i] == kInfeasible) rep.failures.push_back(reqs);
        if (flags[i] == kConstructiveFail) rep.constructive_failures.push_back(reqs);
        rep.constructive_checked += checked[i];
    }
    rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace hbc
