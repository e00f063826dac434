// Command-line front end: solve batches, verify solution documents, run the
// exhaustive feasibility sweep, print the parameter table, and stress the
// constructions with seeded random batches.

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "hbc/hbc.hpp"

namespace {

int exit_code_for(const hbc::Error& e) {
    switch (e.kind()) {
        case hbc::ErrorKind::Input: return 1;
        case hbc::ErrorKind::Budget: return 2;
        case hbc::ErrorKind::Limit: return 4;
        case hbc::ErrorKind::Internal: return 1;
    }
    return 1;
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    hbc::require(out.good(), hbc::ErrorKind::Input, "cannot open output file: " + out_path);
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    hbc::require(in.good(), hbc::ErrorKind::Input, "cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct SolveArgs {
    int s = 0;
    std::string strategy = "auto";
    std::string alpha;
    std::string requests_path;
    int random_k = 0;
    uint64_t seed = 0;
    std::string out_path;
};

int cmd_solve(const SolveArgs& args) {
    hbc::require(args.requests_path.empty() != (args.random_k == 0), hbc::ErrorKind::Input,
                 "solve: pass exactly one of --requests FILE or --random K");
    auto strategy = hbc::parse_strategy(args.strategy);
    hbc::require(strategy.has_value() && *strategy != hbc::Strategy::oracle, hbc::ErrorKind::Input,
                 "solve: unknown strategy '" + args.strategy + "'");
    std::optional<hbc::Rational> alpha;
    if (!args.alpha.empty()) alpha = hbc::parse_rational(args.alpha);
    hbc::require(alpha.has_value() == (*strategy == hbc::Strategy::alpha), hbc::ErrorKind::Input,
                 "solve: --alpha is required for, and only for, --strategy alpha");

    hbc::RequestBatch M = args.requests_path.empty()
                              ? hbc::random_batch(args.s, args.random_k, args.seed)
                              : hbc::parse_request_file(args.requests_path, args.s);
    hbc::Solution sol = hbc::solve(M, *strategy, alpha);
    write_output(args.out_path, hbc::solution_to_json(sol, M));
    return 0;
}

int cmd_verify(const std::string& solution_path, const std::string& requests_path) {
    hbc::ParsedSolution parsed = hbc::parse_solution_json(read_file(solution_path));
    hbc::RequestBatch M = hbc::parse_request_file(requests_path, parsed.sol.s);
    if (hbc::request_hash_hex(M) != parsed.stored_hash) {
        std::cerr << "verify: request_hash mismatch, solution does not belong to this batch\n";
        return 3;
    }
    auto res = hbc::verify_solution(parsed.sol.servers, M, parsed.sol);
    if (!res.ok) {
        std::cerr << "verify: " << res.diagnostic << "\n";
        return 3;
    }
    std::cout << "ok: " << M.k() << " recovery sets over " << parsed.sol.n_servers() << " servers\n";
    return 0;
}

struct OracleArgs {
    int s = 0;
    int k = 0;
    int64_t n = -1;
    bool full = false;
    int64_t samples = 10000;
    uint64_t seed = 0;
    int jobs = 1;
    bool force = false;
    std::string out_path;
};

int cmd_oracle(const OracleArgs& args) {
    hbc::ExhaustiveOptions opts;
    opts.full = args.full;
    opts.samples = args.samples;
    opts.seed = args.seed;
    opts.jobs = args.jobs;
    opts.force = args.force;
    int64_t n = args.n >= 0 ? args.n : hbc::pow2(args.s) - 1;
    hbc::FeasibilityReport rep = hbc::exhaustive_check(args.s, args.k, n, opts);
    write_output(args.out_path, hbc::feasibility_report_log(rep));
    return (rep.failures.empty() && rep.constructive_failures.empty()) ? 0 : 3;
}

void print_table_row(int s) {
    int64_t n = hbc::pow2(s) - 1;
    std::printf("s=%d\n", s);
    std::printf("  %-6s n=%-8lld k_max=%-8lld n=2^s-1, k=floor((2/3)*2^(s-1))\n", "fb23",
                static_cast<long long>(n), static_cast<long long>(hbc::fb23_kmax(s)));
    if (s >= 7) {
        std::printf("  %-6s n=%-8lld k_max=%-8lld n=2^s-1, k=floor((5/6)*2^(s-1))-s\n", "fb56",
                    static_cast<long long>(n), static_cast<long long>(hbc::fb56_kmax(s)));
    } else {
        std::printf("  %-6s n=%-8lld k_max=%-8lld falls back to fb23 below s=7\n", "fb56",
                    static_cast<long long>(n), static_cast<long long>(hbc::fb56_kmax(s)));
    }
    hbc::Rational one{1, 1};
    std::printf("  %-6s n=%-8lld k_max=%-8lld n=2^s+ceil((3a-2)*2^(s-2))-1, k=floor(a*2^(s-1)), shown at a=1\n",
                "alpha", static_cast<long long>(hbc::alpha_server_count(s, one)),
                static_cast<long long>(hbc::alpha_kmax(s)));
    std::printf("  %-6s n=%-8lld k_max=%-8lld n=2^(s+1)-2, k=2^s (optimal)\n", "opt",
                static_cast<long long>(hbc::pow2(s + 1) - 2), static_cast<long long>(hbc::opt_kmax(s)));
    std::printf("  %-6s n=%-8lld k_max=%-8lld n=2^s-1, k=2^(s-1), unit or reducible batches\n", "batch",
                static_cast<long long>(n), static_cast<long long>(hbc::pow2(s - 1)));
    std::printf("  known: FP(s,2^(s-1))=2^s-1; B(s,2^(s-1))=2^s-1; FB(s,2^s)=2^(s+1)-2");
    if (s <= 5) std::printf("; FB(s,2^(s-1))=2^s-1");
    std::printf("\n");
}

struct StressArgs {
    int s = 0;
    std::string strategy;
    std::string alpha;
    int64_t runs = 100;
    uint64_t seed = 0;
    int jobs = 1;
    bool fault_inject = false;
};

int cmd_stress(const StressArgs& args) {
    auto strategy = hbc::parse_strategy(args.strategy);
    hbc::require(strategy.has_value() && *strategy != hbc::Strategy::automatic &&
                     *strategy != hbc::Strategy::oracle,
                 hbc::ErrorKind::Input, "stress: pass a concrete strategy");
    std::optional<hbc::Rational> alpha;
    if (!args.alpha.empty()) alpha = hbc::parse_rational(args.alpha);
    hbc::require(alpha.has_value() == (*strategy == hbc::Strategy::alpha), hbc::ErrorKind::Input,
                 "stress: --alpha is required for, and only for, --strategy alpha");
    int s = args.s;
    int64_t k = 0;
    switch (*strategy) {
        case hbc::Strategy::fb23: k = hbc::fb23_kmax(s); break;
        case hbc::Strategy::fb56: k = hbc::fb56_kmax(s); break;
        case hbc::Strategy::alpha: k = alpha->floor_scale(hbc::pow2(s - 1)); break;
        case hbc::Strategy::opt: k = hbc::opt_kmax(s); break;
        case hbc::Strategy::batch: k = hbc::pow2(s - 1); break;
        default: break;
    }
    hbc::require(k >= 1, hbc::ErrorKind::Budget, "stress: empty budget at this dimension");

    std::vector<uint8_t> ok(args.runs, 0);
    std::vector<std::string> reason(args.runs);
    auto worker = [&](int64_t begin, int64_t stride) {
        for (int64_t i = begin; i < args.runs; i += stride) {
            uint64_t seed = args.seed + static_cast<uint64_t>(i);
            try {
                hbc::RequestBatch M = *strategy == hbc::Strategy::batch
                                          ? hbc::random_odd_batch(s, static_cast<int>(k), seed)
                                          : hbc::random_batch(s, static_cast<int>(k), seed);
                hbc::Solution sol = hbc::solve(M, *strategy, alpha);
                if (args.fault_inject && !sol.recovery_sets.empty() && !sol.recovery_sets[0].empty())
                    sol.recovery_sets[0][0] = (sol.recovery_sets[0][0] + 1) % sol.n_servers();
                auto res = hbc::verify_solution(sol.servers, M, sol);
                ok[i] = res.ok ? 1 : 0;
                if (!res.ok) reason[i] = res.diagnostic;
            } catch (const hbc::Error& e) {
                ok[i] = 0;
                reason[i] = e.what();
            }
        }
    };
    int jobs = std::max(1, args.jobs);
    if (jobs == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w) pool.emplace_back(worker, static_cast<int64_t>(w), static_cast<int64_t>(jobs));
        for (auto& th : pool) th.join();
    }
    int64_t passed = 0;
    for (int64_t i = 0; i < args.runs; ++i) {
        if (ok[i])
            ++passed;
        else if (!reason[i].empty())
            std::cerr << "run " << i << ": " << reason[i] << "\n";
    }
    std::cout << passed << "/" << args.runs << " verified\n";
    return passed == args.runs ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"functional batch codes from Hadamard generator matrices"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("--verbose", verbose, "trace every reordering application to stderr");

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "solve a request batch and emit the solution JSON");
    solve->add_option("--s", solve_args.s, "dimension (number of information bits)")->required();
    solve->add_option("--strategy", solve_args.strategy, "fb23|fb56|alpha|opt|batch|auto");
    solve->add_option("--alpha", solve_args.alpha, "exact rational p/q for the alpha strategy");
    solve->add_option("--requests", solve_args.requests_path, "request file, one bitstring per line");
    solve->add_option("--random", solve_args.random_k, "generate K random nonzero requests");
    solve->add_option("--seed", solve_args.seed, "seed for --random");
    solve->add_option("--out", solve_args.out_path, "write JSON here instead of stdout");

    std::string verify_solution_path, verify_requests_path;
    auto* verify = app.add_subcommand("verify", "verify a solution JSON against its request file");
    verify->add_option("--solution", verify_solution_path, "solution JSON file")->required();
    verify->add_option("--requests", verify_requests_path, "request file")->required();

    OracleArgs oracle_args;
    auto* oracle = app.add_subcommand("oracle", "feasibility sweep via the exhaustive solver");
    oracle->add_option("--s", oracle_args.s, "dimension")->required();
    oracle->add_option("--k", oracle_args.k, "requests per multiset")->required();
    oracle->add_option("--n", oracle_args.n, "server count (default 2^s-1)");
    oracle->add_flag("--full", oracle_args.full, "enumerate every multiset (s <= 4)");
    oracle->add_option("--samples", oracle_args.samples, "sample count when not --full");
    oracle->add_option("--seed", oracle_args.seed, "sampling seed");
    oracle->add_option("--jobs", oracle_args.jobs, "worker threads");
    oracle->add_flag("--force", oracle_args.force, "override soft limits");
    oracle->add_option("--out", oracle_args.out_path, "write the log here instead of stdout");

    int table_s_min = 3, table_s_max = 10;
    auto* table = app.add_subcommand("table", "print per-dimension parameters of every construction");
    table->add_option("--s-min", table_s_min, "first dimension");
    table->add_option("--s-max", table_s_max, "last dimension");

    StressArgs stress_args;
    auto* stress = app.add_subcommand("stress", "seeded random batches against one construction");
    stress->add_option("--s", stress_args.s, "dimension")->required();
    stress->add_option("--strategy", stress_args.strategy, "fb23|fb56|alpha|opt|batch")->required();
    stress->add_option("--alpha", stress_args.alpha, "exact rational p/q for the alpha strategy");
    stress->add_option("--runs", stress_args.runs, "number of batches");
    stress->add_option("--seed", stress_args.seed, "base seed; run i uses seed+i");
    stress->add_option("--jobs", stress_args.jobs, "worker threads");
    stress->add_flag("--fault-inject", stress_args.fault_inject, "corrupt each solution first (self-test)")
        ->group("");

    CLI11_PARSE(app, argc, argv);
    hbc::g_trace_reorderings = verbose;

    try {
        if (solve->parsed()) return cmd_solve(solve_args);
        if (verify->parsed()) return cmd_verify(verify_solution_path, verify_requests_path);
        if (oracle->parsed()) return cmd_oracle(oracle_args);
        if (table->parsed()) {
            hbc::require(table_s_min >= 2 && table_s_min <= table_s_max && table_s_max < hbc::kMaxDim,
                         hbc::ErrorKind::Input, "table: bad dimension range");
            for (int s = table_s_min; s <= table_s_max; ++s) print_table_row(s);
            return 0;
        }
        if (stress->parsed()) return cmd_stress(stress_args);
    } catch (const hbc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return 1;
}
