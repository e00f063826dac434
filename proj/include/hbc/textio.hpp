#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hbc/exhaustive.hpp"
#include "hbc/solution.hpp"

namespace hbc {

/// Wire encoding of a vector: a string of '0'/'1' of length s, leftmost
/// character is coordinate 0. Used bit-exact in request files, JSON, and
/// fixtures.
inline std::string to_bitstring(const GF2Vector& v) {
    std::string out(v.dim, '0');
    for (int i = 0; i < v.dim; ++i)
        if (v.coord(i)) out[i] = '1';
    return out;
}

inline GF2Vector parse_bitstring(const std::string& text, int expected_dim = -1) {
    int s = static_cast<int>(text.size());
    require(valid_dim(s), ErrorKind::Input, "bitstring: length out of range: '" + text + "'");
    require(expected_dim < 0 || s == expected_dim, ErrorKind::Input,
            "bitstring: expected length " + std::to_string(expected_dim) + ", got '" + text + "'");
    GF2Vector v{0, s};
    for (int i = 0; i < s; ++i) {
        require(text[i] == '0' || text[i] == '1', ErrorKind::Input, "bitstring: bad character in '" + text + "'");
        if (text[i] == '1') v.bits |= 1u << i;
    }
    return v;
}

/// Request file: one bitstring per line, '#' comments and blank lines ignored.
inline RequestBatch parse_request_text(const std::string& text, int s) {
    std::istringstream in(text);
    std::vector<GF2Vector> reqs;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) line.pop_back();
        size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        reqs.push_back(parse_bitstring(line.substr(start), s));
    }
    require(!reqs.empty(), ErrorKind::Input, "request file holds no requests");
    return make_request_batch(s, std::move(reqs));
}

inline RequestBatch parse_request_file(const std::string& path, int s) {
    std::ifstream in(path);
    require(in.good(), ErrorKind::Input, "cannot open request file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_request_text(buf.str(), s);
}

/// FNV-1a over the bitstrings (newline-terminated, in order); binds a
/// solution document to its batch.
inline uint64_t request_hash(const RequestBatch& M) {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&](char c) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    };
    for (const auto& v : M.requests) {
        for (char c : to_bitstring(v)) mix(c);
        mix('\n');
    }
    return h;
}

inline std::string request_hash_hex(const RequestBatch& M) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(request_hash(M)));
    return buf;
}

// Seeded deterministic batch generators.

inline RequestBatch random_batch(int s, int k, uint64_t seed) {
    std::mt19937_64 rng(seed);
    uint64_t top = (uint64_t{1} << s) - 1;
    std::vector<GF2Vector> reqs;
    reqs.reserve(k);
    for (int i = 0; i < k; ++i) reqs.emplace_back(static_cast<uint32_t>(1 + rng() % top), s);
    return make_request_batch(s, std::move(reqs));
}

inline RequestBatch random_unit_batch(int s, int k, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<GF2Vector> reqs;
    reqs.reserve(k);
    for (int i = 0; i < k; ++i) reqs.emplace_back(uint32_t{1} << (rng() % s), s);
    return make_request_batch(s, std::move(reqs));
}

inline RequestBatch random_odd_batch(int s, int k, uint64_t seed) {
    std::mt19937_64 rng(seed);
    uint64_t top = (uint64_t{1} << s) - 1;
    std::vector<GF2Vector> reqs;
    reqs.reserve(k);
    while (static_cast<int>(reqs.size()) < k) {
        GF2Vector v{static_cast<uint32_t>(1 + rng() % top), s};
        if (v.weight() % 2 == 1) reqs.push_back(v);
    }
    return make_request_batch(s, std::move(reqs));
}

// Solution JSON, schema version 1:
// {"version":1,"s":S,"strategy":NAME,"alpha":"p/q"|null,
//  "servers":[bitstring...],"recovery_sets":[[int...]...],"request_hash":hex}

inline std::string solution_to_json(const Solution& sol, const RequestBatch& M) {
    nlohmann::json doc;
    doc["version"] = 1;
    doc["s"] = sol.s;
    doc["strategy"] = strategy_name(sol.strategy);
    if (sol.alpha.has_value())
        doc["alpha"] = sol.alpha->str();
    else
        doc["alpha"] = nullptr;
    std::vector<std::string> servers;
    servers.reserve(sol.servers.size());
    for (const auto& c : sol.servers) servers.push_back(to_bitstring(c));
    doc["servers"] = servers;
    doc["recovery_sets"] = sol.recovery_sets;
    doc["request_hash"] = request_hash_hex(M);
    return doc.dump(2) + "\n";
}

struct ParsedSolution {
    Solution sol;
    std::string stored_hash;
};

inline ParsedSolution parse_solution_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Input, std::string("solution json: ") + e.what());
    }
    try {
        require(doc.at("version").get<int>() == 1, ErrorKind::Input, "solution json: unsupported version");
        ParsedSolution out;
        out.sol.s = doc.at("s").get<int>();
        require(valid_dim(out.sol.s), ErrorKind::Input, "solution json: s out of range");
        auto strat = parse_strategy(doc.at("strategy").get<std::string>());
        if (!strat && doc.at("strategy").get<std::string>() == "oracle") strat = Strategy::oracle;
        require(strat.has_value(), ErrorKind::Input, "solution json: unknown strategy");
        out.sol.strategy = *strat;
        if (!doc.at("alpha").is_null()) out.sol.alpha = parse_rational(doc.at("alpha").get<std::string>());
        for (const auto& srv : doc.at("servers"))
            out.sol.servers.push_back(parse_bitstring(srv.get<std::string>(), out.sol.s));
        for (const auto& set : doc.at("recovery_sets"))
            out.sol.recovery_sets.push_back(set.get<std::vector<int>>());
        out.stored_hash = doc.at("request_hash").get<std::string>();
        return out;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Input, std::string("solution json: ") + e.what());
    }
}

/// Line-oriented sweep log: one INFEASIBLE/CONSTRUCTIVE-FAIL line per failing
/// multiset, a machine-readable summary, and the wall time on its own line so
/// regression diffs can drop it.
inline std::string feasibility_report_log(const FeasibilityReport& rep) {
    std::ostringstream out;
    auto emit = [&](const char* tag, const std::vector<GF2Vector>& reqs) {
        out << tag;
        for (const auto& v : reqs) out << ' ' << to_bitstring(v);
        out << '\n';
    };
    for (const auto& f : rep.failures) emit("INFEASIBLE", f);
    for (const auto& f : rep.constructive_failures) emit("CONSTRUCTIVE-FAIL", f);
    out << "s=" << rep.s << " k=" << rep.k << " n=" << rep.n << " mode=" << (rep.full ? "full" : "sampled")
        << " tried=" << rep.tried << " infeasible=" << rep.failures.size()
        << " constructive_checked=" << rep.constructive_checked
        << " constructive_failures=" << rep.constructive_failures.size() << '\n';
    out << rep.tried << " multisets, " << rep.failures.size() << " failures\n";
    out << "elapsed_seconds=" << rep.elapsed_seconds << '\n';
    return out.str();
}

}  // namespace hbc
