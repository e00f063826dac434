#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hbc/gf2.hpp"
#include "hbc/rational.hpp"

namespace hbc {

enum class Strategy { fb23, fb56, alpha, opt, batch, automatic, oracle };

inline const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::fb23: return "fb23";
        case Strategy::fb56: return "fb56";
        case Strategy::alpha: return "alpha";
        case Strategy::opt: return "opt";
        case Strategy::batch: return "batch";
        case Strategy::automatic: return "auto";
        case Strategy::oracle: return "oracle";
    }
    return "?";
}

inline std::optional<Strategy> parse_strategy(const std::string& name) {
    for (Strategy s : {Strategy::fb23, Strategy::fb56, Strategy::alpha, Strategy::opt, Strategy::batch,
                       Strategy::automatic})
        if (name == strategy_name(s)) return s;
    return std::nullopt;
}

/// Final answer: server columns (zero columns already removed) plus one
/// recovery set per request, in request order. The sets are pairwise
/// disjoint and each XORs to its request.
struct Solution {
    int s = 0;
    Strategy strategy = Strategy::fb23;
    std::optional<Rational> alpha;
    std::vector<GF2Vector> servers;
    std::vector<std::vector<int>> recovery_sets;

    int n_servers() const { return static_cast<int>(servers.size()); }
};

}  // namespace hbc
