#include <catch2/catch_amalgamated.hpp>

#include "hbc/solvers.hpp"
#include "hbc/textio.hpp"
#include "helpers.hpp"

using namespace hbc;

TEST_CASE("bitstring encoding puts coordinate 0 leftmost") {
    CHECK(to_bitstring(GF2Vector{0b001, 3}) == "100");
    CHECK(to_bitstring(GF2Vector{0b100, 3}) == "001");
    CHECK(parse_bitstring("100").bits == 0b001);
    CHECK_THROWS_AS(parse_bitstring("10x"), Error);
    CHECK_THROWS_AS(parse_bitstring("101", 4), Error);
    std::mt19937_64 rng(127);
    for (int rep = 0; rep < 500; ++rep) {
        int s = 1 + static_cast<int>(rng() % 14);
        auto v = testutil::random_nonzero(s, rng);
        CHECK(parse_bitstring(to_bitstring(v)) == v);
    }
}

TEST_CASE("request files accept comments and blank lines and reject zero rows") {
    std::string text = "# header\n011\n\n  101   # trailing\n111\n";
    auto M = parse_request_text(text, 3);
    REQUIRE(M.k() == 3);
    CHECK(to_bitstring(M[0]) == "011");
    CHECK(to_bitstring(M[2]) == "111");
    CHECK_THROWS_AS(parse_request_text("000\n", 3), Error);
    CHECK_THROWS_AS(parse_request_text("# nothing\n", 3), Error);
    CHECK_THROWS_AS(parse_request_text("01\n", 3), Error);
}

TEST_CASE("request hashing is order-sensitive and stable") {
    auto M1 = parse_request_text("011\n101\n", 3);
    auto M2 = parse_request_text("101\n011\n", 3);
    CHECK(request_hash_hex(M1) != request_hash_hex(M2));
    CHECK(request_hash_hex(M1) == request_hash_hex(M1));
    CHECK(request_hash_hex(M1).size() == 16);
}

TEST_CASE("seeded generators are deterministic") {
    auto a = random_batch(6, 12, 42);
    auto b = random_batch(6, 12, 42);
    CHECK(a.requests == b.requests);
    CHECK(random_batch(6, 12, 43).requests != a.requests);
    for (const auto& v : random_unit_batch(5, 20, 1).requests) CHECK(v.weight() == 1);
    for (const auto& v : random_odd_batch(5, 20, 1).requests) CHECK(v.weight() % 2 == 1);
}

TEST_CASE("solution documents round-trip through JSON") {
    auto M = random_batch(4, 5, 9);
    auto sol = fb23_solve(M);
    std::string doc = solution_to_json(sol, M);
    auto parsed = parse_solution_json(doc);
    CHECK(parsed.sol.s == sol.s);
    CHECK(parsed.sol.strategy == sol.strategy);
    CHECK(parsed.sol.servers == sol.servers);
    CHECK(parsed.sol.recovery_sets == sol.recovery_sets);
    CHECK(parsed.stored_hash == request_hash_hex(M));
    CHECK(verify_solution(parsed.sol.servers, M, parsed.sol).ok);
}

TEST_CASE("identical inputs give byte-identical JSON") {
    auto M = random_batch(7, 40, 4242);
    auto s1 = solution_to_json(solve(M, Strategy::automatic), M);
    auto s2 = solution_to_json(solve(M, Strategy::automatic), M);
    CHECK(s1 == s2);
}

TEST_CASE("malformed solution documents are rejected as input errors") {
    CHECK_THROWS_AS(parse_solution_json("{"), Error);
    CHECK_THROWS_AS(parse_solution_json("{\"version\":2}"), Error);
    auto M = random_batch(3, 2, 1);
    auto sol = fb23_solve(M);
    std::string doc = solution_to_json(sol, M);
    // server bitstring of the wrong length
    auto broken = doc;
    auto pos = broken.find("\"servers\"");
    pos = broken.find('"', broken.find('[', pos)) + 1;
    broken.insert(pos, "1");
    CHECK_THROWS_AS(parse_solution_json(broken), Error);
}

TEST_CASE("alpha survives the JSON round trip") {
    auto M = random_batch(5, 12, 77);
    auto sol = alpha_fb_solution(M, Rational{3, 4});
    auto parsed = parse_solution_json(solution_to_json(sol, M));
    REQUIRE(parsed.sol.alpha.has_value());
    CHECK(*parsed.sol.alpha == Rational{3, 4});
}
