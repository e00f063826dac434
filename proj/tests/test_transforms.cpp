#include <catch2/catch_amalgamated.hpp>

#include "hbc/textio.hpp"
#include "hbc/transforms.hpp"
#include "helpers.hpp"

using namespace hbc;
using testutil::changed_pairs;
using testutil::from_bits;
using testutil::random_hg;
using testutil::random_nonzero;

TEST_CASE("a request equal to the pair sum returns immediately") {
    auto G = canonical_hg(3);
    auto out = find_good_or_bad_request(G, 0, unit_last(3));
    CHECK_FALSE(out.bad);
    CHECK(out.matrix.columns() == G.columns());
}

TEST_CASE("pair steering touches only the working pair and the spare pair") {
    std::mt19937_64 rng(53);
    for (int rep = 0; rep < 3000; ++rep) {
        int s = 2 + static_cast<int>(rng() % 7);
        auto G = random_hg(s, rng);
        int t = static_cast<int>(rng() % (G.pairs() - 1));
        auto v = random_nonzero(s, rng);
        GF2Vector y = G.pair_sum(t);
        auto out = find_good_or_bad_request(G, t, v);
        REQUIRE(out.matrix.valid());
        REQUIRE(out.matrix.pair_sum(t) == (out.bad ? v + y : v));
        for (int delta : changed_pairs(G, out.matrix)) REQUIRE((delta == t || delta == G.pairs() - 1));
    }
}

TEST_CASE("pair steering rejects the spare pair itself and zero requests") {
    auto G = canonical_hg(3);
    CHECK_THROWS_AS(find_good_or_bad_request(G, 3, unit_last(3)), Error);
    CHECK_THROWS_AS(find_good_or_bad_request(G, 0, GF2Vector{0, 3}), Error);
}

TEST_CASE("bad-case correction repairs the working pair and hands over an earlier one") {
    // Six-cycle through pairs 0, 1, 2 in the shift-8 graph; pair 2 is the
    // working pair and both earlier pairs differ from its request.
    auto G = from_bits(4, {0, 1, 9, 2, 10, 8, 3, 4, 5, 6, 7, 11, 12, 13, 14, 15});
    GF2Vector a{8, 4};
    GF2Vector v2{10, 4};
    RequestBatch M = make_request_batch(4, {GF2Vector{1, 4}, GF2Vector{3, 4}, v2});
    GF2Vector old_v0 = M[0];
    int handed = bad_case_correction(G, a, M, 2);
    CHECK(handed == 0);
    CHECK(G.pair_sum(0) == v2);
    CHECK(M[0] == v2);
    CHECK(M[2] == old_v0);
    CHECK(G.valid());
}

TEST_CASE("bad-case correction reports when no earlier pair qualifies") {
    // Eight-cycle through pairs 1 (working), 0, 2, 3 in the shift-8 graph;
    // the only earlier pair already sums to the request.
    auto G = from_bits(4, {9, 11, 0, 10, 8, 1, 3, 2, 4, 5, 6, 7, 12, 13, 14, 15});
    REQUIRE(G.pair_sum(0) == GF2Vector{2, 4});
    GF2Vector a{8, 4};
    GF2Vector v1{2, 4};
    RequestBatch M = make_request_batch(4, {GF2Vector{1, 4}, v1, GF2Vector{1, 4}});
    CHECK_THROWS_WITH(bad_case_correction(G, a, M, 1), Catch::Matchers::ContainsSubstring("no eligible pair"));
}

TEST_CASE("dependent-pair reorder finds a zero-sum block") {
    SECTION("two equal pair sums give the smallest block") {
        // window pairs 0 and 1 already share a sum
        auto G = from_bits(4, {0, 3, 1, 2, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15});
        int h = reorder_dependent_pairs(G, 0);
        CHECK(h == 2);
        CHECK(G.pair_sum(0) == G.pair_sum(1));
    }
    SECTION("random windows always yield 2 <= h <= s+1 with a zero block sum") {
        std::mt19937_64 rng(59);
        for (int rep = 0; rep < 2000; ++rep) {
            int s = 4 + static_cast<int>(rng() % 5);
            auto G = random_hg(s, rng);
            int h = reorder_dependent_pairs(G, 0);
            REQUIRE(h >= 2);
            REQUIRE(h <= s + 1);
            GF2Vector acc{0, s};
            for (int i = 0; i < h; ++i) acc = acc + G.pair_sum(i);
            REQUIRE(acc.is_zero());
            REQUIRE(G.valid());
        }
    }
    SECTION("window beyond the spare pair is rejected") {
        auto G = canonical_hg(3);
        CHECK_THROWS_AS(reorder_dependent_pairs(G, 0), Error);
    }
}

TEST_CASE("sum alignment matches the first two window pairs") {
    SECTION("already aligned window returns unchanged") {
        auto G = from_bits(4, {0, 3, 1, 2, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15});
        auto before = G.columns();
        find_equiv_sums(G, 0, 2);
        CHECK(G.columns() == before);
        CHECK(G.pair_sum(0) == G.pair_sum(1));
    }
    SECTION("random zero-sum windows always align") {
        std::mt19937_64 rng(61);
        for (int rep = 0; rep < 2000; ++rep) {
            int s = 4 + static_cast<int>(rng() % 5);
            auto G = random_hg(s, rng);
            int h = reorder_dependent_pairs(G, 0);
            auto before = G.pair_sums();
            find_equiv_sums(G, 0, h);
            REQUIRE(G.pair_sum(0) == G.pair_sum(1));
            REQUIRE(G.valid());
            // nothing outside the window and the spare pair moved
            auto after = G.pair_sums();
            for (int t = s + 1; t < G.pairs() - 1; ++t) REQUIRE(after[t] == before[t]);
        }
    }
}

TEST_CASE("all four transforms preserve the Hadamard property") {
    std::mt19937_64 rng(67);
    for (int rep = 0; rep < 500; ++rep) {
        int s = 4 + static_cast<int>(rng() % 4);
        auto G = random_hg(s, rng);
        auto out = find_good_or_bad_request(std::move(G), 1, random_nonzero(s, rng));
        G = std::move(out.matrix);
        REQUIRE(G.valid());
        int h = reorder_dependent_pairs(G, 0);
        REQUIRE(G.valid());
        find_equiv_sums(G, 0, h);
        REQUIRE(G.valid());
    }
}

TEST_CASE("bad-case correction keeps the request multiset") {
    auto G = from_bits(4, {0, 1, 9, 2, 10, 8, 3, 4, 5, 6, 7, 11, 12, 13, 14, 15});
    RequestBatch M = make_request_batch(4, {GF2Vector{1, 4}, GF2Vector{3, 4}, GF2Vector{10, 4}});
    auto sorted_bits = [](const RequestBatch& b) {
        std::vector<uint32_t> out;
        for (const auto& v : b.requests) out.push_back(v.bits);
        std::sort(out.begin(), out.end());
        return out;
    };
    auto before = sorted_bits(M);
    bad_case_correction(G, GF2Vector{8, 4}, M, 2);
    CHECK(sorted_bits(M) == before);
}
