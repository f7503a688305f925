#include <doctest.h>

#include <stdexcept>

#include <numeric>
#include <set>

#include "raag/covers.hpp"

using namespace raag;

TEST_CASE("cover S censuses for k = 3") {
    CoverGraph s = build_cover_S(3);
    CHECK(s.n == 12);
    CHECK(cycle_census(s, s.letter_index("a1")) == std::map<int, int>{{4, 3}});
    CHECK(cycle_census(s, s.letter_index("e1")) == std::map<int, int>{{1, 6}, {3, 2}});
    CHECK(cycle_length(s, s.letter_index("a1"), s.basepoint) == 4);
    // e1-loop vertices have orbit length 1
    int loops = 0;
    for (int v = 0; v < s.n; ++v)
        if (cycle_length(s, s.letter_index("e1"), v) == 1) ++loops;
    CHECK(loops == 6);
    CHECK(validate_cover_S(s, 3).ok());
}

TEST_CASE("cover S sizes and validation for small k") {
    CHECK(build_cover_S(4).n == 20);
    CHECK(build_cover_S(2).n == 6);
    for (int k = 2; k <= 6; ++k) {
        CoverGraph s = build_cover_S(k);
        auto rep = validate_cover_S(s, k);
        for (auto& v : rep.violations) MESSAGE("k=", k, ": ", v);
        CHECK(rep.ok());
        CHECK_FALSE(rep.degenerate);
        // a1 spans k cycles whose lengths sum to the degree
        auto a_census = cycle_census(s, 0);
        int cycles = 0, total = 0;
        for (auto [len, cnt] : a_census) {
            cycles += cnt;
            total += len * cnt;
        }
        CHECK(cycles == k);
        CHECK(total == k * (k + 1));
        // e1 spans (k-1) + 2k cycles
        auto e_census = cycle_census(s, 1);
        int e_cycles = 0;
        for (auto [len, cnt] : e_census) e_cycles += cnt;
        CHECK(e_cycles == 3 * k - 1);
    }
}

TEST_CASE("cover S at k = 1 is the documented degenerate completion") {
    CoverGraph s = build_cover_S(1);
    CHECK(s.n == 2);
    auto rep = validate_cover_S(s, 1);
    CHECK(rep.ok());
    CHECK(rep.degenerate);
}

TEST_CASE("a broken permutation is reported by name") {
    CoverGraph s = build_cover_S(2);
    s.perm[0][0] = s.perm[0][1];  // a1 no longer a bijection
    auto rep = validate_cover(s);
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.violations[0].find("a1") != std::string::npos);
    CHECK(rep.violations[0].find("bijection") != std::string::npos);
}

TEST_CASE("cover Z censuses for k = 3 match the figure") {
    ZCover z = build_cover_Z(3);
    const CoverGraph& c = z.cover;
    CHECK(c.n == 12);
    CHECK(cycle_census(c, c.letter_index("C2'")) == std::map<int, int>{{1, 1}, {11, 1}});
    CHECK(cycle_census(c, c.letter_index("C1")) == std::map<int, int>{{4, 3}});
    CHECK(cycle_census(c, c.letter_index("C3")) == std::map<int, int>{{12, 1}});
    CHECK(label_subgraph_components(c, {c.letter_index("C2")}).size() == 2);
    CHECK(z.ab.alpha.at(2) == std::vector<int>{1});
    CHECK(z.ab.beta.at(2) == std::vector<int>{1});
    CHECK(validate_cover_Z(c, 3).ok());
}

TEST_CASE("cover Z for k = 2 has no loops") {
    ZCover z = build_cover_Z(2);
    const CoverGraph& c = z.cover;
    CHECK(c.n == 6);
    CHECK(cycle_census(c, c.letter_index("C1")) == std::map<int, int>{{3, 2}});
    CHECK(cycle_census(c, c.letter_index("C1'")) == std::map<int, int>{{6, 1}});
    CHECK(cycle_census(c, c.letter_index("C2")) == std::map<int, int>{{6, 1}});
    CHECK(cycle_census(c, c.letter_index("C2'")) == std::map<int, int>{{3, 2}});
    for (size_t l = 0; l < c.perm.size(); ++l)
        for (int v = 0; v < c.n; ++v) CHECK(c.perm[l][v] != v);
    CHECK(validate_cover_Z(c, 2).ok());
}

TEST_CASE("cover Z validates for k up to 6") {
    for (int k = 1; k <= 6; ++k) {
        ZCover z = build_cover_Z(k);
        CHECK(z.cover.n == k * (k + 1));
        auto rep = validate_cover_Z(z.cover, k);
        for (auto& v : rep.violations) MESSAGE("k=", k, ": ", v);
        CHECK(rep.ok());
        CHECK(rep.degenerate == (k == 1));
    }
}

TEST_CASE("alpha/beta families are strictly increasing with the right counts") {
    for (int k = 2; k <= 6; ++k) {
        AlphaBeta ab = build_cover_Z(k).ab;
        int n = k * (k + 1);
        auto check_family = [&](const std::map<int, std::vector<int>>& fam, int i, int want) {
            auto it = fam.find(i);
            REQUIRE(it != fam.end());
            CHECK(static_cast<int>(it->second.size()) == want);
            for (size_t j = 0; j < it->second.size(); ++j) {
                CHECK(it->second[j] >= 1);
                CHECK(it->second[j] <= n);
                if (j > 0) CHECK(it->second[j] > it->second[j - 1]);
            }
        };
        for (int i = 2; i <= k - 1; ++i) {
            check_family(ab.alpha, i, k - i);
            check_family(ab.beta, i, i - 1);
            check_family(ab.alpha_prime, i, i - 2);
            check_family(ab.beta_prime, i, k - i);
        }
    }
}

TEST_CASE("cover json round trip and dot output") {
    CoverGraph s = build_cover_S(3);
    CoverGraph back = cover_from_json(cover_json(s));
    CHECK(back.n == s.n);
    CHECK(back.perm == s.perm);
    CHECK(back.alphabet == s.alphabet);
    CHECK(cover_json(back) == cover_json(s));
    CHECK(cover_dot(s).find("digraph") == 0);
    CHECK_THROWS_AS(cover_from_json("{]"), std::invalid_argument);
}
