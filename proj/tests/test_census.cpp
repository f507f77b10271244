#include <gtest/gtest.h>

#include <set>

#include "flatforge/census.hpp"

using namespace flatforge;

namespace {

// Orbits of spanning simple subsets of PG(r-1,2) under all invertible r x r matrices.
std::size_t orbit_count(int r) {
    const std::uint32_t full = (1U << r) - 1;
    std::vector<std::vector<std::uint32_t>> mats;
    std::vector<std::uint32_t> cols(static_cast<std::size_t>(r));
    auto rec = [&](auto&& self, int c) -> void {
        if (c == r) {
            if (detail::binary_rank(cols, (1U << r) - 1) == r) mats.push_back(cols);
            return;
        }
        for (std::uint32_t v = 1; v <= full; ++v) {
            cols[static_cast<std::size_t>(c)] = v;
            self(self, c + 1);
        }
    };
    rec(rec, 0);
    auto apply = [&](const std::vector<std::uint32_t>& a, std::uint32_t v) {
        std::uint32_t out = 0;
        for (int i = 0; i < r; ++i) {
            if ((v >> i) & 1U) out ^= a[static_cast<std::size_t>(i)];
        }
        return out;
    };
    std::set<std::uint32_t> seen;  // subsets as masks over point values
    std::size_t orbits = 0;
    enumerate_simple_binary(r, [&](std::uint64_t, const BinaryColumns& cs) {
        std::uint32_t key = 0;
        for (auto c : cs) key |= 1U << c;
        if (seen.count(key)) return true;
        ++orbits;
        for (const auto& a : mats) {
            std::uint32_t img = 0;
            for (auto c : cs) img |= 1U << apply(a, c);
            seen.insert(img);
        }
        return true;
    });
    return orbits;
}

}  // namespace

TEST(Enumerate, RawCounts) {
    std::size_t n2 = 0, n3 = 0;
    enumerate_simple_binary(2, [&](std::uint64_t, const BinaryColumns&) { return ++n2, true; });
    enumerate_simple_binary(3, [&](std::uint64_t, const BinaryColumns&) { return ++n3, true; });
    EXPECT_EQ(n2, 4U);
    EXPECT_EQ(n3, 92U);
}

TEST(Enumerate, RawCountMatchesRankOracleAtFour) {
    const auto pg = projective_geometry(3, 2);
    std::size_t oracle = 0;
    for (std::uint64_t s = 1; s < (1U << 15); ++s) {
        if (pg.rank_of(Subset::from_mask(15, s)) == 4) ++oracle;
    }
    std::size_t n = 0;
    enumerate_simple_binary(4, [&](std::uint64_t, const BinaryColumns&) { return ++n, true; });
    EXPECT_EQ(n, oracle);
}

TEST(Enumerate, DedupMatchesOrbitCount) {
    for (int r : {2, 3}) {
        std::size_t n = 0;
        EnumerationOptions opt;
        opt.dedup = true;
        enumerate_simple_binary(r, [&](std::uint64_t, const BinaryColumns&) { return ++n, true; }, opt);
        EXPECT_EQ(n, orbit_count(r)) << r;
    }
    EXPECT_EQ(orbit_count(3), 6U);
}

TEST(Enumerate, RangeAndSampling) {
    EXPECT_THROW(enumerate_simple_binary(5, [](std::uint64_t, const BinaryColumns&) { return true; }), ScaleRefusal);
    EXPECT_THROW(enumerate_simple_binary(6, [](std::uint64_t, const BinaryColumns&) { return true; }), ScaleRefusal);
    EXPECT_THROW(enumerate_simple_binary(0, [](std::uint64_t, const BinaryColumns&) { return true; }), std::invalid_argument);
    EnumerationOptions opt;
    opt.samples = 20;
    opt.seed = 3;
    std::vector<std::uint64_t> a, b;
    enumerate_simple_binary(5, [&](std::uint64_t m, const BinaryColumns& cs) {
        EXPECT_EQ(binary_matroid(5, cs).rank(), 5);
        a.push_back(m);
        return true;
    }, opt);
    enumerate_simple_binary(5, [&](std::uint64_t m, const BinaryColumns&) { return b.push_back(m), true; }, opt);
    EXPECT_EQ(a.size(), 20U);
    EXPECT_EQ(a, b);
}

TEST(Canonical, InvariantUnderBasisChange) {
    const BinaryColumns fano{1, 2, 3, 4, 5, 6, 7};
    EXPECT_EQ(canonical_form(3, fano), fano);
    // a 4-point circuit in two presentations
    EXPECT_EQ(canonical_form(3, {1, 2, 4, 7}), canonical_form(3, {3, 2, 4, 5}));
    EXPECT_NE(canonical_form(3, {1, 2, 4, 7}), canonical_form(3, {1, 2, 3, 4}));
    EXPECT_THROW(canonical_form(3, {1, 2, 3}), std::invalid_argument);
}

TEST(Census, SmallRanksHaveNoCounterexamples) {
    const auto a = theorem_census(2, 2);
    EXPECT_EQ(a.total, 4U);
    EXPECT_EQ(a.counterexample_count, 0U);
    const auto b = theorem_census(3, 2);
    EXPECT_EQ(b.total, 92U);
    EXPECT_EQ(b.counterexample_count, 0U);
    std::size_t sum = 0;
    for (const auto& [key, n] : b.by_class) sum += n;
    EXPECT_EQ(sum, b.total);
}

TEST(Census, CounterexamplesAtRankThree) {
    CensusOptions opt;
    opt.keep_positives = true;
    const auto rep = theorem_census(3, 3, opt);
    EXPECT_EQ(rep.by_class.count("none") ? rep.by_class.at("none") : 0U, rep.counterexample_count);
    EXPECT_EQ(rep.positives.size() + rep.counterexample_count, rep.total);
    for (const auto& c : rep.counterexamples) {
        EXPECT_FALSE(unavoidable_search(binary_matroid(3, c), 3).flat);
        EXPECT_EQ(canonical_form(3, c), c);
    }
    EXPECT_FALSE(rep.counterexamples.empty());
}

TEST(Census, DeterministicAcrossThreads) {
    CensusOptions one, four;
    four.threads = 4;
    const auto a = theorem_census(3, 3, one);
    const auto b = theorem_census(3, 3, four);
    EXPECT_EQ(a.by_class, b.by_class);
    EXPECT_EQ(a.counterexample_masks, b.counterexample_masks);
    EXPECT_EQ(a.counterexamples, b.counterexamples);
}

TEST(TwoPointLines, FanoIsTheOnlyExceptionAtRankThree) {
    const auto c = two_point_line_census(3);
    ASSERT_EQ(c.total.at(7), 1U);
    EXPECT_EQ(c.with_two_point_line.count(7), 0U);
    for (const auto& [size, n] : c.total) {
        if (size < 7) {
            EXPECT_EQ(c.with_two_point_line.at(size), n) << size;
        }
    }
}
