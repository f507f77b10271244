#include <gtest/gtest.h>

#include <random>

#include "flatforge/catalog.hpp"
#include "flatforge/ramsey.hpp"

using namespace flatforge;

namespace {

// Does any colour class of c contain a rank-k flat? Plain scan over enumerate_flats.
bool has_mono_flat(const Matroid& m, const Coloring& c, int k) {
    for (const auto& f : enumerate_flats(m, k)) {
        bool mono = true;
        f.elements.for_each([&](std::size_t x) { mono = mono && c.color[x] == c.color[f.elements.first()]; });
        if (mono) return true;
    }
    return false;
}

bool flat_free(const Matroid& m, const Subset& s, int k) {
    for (const auto& f : enumerate_flats(m, k)) {
        if (f.elements.is_subset_of(s)) return false;
    }
    return true;
}

}  // namespace

TEST(Mono, FindsMonochromaticLine) {
    const auto m = projective_geometry(2, 2);
    Coloring all{2, std::vector<int>(7, 0)};
    auto f = mono_flat_search(m, all, 2);
    ASSERT_TRUE(f);
    EXPECT_EQ(f->rank, 2);
    EXPECT_TRUE(f->tags.contains(FlatClass::ProjectiveGeometry));
}

TEST(Mono, RejectsBadColourings) {
    const auto m = projective_geometry(2, 2);
    EXPECT_THROW(mono_flat_search(m, Coloring{2, {0, 1}}, 2), std::invalid_argument);
    EXPECT_THROW(mono_flat_search(m, Coloring{2, {0, 1, 2, 0, 0, 0, 0}}, 2), std::invalid_argument);
    const Matroid doubled(2, 2, {VecGF(2, {1, 0}), VecGF(2, {1, 0}), VecGF(2, {0, 1})});
    const Coloring split{2, {0, 1, 0}};
    EXPECT_NO_THROW(mono_flat_search(doubled, split, 1));
    EXPECT_THROW(mono_flat_search(doubled, split, 1, ColorLevel::Points), std::invalid_argument);
}

TEST(Mono, AgreesWithPlainScanOnRandomColourings) {
    std::mt19937_64 rng(7);
    for (const char* spec : {"pg:2,2", "ag:3,2", "pg:2,3", "reid:3"}) {
        const auto m = build_catalog(spec);
        for (int trial = 0; trial < 30; ++trial) {
            Coloring c{2, std::vector<int>(m.size())};
            for (auto& x : c.color) x = static_cast<int>(rng() & 1U);
            for (int k = 1; k <= 2; ++k) {
                EXPECT_EQ(mono_flat_search(m, c, k).has_value(), has_mono_flat(m, c, k)) << spec << " k=" << k;
            }
        }
    }
}

TEST(FlatFree, Examples) {
    EXPECT_EQ(max_flatfree_set(projective_geometry(2, 2), 2).size, 4U);
    EXPECT_EQ(max_flatfree_set(affine_geometry(2, 3), 2).size, 4U);
    EXPECT_EQ(max_flatfree_set(free_matroid(4, 2), 2).size, 1U);
    EXPECT_EQ(max_flatfree_set(projective_geometry(3, 2), 2).size, 8U);
    EXPECT_THROW(max_flatfree_set(projective_geometry(2, 2), 0), std::invalid_argument);
}

TEST(FlatFree, WitnessIsFlatFreeAndLocallyMaximal) {
    for (const char* spec : {"pg:2,2", "ag:2,3", "ag:3,2", "reid:2", "pg:2,3", "free:4,2"}) {
        const auto m = build_catalog(spec);
        for (int k = 1; k <= 2; ++k) {
            const auto r = max_flatfree_set(m, k);
            EXPECT_EQ(r.set.count(), r.size) << spec;
            EXPECT_TRUE(flat_free(m, r.set, k)) << spec << " k=" << k;
            for (std::size_t x = 0; x < m.size(); ++x) {
                if (r.set.test(x)) continue;
                Subset bigger = r.set;
                bigger.set(x);
                EXPECT_FALSE(flat_free(m, bigger, k)) << spec << " k=" << k << " x=" << x;
            }
        }
    }
}

TEST(FlatFree, MatchesPowerSetOracle) {
    for (const char* spec : {"pg:2,2", "ag:3,2", "reid:2", "ag:2,3"}) {
        const auto m = build_catalog(spec);
        const auto flats = enumerate_flats(m, 2);
        std::size_t best = 0;
        Subset lex_first(m.size());
        for (std::uint64_t s = 0; s < (std::uint64_t{1} << m.size()); ++s) {
            const auto set = Subset::from_mask(m.size(), s);
            bool ok = true;
            for (const auto& f : flats) ok = ok && !f.elements.is_subset_of(set);
            if (ok && set.count() > best) best = set.count();
        }
        EXPECT_EQ(max_flatfree_set(m, 2).size, best) << spec;
    }
}

TEST(FlatFree, MonotoneUnderRestrictionToAFlat) {
    // PG(2,2) sits inside PG(3,2) as a plane.
    const auto big = projective_geometry(3, 2);
    const auto plane = enumerate_flats(big, 3).front().elements;
    EXPECT_LE(max_flatfree_set(restrict_to(big, plane), 2).size, max_flatfree_set(big, 2).size);
}

TEST(AllColourings, Examples) {
    EXPECT_TRUE(all_colorings_mono(projective_geometry(2, 2), 2, 2).holds);
    EXPECT_FALSE(all_colorings_mono(projective_geometry(1, 2), 2, 2).holds);
    EXPECT_TRUE(all_colorings_mono(affine_geometry(2, 3), 2, 2).holds);
}

TEST(AllColourings, MethodsAgreeAndWitnessesAreValid) {
    for (const char* spec : {"pg:1,2", "pg:2,2", "ag:2,3", "ag:3,2", "reid:2", "free:3,2", "pg:1,3"}) {
        const auto m = build_catalog(spec);
        for (int k = 1; k <= 2; ++k) {
            const auto raw = all_colorings_mono(m, k, 2, MonoMode::Raw);
            const auto bt = all_colorings_mono(m, k, 2, MonoMode::Backtrack);
            const auto cap = all_colorings_mono(m, k, 2, MonoMode::Cap);
            EXPECT_EQ(raw.holds, bt.holds) << spec << " k=" << k;
            EXPECT_EQ(raw.holds, cap.holds) << spec << " k=" << k;
            for (const auto* v : {&raw, &bt, &cap}) {
                EXPECT_EQ(v->witness.has_value(), !v->holds);
                if (v->witness) {
                    EXPECT_FALSE(has_mono_flat(m, *v->witness, k)) << spec << " k=" << k;
                }
            }
        }
    }
}

TEST(AllColourings, ThreeColours) {
    const auto m = projective_geometry(2, 2);
    const auto bt = all_colorings_mono(m, 2, 3, MonoMode::Backtrack);
    const auto raw = all_colorings_mono(m, 2, 3, MonoMode::Raw);
    EXPECT_FALSE(bt.holds);
    EXPECT_EQ(bt.holds, raw.holds);
    ASSERT_TRUE(bt.witness);
    EXPECT_FALSE(has_mono_flat(m, *bt.witness, 2));
    EXPECT_THROW(all_colorings_mono(m, 2, 3, MonoMode::Cap), std::invalid_argument);
}

TEST(AllColourings, ParallelElementsShareTheirPointColour) {
    const Matroid m(2, 2, {VecGF(2, {1, 0}), VecGF(2, {0, 1}), VecGF(2, {1, 0}), VecGF(2, {1, 1})});
    const auto v = all_colorings_mono(m, 2, 2);
    EXPECT_FALSE(v.holds);
    ASSERT_TRUE(v.witness);
    EXPECT_EQ(v.witness->color[0], v.witness->color[2]);
}

TEST(AllColourings, RefusesLargeInstances) {
    EXPECT_THROW(all_colorings_mono(projective_geometry(2, 7), 2, 3), ScaleRefusal);
    EXPECT_THROW(all_colorings_mono(projective_geometry(3, 3), 2, 2, MonoMode::Raw), ScaleRefusal);
}

TEST(Reports, SmallRamsey) {
    const auto a = small_ramsey_report(2, 2, 3);
    ASSERT_TRUE(a.holds_at && a.fails_at);
    EXPECT_EQ(*a.fails_at, 2);
    EXPECT_EQ(*a.holds_at, 3);
    const auto b = small_ramsey_report(2, 2, 4);
    EXPECT_EQ(*b.holds_at, 3);
    EXPECT_TRUE(b.ranks.back().holds);
    ASSERT_TRUE(b.ranks[1].witness);
    const auto c = small_ramsey_report(3, 2, 2);
    EXPECT_EQ(c.fails_at, 2);
    EXPECT_FALSE(c.holds_at);
}

TEST(Reports, SmallHalesJewett) {
    const auto a = small_hj_report(3, 2, 2, 3);
    EXPECT_EQ(a.holds_at, 3);
    ASSERT_TRUE(a.ranks.back().max_flatfree);
    EXPECT_EQ(*a.ranks.back().max_flatfree, 4U);
    EXPECT_EQ(small_hj_report(2, 2, 2, 2).fails_at, 2);
    EXPECT_EQ(small_hj_report(3, 2, 2, 2).fails_at, 2);
    EXPECT_FALSE(small_hj_report(3, 2, 2, 2).holds_at);
}
