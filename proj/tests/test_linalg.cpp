#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "flatforge/linalg.hpp"

using namespace flatforge;

namespace {

// Leibniz determinant mod p; independent of elimination.
long long det_leibniz(const std::vector<std::vector<int>>& a, int p) {
    const std::size_t n = a.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    long long total = 0;
    do {
        long long term = 1;
        for (std::size_t i = 0; i < n; ++i) term = term * a[i][perm[i]] % p;
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inversions;
        total += (inversions % 2 ? -term : term);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return ((total % p) + p) % p;
}

std::vector<std::vector<std::size_t>> combos(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(k), true);
    do {
        std::vector<std::size_t> c;
        for (std::size_t i = 0; i < n; ++i)
            if (pick[i]) c.push_back(i);
        out.push_back(c);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return out;
}

std::size_t rank_by_minors(const MatGF& m) {
    for (std::size_t r = std::min(m.rows(), m.cols()); r > 0; --r) {
        for (const auto& rs : combos(m.rows(), r)) {
            for (const auto& cs : combos(m.cols(), r)) {
                std::vector<std::vector<int>> sub(r, std::vector<int>(r));
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < r; ++j) sub[i][j] = m.at(rs[i], cs[j]);
                if (det_leibniz(sub, m.p()) != 0) return r;
            }
        }
    }
    return 0;
}

MatGF random_matrix(std::mt19937_64& rng, int p, std::size_t rows, std::size_t cols) {
    MatGF m(p, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.set(i, j, static_cast<Residue>(rng() % static_cast<unsigned>(p)));
    return m;
}

}  // namespace

TEST(Field, InverseTable) {
    for (int p : {2, 3, 5, 7, 11, 13}) {
        const auto& f = field(p);
        for (int a = 1; a < p; ++a) EXPECT_EQ(f.mul(static_cast<Residue>(a), f.inv(static_cast<Residue>(a))), 1) << p << " " << a;
    }
    EXPECT_THROW(field(4), std::invalid_argument);
    EXPECT_THROW(field(17), std::invalid_argument);
    EXPECT_THROW(field(5).inv(0), std::domain_error);
}

TEST(Rref, Examples) {
    const auto id = MatGF::identity(2, 3);
    const auto r1 = rref(id);
    EXPECT_EQ(r1.matrix, id);
    EXPECT_EQ(r1.rank, 3u);

    const MatGF zero(3, 2, 4);
    const auto r2 = rref(zero);
    EXPECT_EQ(r2.matrix, zero);
    EXPECT_EQ(r2.rank, 0u);
    EXPECT_TRUE(r2.pivots.empty());

    const auto fano = MatGF::from_rows(2, {{1, 0, 1, 0, 1, 0, 1}, {0, 1, 1, 0, 0, 1, 1}, {0, 0, 0, 1, 1, 1, 1}});
    EXPECT_EQ(rref(fano).rank, 3u);
}

TEST(Rref, RankMatchesMinorOracleAndIsIdempotent) {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 300; ++trial) {
        const int p = std::vector<int>{2, 3, 5, 7}[trial % 4];
        const std::size_t rows = 1 + rng() % 5, cols = 1 + rng() % 5;
        auto m = random_matrix(rng, p, rows, cols);
        if (trial % 3 == 0 && rows > 1) {
            // force a dependent row
            for (std::size_t j = 0; j < cols; ++j) m.set(rows - 1, j, field(p).mul(2 % p, m.at(0, j)));
        }
        const auto r = rref(m);
        ASSERT_EQ(r.rank, rank_by_minors(m)) << "trial " << trial;
        EXPECT_EQ(rref(r.matrix).matrix, r.matrix);
        ASSERT_EQ(r.pivots.size(), r.rank);
        for (std::size_t i = 0; i < r.pivots.size(); ++i) {
            if (i) {
                EXPECT_LT(r.pivots[i - 1], r.pivots[i]);
            }
            for (std::size_t row = 0; row < rows; ++row) EXPECT_EQ(r.matrix.at(row, r.pivots[i]), row == i ? 1 : 0);
        }
    }
}

TEST(Rref, WideBinaryMatrixCrossesWordBoundary) {
    std::mt19937_64 rng(7);
    auto m = random_matrix(rng, 2, 6, 150);
    const auto r = rref(m);
    // compare with the byte-based elimination used for odd primes
    const auto g = detail::rref_general(m);
    EXPECT_EQ(r.matrix, g.matrix);
    EXPECT_EQ(r.pivots, g.pivots);
}

TEST(InSpan, Examples) {
    const auto c1 = in_span(MatGF::identity(5, 2), VecGF(5, {2, 3}));
    ASSERT_TRUE(c1);
    EXPECT_EQ(c1->coords, (std::vector<Residue>{2, 3}));

    EXPECT_FALSE(in_span(MatGF::from_rows(2, {{1}, {0}}), VecGF(2, {0, 1})));

    // 2*(1,1) + 1*(0,1) = (2,3) = (2,0) mod 3
    const auto basis = MatGF::from_columns(3, 2, {VecGF(3, {1, 1}), VecGF(3, {0, 1})});
    const auto c3 = in_span(basis, VecGF(3, {2, 0}));
    ASSERT_TRUE(c3);
    EXPECT_EQ(c3->coords, (std::vector<Residue>{2, 1}));
    EXPECT_EQ(basis * *c3, VecGF(3, {2, 0}));
}

TEST(InSpan, DimensionMismatchIsAUsageError) {
    EXPECT_THROW(in_span(MatGF::identity(3, 2), VecGF(3, {1, 1, 1})), std::invalid_argument);
    EXPECT_THROW(in_span(MatGF::identity(3, 2), VecGF(5, {1, 1})), std::invalid_argument);
}

TEST(InSpan, CoefficientsReproduceVector) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const int p = std::vector<int>{2, 3, 5, 13}[trial % 4];
        const auto m = random_matrix(rng, p, 4, 1 + rng() % 4);
        VecGF v(p, std::vector<Residue>(4, 0));
        for (auto& x : v.coords) x = static_cast<Residue>(rng() % static_cast<unsigned>(p));
        const auto c = in_span(m, v);
        MatGF aug(p, 4, m.cols() + 1);
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < m.cols(); ++j) aug.set(i, j, m.at(i, j));
            aug.set(i, m.cols(), v[i]);
        }
        EXPECT_EQ(c.has_value(), rank(aug) == rank(m));
        if (c) {
            EXPECT_EQ(m * *c, v);
        }
    }
}

TEST(CanonicalPoint, Examples) {
    EXPECT_EQ(canonical_point(VecGF(5, {0, 2, 4})), VecGF(5, {0, 1, 2}));
    EXPECT_EQ(canonical_point(VecGF(2, {1, 0, 1})), VecGF(2, {1, 0, 1}));
    EXPECT_EQ(canonical_point(VecGF(3, {2, 2})), VecGF(3, {1, 1}));
    EXPECT_THROW(canonical_point(VecGF(3, {0, 0})), std::invalid_argument);
}

TEST(CanonicalPoint, InvariantUnderScalars) {
    std::mt19937_64 rng(5);
    for (int p : {2, 3, 5, 7, 11, 13}) {
        for (int trial = 0; trial < 50; ++trial) {
            VecGF v(p, std::vector<Residue>(4, 0));
            for (auto& x : v.coords) x = static_cast<Residue>(rng() % static_cast<unsigned>(p));
            if (v.is_zero()) continue;
            for (int c = 1; c < p; ++c) EXPECT_EQ(canonical_point(scale(v, static_cast<Residue>(c))), canonical_point(v));
        }
    }
}

TEST(Hyperplanes, Examples) {
    std::vector<VecGF> got;
    for (const auto& h : hyperplanes_of(2, 2)) got.push_back(h);
    ASSERT_EQ(got.size(), 3u);
    EXPECT_EQ(got[0], VecGF(2, {1, 0}));
    EXPECT_EQ(got[1], VecGF(2, {0, 1}));
    EXPECT_EQ(got[2], VecGF(2, {1, 1}));

    EXPECT_EQ(std::distance(hyperplanes_of(3, 2).begin(), hyperplanes_of(3, 2).end()), 7);
    EXPECT_EQ(std::distance(hyperplanes_of(2, 3).begin(), hyperplanes_of(2, 3).end()), 4);
    EXPECT_THROW(hyperplanes_of(0, 2), std::invalid_argument);
    EXPECT_THROW(hyperplanes_of(17, 2), std::invalid_argument);
}

TEST(Hyperplanes, CountAndPairwiseNonParallel) {
    for (int p : {2, 3, 5}) {
        for (int dim = 1; dim <= (p == 2 ? 6 : 4); ++dim) {
            std::set<VecGF> seen;
            std::size_t n = 0;
            for (const auto& h : hyperplanes_of(dim, p)) {
                EXPECT_EQ(canonical_point(h), h);
                EXPECT_TRUE(seen.insert(h).second);
                ++n;
            }
            EXPECT_EQ(n, projective_point_count(dim, p));
        }
    }
}

TEST(Span, MatchesRref) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int p = std::vector<int>{2, 3, 5}[trial % 3];
        const auto m = random_matrix(rng, p, 5, 1 + rng() % 6);
        Span sp(p, 5);
        for (std::size_t j = 0; j < m.cols(); ++j) sp.insert(pack(m.column(j)));
        EXPECT_EQ(static_cast<std::size_t>(sp.rank()), rank(m));
        for (std::size_t j = 0; j < m.cols(); ++j) {
            EXPECT_TRUE(sp.contains(pack(m.column(j))));
            const auto r = sp.reduce(pack(m.column(j)));
            EXPECT_TRUE(std::all_of(r.begin(), r.end(), [](Residue x) { return x == 0; }));
        }
    }
}

TEST(Inverse, RoundTrip) {
    std::mt19937_64 rng(3);
    int found = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int p = trial % 2 ? 3 : 2;
        const auto m = random_matrix(rng, p, 4, 4);
        const auto inv = inverse(m);
        EXPECT_EQ(inv.has_value(), rank(m) == 4);
        if (inv) {
            ++found;
            EXPECT_EQ(m * *inv, MatGF::identity(p, 4));
        }
    }
    EXPECT_GT(found, 10);
}
