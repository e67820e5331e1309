#include "twonn/dataset.hpp"
#include "twonn/kdtree.hpp"
#include "twonn/neighbors.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

using namespace twonn;

namespace {

PointSet random_points(std::size_t n, std::size_t dim, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, scale);
    std::vector<double> c(n * dim);
    for (auto& v : c) {
        v = u(rng);
    }
    return PointSet(n, dim, std::move(c));
}

// Lattice points produce many exactly equal distances.
PointSet grid_points(std::size_t side, std::size_t dim) {
    std::size_t n = 1;
    for (std::size_t k = 0; k < dim; ++k) {
        n *= side;
    }
    std::vector<double> c(n * dim);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t rest = i;
        for (std::size_t k = 0; k < dim; ++k) {
            c[i * dim + k] = static_cast<double>(rest % side) / static_cast<double>(side);
            rest /= side;
        }
    }
    return PointSet(n, dim, std::move(c));
}

// Reference: every pair, full sort of (distance, index).
std::vector<NeighborInfo> naive(const PointSet& ps, const Metric& m) {
    std::vector<NeighborInfo> out(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
        std::vector<std::pair<double, std::size_t>> cand;
        for (std::size_t j = 0; j < ps.size(); ++j) {
            if (j != i) {
                cand.emplace_back(squared_distance(ps.row(i), ps.row(j), m), j);
            }
        }
        std::sort(cand.begin(), cand.end());
        out[i] = {std::sqrt(cand[0].first), std::sqrt(cand[1].first), cand[0].second, cand[1].second};
    }
    return out;
}

} // namespace

TEST(Neighbors, CollinearExample) {
    auto ps = validate_pointset({{0.0}, {1.0}, {3.0}});
    const std::vector<NeighborInfo> expected{{1, 3, 1, 2}, {1, 2, 0, 2}, {2, 3, 1, 0}};
    EXPECT_EQ(two_nearest_brute(ps, Metric::euclidean()), expected);
    EXPECT_EQ(two_nearest_accelerated(ps, Metric::euclidean()), expected);
    EXPECT_EQ(two_nearest(ps, Metric::euclidean()), expected);
}

TEST(Neighbors, DuplicatesRejected) {
    auto ps = validate_pointset({{0.0, 0.0}, {1.0, 2.0}, {0.0, 0.0}, {5.0, 1.0}});
    for (auto fn : {&two_nearest_brute, &two_nearest_accelerated, &two_nearest}) {
        try {
            fn(ps, Metric::euclidean(), {});
            FAIL() << "expected DuplicatePointsError";
        } catch (const DuplicatePointsError& e) {
            ASSERT_EQ(e.pairs().size(), 1u);
            EXPECT_EQ(e.pairs()[0], std::make_pair(std::size_t{0}, std::size_t{2}));
        }
    }
}

TEST(Neighbors, DropDuplicates) {
    auto ps = validate_pointset({{0.0}, {1.0}, {0.0}, {3.0}, {1.0}});
    NeighborOptions opts;
    opts.drop_duplicates = true;
    const auto nb = two_nearest_brute(ps, Metric::euclidean(), opts);
    const std::vector<NeighborInfo> expected{{1, 3, 1, 2}, {1, 2, 0, 2}, {2, 3, 1, 0}};
    EXPECT_EQ(nb, expected);
    EXPECT_EQ(two_nearest_accelerated(ps, Metric::euclidean(), opts), expected);
}

TEST(Neighbors, TooFewPoints) {
    PointSet two(2, 1, {0.0, 1.0});
    EXPECT_THROW(two_nearest_brute(two, Metric::euclidean()), TooFewPointsError);
    EXPECT_THROW(two_nearest(two, Metric::euclidean()), TooFewPointsError);
}

TEST(Neighbors, PrecomputedMetricRejectedForCoordinates) {
    auto ps = random_points(10, 2, 1);
    EXPECT_THROW(two_nearest_brute(ps, Metric::precomputed()), InvalidMetricError);
}

TEST(Neighbors, BruteMatchesNaiveReference) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto ps = random_points(150 + seed * 17, 1 + seed % 6, seed);
        EXPECT_EQ(two_nearest_brute(ps, Metric::euclidean(), {false, 1}), naive(ps, Metric::euclidean()));
        std::vector<double> box(ps.dim(), 1.0);
        EXPECT_EQ(two_nearest_brute(ps, Metric::periodic(box), {false, 1}), naive(ps, Metric::periodic(box)));
    }
}

TEST(Neighbors, TiesGoToLowestIndex) {
    for (std::size_t dim : {1u, 2u, 3u}) {
        auto ps = grid_points(dim == 1 ? 40 : (dim == 2 ? 12 : 6), dim);
        const auto ref = naive(ps, Metric::euclidean());
        EXPECT_EQ(two_nearest_brute(ps, Metric::euclidean(), {false, 1}), ref);
        EXPECT_EQ(two_nearest_accelerated(ps, Metric::euclidean()), ref);
        std::vector<double> box(dim, 1.0);
        const auto ref_p = naive(ps, Metric::periodic(box));
        EXPECT_EQ(two_nearest_brute(ps, Metric::periodic(box)), ref_p);
        EXPECT_EQ(two_nearest_accelerated(ps, Metric::periodic(box)), ref_p);
    }
}

TEST(Neighbors, MatrixPathMatchesCoordinates) {
    auto ps = random_points(100, 5, 42);
    const auto dm = pairwise_distances(ps, Metric::euclidean());
    EXPECT_EQ(two_nearest_from_matrix(dm), two_nearest_brute(ps, Metric::euclidean()));
    auto ps3 = random_points(50, 3, 43);
    EXPECT_EQ(two_nearest_from_matrix(pairwise_distances(ps3, Metric::euclidean())),
              two_nearest_brute(ps3, Metric::euclidean()));
}

TEST(Neighbors, MatrixReadOff) {
    auto dm = DistanceMatrix::from_rows({{0, 2, 5}, {2, 0, 4}, {5, 4, 0}});
    const auto nb = two_nearest_from_matrix(dm);
    EXPECT_EQ(nb[0], (NeighborInfo{2, 5, 1, 2}));
    EXPECT_EQ(nb[1], (NeighborInfo{2, 4, 0, 2}));
    EXPECT_EQ(nb[2], (NeighborInfo{4, 5, 1, 0}));
}

TEST(Neighbors, MatrixDuplicates) {
    auto dm = DistanceMatrix::from_rows({{0, 1, 2, 3}, {1, 0, 0, 3}, {2, 0, 0, 3}, {3, 3, 3, 0}});
    try {
        two_nearest_from_matrix(dm);
        FAIL() << "expected DuplicatePointsError";
    } catch (const DuplicatePointsError& e) {
        ASSERT_EQ(e.pairs().size(), 1u);
        EXPECT_EQ(e.pairs()[0], std::make_pair(std::size_t{1}, std::size_t{2}));
    }
    NeighborOptions opts;
    opts.drop_duplicates = true;
    const auto nb = two_nearest_from_matrix(dm, opts);
    ASSERT_EQ(nb.size(), 3u);
    EXPECT_EQ(nb[0], (NeighborInfo{1, 3, 1, 2}));
}

TEST(Neighbors, AcceleratedMatchesBruteAcrossShapes) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t dim = 1 + rng() % 12;
        const std::size_t n = 10 + rng() % 1500;
        auto ps = random_points(n, dim, rng());
        EXPECT_EQ(two_nearest_accelerated(ps, Metric::euclidean()), two_nearest_brute(ps, Metric::euclidean()))
            << "n=" << n << " dim=" << dim;
        std::vector<double> box(dim, 1.0);
        EXPECT_EQ(two_nearest_accelerated(ps, Metric::periodic(box)), two_nearest_brute(ps, Metric::periodic(box)))
            << "periodic n=" << n << " dim=" << dim;
        EXPECT_EQ(two_nearest(ps, Metric::euclidean()), two_nearest_brute(ps, Metric::euclidean()));
    }
}

TEST(Neighbors, ClusteredData) {
    // Tight clusters far apart stress the tree's pruning.
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 1e-3);
    std::vector<double> c;
    for (int cl = 0; cl < 20; ++cl) {
        for (int i = 0; i < 50; ++i) {
            for (int k = 0; k < 3; ++k) {
                c.push_back(100.0 * cl + g(rng));
            }
        }
    }
    PointSet ps(1000, 3, c);
    EXPECT_EQ(two_nearest_accelerated(ps, Metric::euclidean()), two_nearest_brute(ps, Metric::euclidean()));
}

TEST(Neighbors, InvariantsHold) {
    auto ps = random_points(500, 4, 77);
    const auto nb = two_nearest(ps, Metric::euclidean());
    for (std::size_t i = 0; i < nb.size(); ++i) {
        EXPECT_GT(nb[i].r1, 0.0);
        EXPECT_LE(nb[i].r1, nb[i].r2);
        EXPECT_NE(nb[i].idx1, i);
        EXPECT_NE(nb[i].idx2, i);
        EXPECT_NE(nb[i].idx1, nb[i].idx2);
    }
}

TEST(Neighbors, PermutationRelabels) {
    auto ps = random_points(700, 3, 9);
    std::vector<std::size_t> perm(ps.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(10));
    auto permuted = ps.subset(perm);
    std::vector<std::size_t> inverse(perm.size());
    for (std::size_t a = 0; a < perm.size(); ++a) {
        inverse[perm[a]] = a;
    }
    const auto base = two_nearest(ps, Metric::euclidean());
    const auto shuffled = two_nearest(permuted, Metric::euclidean());
    for (std::size_t a = 0; a < perm.size(); ++a) {
        const auto& orig = base[perm[a]];
        EXPECT_EQ(shuffled[a].r1, orig.r1);
        EXPECT_EQ(shuffled[a].r2, orig.r2);
        EXPECT_EQ(shuffled[a].idx1, inverse[orig.idx1]);
        EXPECT_EQ(shuffled[a].idx2, inverse[orig.idx2]);
    }
}

TEST(Neighbors, ScalingScalesDistances) {
    auto ps = random_points(400, 6, 12);
    const auto base = two_nearest(ps, Metric::euclidean());
    for (double c : {1e-6, 3.0, 1e6}) {
        const auto scaled = two_nearest(ps.scaled(c), Metric::euclidean());
        for (std::size_t i = 0; i < base.size(); ++i) {
            EXPECT_NEAR(scaled[i].r1, c * base[i].r1, 1e-12 * c * base[i].r1);
            EXPECT_NEAR(scaled[i].r2, c * base[i].r2, 1e-12 * c * base[i].r2);
        }
    }
}

TEST(Neighbors, ThreadCountDoesNotChangeResults) {
    auto ps = random_points(3000, 8, 31);
    const auto one = two_nearest_brute(ps, Metric::euclidean(), {false, 1});
    EXPECT_EQ(two_nearest_brute(ps, Metric::euclidean(), {false, 4}), one);
    EXPECT_EQ(two_nearest_accelerated(ps, Metric::euclidean(), {false, 3}), one);
    EXPECT_EQ(two_nearest(ps, Metric::euclidean(), {false, 2}), one);
}

TEST(KdTree, EvaluatedCountReported) {
    auto ps = random_points(5000, 2, 4);
    TwoNeighborTree tree(ps, Metric::euclidean());
    std::size_t evaluated = 0;
    const auto r = tree.query(ps.row(0).data(), 0, &evaluated);
    EXPECT_GT(evaluated, 0u);
    EXPECT_LT(evaluated, 500u);
    EXPECT_NE(r.idx1, 0u);
}
