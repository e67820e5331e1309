#include "twonn/generators.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace twonn;

namespace {

GeneratorSpec make(GeneratorKind kind, std::size_t d, std::size_t n, std::uint64_t seed) {
    GeneratorSpec s;
    s.kind = kind;
    s.d = d;
    s.n = n;
    s.seed = seed;
    return s;
}

double norm(std::span<const double> r) {
    double s = 0.0;
    for (double v : r) {
        s += v * v;
    }
    return std::sqrt(s);
}

} // namespace

TEST(Generators, EmbeddingDimensions) {
    EXPECT_EQ(generate(make(GeneratorKind::hypercube, 4, 10, 1)).points.dim(), 4u);
    EXPECT_EQ(generate(make(GeneratorKind::gaussian, 3, 10, 1)).points.dim(), 3u);
    EXPECT_EQ(generate(make(GeneratorKind::cauchy_norm, 6, 10, 1)).points.dim(), 6u);
    EXPECT_EQ(generate(make(GeneratorKind::hypersphere, 2, 10, 1)).points.dim(), 3u);
    EXPECT_EQ(generate(make(GeneratorKind::swiss_roll, 2, 10, 1)).points.dim(), 3u);
    auto plane = make(GeneratorKind::noisy_plane, 2, 10, 1);
    plane.noise_dims = 20;
    EXPECT_EQ(generate(plane).points.dim(), 22u);
    auto roll = make(GeneratorKind::noisy_gauss_roll, 2, 10, 1);
    roll.noise_dims = 20;
    EXPECT_EQ(generate(roll).points.dim(), 23u);
}

TEST(Generators, Determinism) {
    for (const auto& [kind, name] : generator_kind_names) {
        auto spec = make(kind, 2, 500, 42);
        if (kind == GeneratorKind::noisy_plane || kind == GeneratorKind::noisy_gauss_roll) {
            spec.noise_dims = 3;
            spec.noise_sigma = 0.01;
        }
        EXPECT_EQ(generate(spec).points, generate(spec).points) << name;
        auto other = spec;
        other.seed = 43;
        EXPECT_FALSE(generate(spec).points == generate(other).points) << name;
    }
}

TEST(Generators, KindNamesRoundTrip) {
    for (const auto& [kind, name] : generator_kind_names) {
        EXPECT_EQ(parse_generator_kind(name), kind);
        EXPECT_EQ(to_string(kind), name);
    }
    EXPECT_FALSE(parse_generator_kind("torus").has_value());
}

TEST(Generators, UnsupportedCombinations) {
    auto s = make(GeneratorKind::gaussian, 3, 10, 1);
    s.pbc = true;
    EXPECT_THROW(generate(s), UnsupportedCombinationError);
    auto roll = make(GeneratorKind::swiss_roll, 3, 10, 1);
    EXPECT_THROW(generate(roll), UnsupportedCombinationError);
    auto cube = make(GeneratorKind::hypercube, 3, 10, 1);
    cube.noise_sigma = 0.1;
    EXPECT_THROW(generate(cube), UnsupportedCombinationError);
    auto bad = make(GeneratorKind::noisy_plane, 2, 10, 1);
    bad.noise_sigma = -1.0;
    EXPECT_THROW(generate(bad), InvalidArgument);
    EXPECT_THROW(generate(make(GeneratorKind::hypercube, 0, 10, 1)), InvalidArgument);
    EXPECT_THROW(generate(make(GeneratorKind::hypercube, 2, 0, 1)), InvalidArgument);
}

TEST(Generators, HypercubeUniform) {
    auto spec = make(GeneratorKind::hypercube, 3, 10000, 5);
    spec.pbc = true;
    const auto data = generate(spec);
    EXPECT_TRUE(data.metric.is_periodic());
    EXPECT_EQ(data.metric.box(), (std::vector<double>{1.0, 1.0, 1.0}));
    for (std::size_t k = 0; k < 3; ++k) {
        double sum = 0.0;
        for (std::size_t i = 0; i < data.points.size(); ++i) {
            const double v = data.points(i, k);
            ASSERT_GE(v, 0.0);
            ASSERT_LT(v, 1.0);
            sum += v;
        }
        EXPECT_NEAR(sum / 10000.0, 0.5, 0.015);
    }
}

TEST(Generators, HypersphereNormsAndMeans) {
    for (std::size_t d : {1u, 2u, 5u, 10u}) {
        const auto data = generate(make(GeneratorKind::hypersphere, d, 20000, 3 + d));
        const auto& ps = data.points;
        std::vector<double> mean(ps.dim(), 0.0);
        for (std::size_t i = 0; i < ps.size(); ++i) {
            ASSERT_NEAR(norm(ps.row(i)), 1.0, 1e-12);
            for (std::size_t k = 0; k < ps.dim(); ++k) {
                mean[k] += ps(i, k);
            }
        }
        for (double m : mean) {
            EXPECT_NEAR(m / 20000.0, 0.0, 4.0 / std::sqrt(20000.0));
        }
    }
}

TEST(Generators, CauchyMedianNorm) {
    // Oracle: numerically integrate (2/pi) / (1 + x^2) until the mass reaches 1/2.
    double mass = 0.0;
    double x = 0.0;
    const double h = 1e-6;
    while (mass < 0.5) {
        const double mid = x + 0.5 * h;
        mass += h * (2.0 / std::numbers::pi) / (1.0 + mid * mid);
        x += h;
    }
    ASSERT_NEAR(x, 1.0, 1e-5);

    const auto data = generate(make(GeneratorKind::cauchy_norm, 5, 100000, 9));
    std::vector<double> norms;
    for (std::size_t i = 0; i < data.points.size(); ++i) {
        norms.push_back(norm(data.points.row(i)));
    }
    std::nth_element(norms.begin(), norms.begin() + 50000, norms.end());
    EXPECT_NEAR(norms[50000], x, 0.02);
}

TEST(Generators, GaussianMoments) {
    const auto data = generate(make(GeneratorKind::gaussian, 4, 50000, 2));
    for (std::size_t k = 0; k < 4; ++k) {
        double s = 0.0, ss = 0.0;
        for (std::size_t i = 0; i < data.points.size(); ++i) {
            s += data.points(i, k);
            ss += data.points(i, k) * data.points(i, k);
        }
        EXPECT_NEAR(s / 50000.0, 0.0, 4.0 / std::sqrt(50000.0));
        EXPECT_NEAR(ss / 50000.0, 1.0, 0.03);
    }
}

TEST(Generators, SwissRollGeometry) {
    const auto data = generate(make(GeneratorKind::swiss_roll, 2, 5000, 4));
    for (std::size_t i = 0; i < data.points.size(); ++i) {
        const double x = data.points(i, 0), y = data.points(i, 1), z = data.points(i, 2);
        const double t = std::hypot(x, z);
        ASSERT_GE(t, swiss_roll::t_min - 1e-9);
        ASSERT_LE(t, swiss_roll::t_max + 1e-9);
        ASSERT_GE(y, 0.0);
        ASSERT_LE(y, swiss_roll::height);
        ASSERT_NEAR(std::cos(t) * t, x, 1e-9 * t);
        ASSERT_NEAR(std::sin(t) * t, z, 1e-9 * t);
    }
}

TEST(Generators, SwissRollAreaUniform) {
    // Equal-width bins in arc length should receive equal counts.
    const std::size_t n = 50000;
    const int bins = 50;
    const auto data = generate(make(GeneratorKind::swiss_roll, 2, n, 12));
    const double s0 = swiss_roll::arc_length(swiss_roll::t_min);
    const double s1 = swiss_roll::arc_length(swiss_roll::t_max);
    std::vector<double> counts(bins, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = std::hypot(data.points(i, 0), data.points(i, 2));
        const double s = (swiss_roll::arc_length(t) - s0) / (s1 - s0);
        counts[std::min(bins - 1, static_cast<int>(s * bins))] += 1.0;
    }
    const double expected = static_cast<double>(n) / bins;
    double chi2 = 0.0;
    for (double c : counts) {
        chi2 += (c - expected) * (c - expected) / expected;
    }
    boost::math::chi_squared dist(bins - 1);
    EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 0.01) << "chi2=" << chi2;

    // Sampling t uniformly instead would fail the same test.
    std::vector<double> naive(bins, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = swiss_roll::t_min + (swiss_roll::t_max - swiss_roll::t_min) * (i + 0.5) / n;
        const double s = (swiss_roll::arc_length(t) - s0) / (s1 - s0);
        naive[std::min(bins - 1, static_cast<int>(s * bins))] += 1.0;
    }
    double chi2_naive = 0.0;
    for (double c : naive) {
        chi2_naive += (c - expected) * (c - expected) / expected;
    }
    EXPECT_LT(boost::math::cdf(boost::math::complement(dist, chi2_naive)), 1e-6);
}

TEST(Generators, ArcLengthDerivative) {
    for (double t : {5.0, 8.0, 12.0}) {
        const double h = 1e-5;
        const double numeric = (swiss_roll::arc_length(t + h) - swiss_roll::arc_length(t - h)) / (2 * h);
        EXPECT_NEAR(numeric, std::sqrt(1 + t * t), 1e-6);
    }
}

TEST(Generators, NoisyPlaneZeroNoise) {
    auto spec = make(GeneratorKind::noisy_plane, 2, 1000, 6);
    spec.noise_dims = 20;
    const auto data = generate(spec);
    for (std::size_t i = 0; i < data.points.size(); ++i) {
        for (std::size_t k = 0; k < 2; ++k) {
            ASSERT_GE(data.points(i, k), 0.0);
            ASSERT_LT(data.points(i, k), noisy_plane_side);
        }
        for (std::size_t k = 2; k < 22; ++k) {
            ASSERT_EQ(data.points(i, k), 0.0);
        }
    }
}

TEST(Generators, NoisyPlaneNoiseScale) {
    auto spec = make(GeneratorKind::noisy_plane, 2, 20000, 6);
    spec.noise_dims = 5;
    spec.noise_sigma = 1e-3;
    const auto data = generate(spec);
    double ss = 0.0;
    for (std::size_t i = 0; i < data.points.size(); ++i) {
        for (std::size_t k = 2; k < 7; ++k) {
            ss += data.points(i, k) * data.points(i, k);
        }
    }
    EXPECT_NEAR(std::sqrt(ss / (5.0 * 20000.0)), 1e-3, 2e-5);
}

TEST(Generators, NoisyGaussRollStaysOnRoll) {
    auto spec = make(GeneratorKind::noisy_gauss_roll, 2, 5000, 8);
    spec.noise_dims = 20;
    const auto data = generate(spec);
    ASSERT_EQ(data.points.dim(), 23u);
    for (std::size_t i = 0; i < data.points.size(); ++i) {
        const double t = std::hypot(data.points(i, 0), data.points(i, 2));
        ASSERT_GE(t, swiss_roll::t_min - 1e-9);
        ASSERT_LE(t, swiss_roll::t_max + 1e-9);
        for (std::size_t k = 3; k < 23; ++k) {
            ASSERT_EQ(data.points(i, k), 0.0);
        }
    }
}
