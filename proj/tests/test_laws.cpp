// Distribution laws of neighbor shells for uniformly scattered points.

#include "support/ks.hpp"

#include "twonn/estimator.hpp"
#include "twonn/neighbors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace twonn;

namespace {

PointSet torus_points(std::size_t n, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> c(n * dim);
    for (auto& v : c) {
        v = u(rng);
    }
    return PointSet(n, dim, std::move(c));
}

struct LawPValues {
    double v1, v2, ratio;
};

LawPValues shell_law_pvalues(std::size_t n, int d, std::uint64_t seed) {
    const auto ps = torus_points(n, static_cast<std::size_t>(d), seed);
    const auto nb = two_nearest(ps, Metric::periodic(std::vector<double>(static_cast<std::size_t>(d), 1.0)));
    const auto shells = shell_samples(nb, d);
    // Each point sees n - 1 others scattered over unit volume.
    const double rho = static_cast<double>(n - 1);
    std::vector<double> v1, v2, r;
    for (const auto& s : shells) {
        v1.push_back(s.delta_v1);
        v2.push_back(s.delta_v2);
        r.push_back(s.ratio);
    }
    auto expo = [rho](double v) { return 1.0 - std::exp(-rho * v); };
    return {ks::p_value(v1, expo), ks::p_value(v2, expo), ks::p_value(r, [](double x) { return x / (1.0 + x); })};
}

} // namespace

TEST(KsHelper, KnownCriticalValues) {
    EXPECT_NEAR(ks::kolmogorov_q(1.3581), 0.05, 5e-4);
    EXPECT_NEAR(ks::kolmogorov_q(1.6276), 0.01, 1e-4);
    EXPECT_EQ(ks::kolmogorov_q(0.0), 1.0);
}

TEST(KsHelper, DetectsWrongDistribution) {
    std::mt19937_64 rng(1);
    std::exponential_distribution<double> e(1.0);
    std::vector<double> s(2000);
    for (auto& x : s) {
        x = e(rng);
    }
    EXPECT_GT(ks::p_value(s, [](double x) { return 1.0 - std::exp(-x); }), 0.01);
    EXPECT_LT(ks::p_value(s, [](double x) { return 1.0 - std::exp(-1.3 * x); }), 1e-6);
}

TEST(ShellLaws, ExponentialVolumesAndRatioLaw) {
    for (int d : {2, 5}) {
        int pass_v1 = 0, pass_v2 = 0, pass_r = 0;
        const int seeds = 5;
        for (int s = 0; s < seeds; ++s) {
            const auto p = shell_law_pvalues(5000, d, 1000 + 17 * s + d);
            pass_v1 += p.v1 > 0.01;
            pass_v2 += p.v2 > 0.01;
            pass_r += p.ratio > 0.01;
        }
        EXPECT_GE(pass_v1, seeds - 1) << "d=" << d;
        EXPECT_GE(pass_v2, seeds - 1) << "d=" << d;
        EXPECT_GE(pass_r, seeds - 1) << "d=" << d;
    }
}

TEST(ShellLaws, WrongDimensionFails) {
    // The same volumes computed with the wrong exponent are far from exponential.
    const auto ps = torus_points(5000, 3, 4);
    const auto nb = two_nearest(ps, Metric::periodic({1.0, 1.0, 1.0}));
    const auto shells = shell_samples(nb, 2);
    std::vector<double> r;
    for (const auto& s : shells) {
        r.push_back(s.ratio);
    }
    EXPECT_LT(ks::p_value(r, [](double x) { return x / (1.0 + x); }), 1e-6);
}

TEST(ShellLaws, RatioEqualsMuPowerMinusOne) {
    for (int d : {1, 2, 5, 9}) {
        const auto ps = torus_points(2000, static_cast<std::size_t>(d), 50 + d);
        const auto nb = two_nearest(ps, Metric::euclidean());
        const auto shells = shell_samples(nb, d);
        const auto mu = compute_mu(nb);
        for (std::size_t i = 0; i < nb.size(); ++i) {
            const double expected = std::pow(mu[i], d) - 1.0;
            EXPECT_NEAR(shells[i].ratio, expected, 1e-9 * std::max(expected, 1e-300)) << "d=" << d << " i=" << i;
        }
    }
}
