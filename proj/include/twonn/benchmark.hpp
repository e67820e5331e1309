#ifndef TWONN_BENCHMARK_HPP
#define TWONN_BENCHMARK_HPP

#include "twonn/estimator.hpp"
#include "twonn/generators.hpp"
#include "twonn/neighbors.hpp"
#include "twonn/scan.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

/**
 * @file benchmark.hpp
 *
 * @brief Reference experiments on synthetic data: single-dataset cumulate
 * fits, convergence with sample size, and block-decimation scans of noisy
 * two-dimensional data.
 */

namespace twonn::bench {

/// Deterministic per-run seed derived from a base seed and run coordinates.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
    std::vector<std::uint32_t> words{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32)};
    for (auto p : parts) {
        words.push_back(static_cast<std::uint32_t>(p));
        words.push_back(static_cast<std::uint32_t>(p >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

struct FitPanel {
    std::string name;
    GeneratorSpec spec;
    Estimate full;      ///< discard fraction 0
    Estimate discarded; ///< discard fraction 0.1
    std::vector<CdfPoint> cdf;
};

/// The three single-dataset fits: 14-d periodic hypercube, swiss roll, 20-d Cauchy.
inline std::vector<GeneratorSpec> fit_panel_specs(std::uint64_t seed, std::size_t n = 2500) {
    GeneratorSpec cube{GeneratorKind::hypercube, 14, n, seed, true, 0.0, 0};
    GeneratorSpec roll{GeneratorKind::swiss_roll, 2, n, seed, false, 0.0, 0};
    GeneratorSpec cauchy{GeneratorKind::cauchy_norm, 20, n, seed, false, 0.0, 0};
    return {cube, roll, cauchy};
}

inline FitPanel run_fit_panel(const GeneratorSpec& spec, unsigned threads = 0) {
    const auto data = generate(spec);
    const auto nb = two_nearest(data.points, data.metric, NeighborOptions{false, threads});
    const auto mu = compute_mu(nb);
    FitPanel panel;
    panel.name = std::string(to_string(spec.kind));
    panel.spec = spec;
    panel.full = estimate_from_mu(mu, {0.0, Method::cdf_fit});
    panel.discarded = estimate_from_mu(mu, {0.1, Method::cdf_fit});
    panel.cdf = empirical_cdf(mu);
    return panel;
}

inline std::vector<FitPanel> run_fit_panels(std::uint64_t seed, std::size_t n = 2500, unsigned threads = 0) {
    std::vector<FitPanel> out;
    for (const auto& spec : fit_panel_specs(seed, n)) {
        out.push_back(run_fit_panel(spec, threads));
    }
    return out;
}

struct ConvergenceRow {
    GeneratorKind kind = GeneratorKind::hypercube;
    std::size_t d = 0;
    std::size_t n = 0;
    std::size_t instances = 0;
    double d_mean = 0.0;
    double d_std = 0.0;
};

/**
 * @brief Mean estimate over independently generated datasets of size n.
 *
 * Every instance is a fresh dataset with a seed derived from
 * (seed, kind, d, n, instance). The hypercube uses periodic boundaries.
 */
inline ConvergenceRow run_convergence_point(GeneratorKind kind, std::size_t d, std::size_t n, std::size_t instances,
                                            std::uint64_t seed, const EstimatorOptions& est = {},
                                            unsigned threads = 0) {
    ConvergenceRow row{kind, d, n, instances, 0.0, 0.0};
    std::vector<double> values;
    for (std::size_t k = 0; k < instances; ++k) {
        GeneratorSpec spec;
        spec.kind = kind;
        spec.d = d;
        spec.n = n;
        spec.pbc = kind == GeneratorKind::hypercube;
        spec.seed = derive_seed(seed, {static_cast<std::uint64_t>(kind), d, n, k});
        const auto data = generate(spec);
        const auto nb = two_nearest(data.points, data.metric, NeighborOptions{false, threads});
        values.push_back(estimate_id(nb, est).d_hat);
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    row.d_mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - row.d_mean) * (v - row.d_mean);
        }
        row.d_std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return row;
}

inline const std::vector<std::size_t>& convergence_sizes() {
    static const std::vector<std::size_t> sizes{20, 50, 100, 200, 500, 1000, 2500, 5000, 10000, 25000};
    return sizes;
}

struct NoisyScan {
    GeneratorKind kind = GeneratorKind::noisy_plane;
    double sigma = 0.0;
    ScanCurve curve;
    PlateauReport plateau;
};

/// Block-decimation scan of a noisy 2-d dataset with `noise_dims` Gaussian directions of scale sigma.
inline NoisyScan run_noisy_scan(GeneratorKind kind, double sigma, std::uint64_t seed, std::size_t n = 50000,
                                std::size_t noise_dims = 20, double rel_tol = 0.05, std::size_t min_block = 20,
                                unsigned threads = 0) {
    GeneratorSpec spec;
    spec.kind = kind;
    spec.d = 2;
    spec.n = n;
    spec.seed = seed;
    spec.noise_sigma = sigma;
    spec.noise_dims = noise_dims;
    const auto data = generate(spec);
    ScanOptions opts;
    opts.seed = seed;
    opts.neighbors.threads = threads;
    NoisyScan out;
    out.kind = kind;
    out.sigma = sigma;
    const auto grid = default_block_grid(n, min_block);
    out.curve = scan(data.points, data.metric, grid, opts);
    out.plateau = detect_plateau(out.curve, rel_tol);
    return out;
}

} // namespace twonn::bench

#endif
