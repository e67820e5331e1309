#ifndef TWONN_SCAN_HPP
#define TWONN_SCAN_HPP

#include "twonn/dataset.hpp"
#include "twonn/detail/parallel.hpp"
#include "twonn/error.hpp"
#include "twonn/estimator.hpp"
#include "twonn/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

/**
 * @file scan.hpp
 *
 * @brief Intrinsic dimension as a function of subsample size.
 *
 * For each block size n the dataset is shuffled and cut into disjoint blocks
 * of exactly n points. The estimator runs on every block, with neighbors
 * recomputed inside the block, and the block estimates are averaged. Smaller
 * blocks probe larger length scales; a range of n over which the average is
 * flat identifies the number of directions resolved at that scale.
 */

namespace twonn {

struct ScanPoint {
    std::size_t block_size = 0;
    double d_mean = 0.0;
    /// Sample standard deviation across blocks; 0 for a single block.
    double d_std = 0.0;
    std::size_t n_blocks = 0;
};

struct ScanCurve {
    std::vector<ScanPoint> points; ///< ascending block size
    std::uint64_t seed = 0;
};

struct ScanOptions {
    EstimatorOptions estimator{};
    NeighborOptions neighbors{};
    std::uint64_t seed = 0;
};

struct PlateauReport {
    std::size_t lo = 0;
    std::size_t hi = 0;
    double d_plateau = 0.0;
    bool found = false;
};

/**
 * @brief Seeded partition of 0..n_total-1 into floor(n_total / block_size)
 * disjoint blocks of exactly `block_size` indices.
 *
 * The shuffle is seeded from (seed, block_size), so each block size gets its
 * own partition and repeated calls return the same one.
 */
inline std::vector<std::vector<std::size_t>> decimate(std::size_t n_total, std::size_t block_size,
                                                      std::uint64_t seed) {
    if (block_size < 3) {
        throw BlockTooSmallError(block_size);
    }
    if (block_size > n_total) {
        throw BlockTooLargeError(block_size, n_total);
    }
    std::vector<std::size_t> perm(n_total);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block_size), static_cast<std::uint32_t>(block_size >> 32)};
    std::mt19937_64 rng(seq);
    std::shuffle(perm.begin(), perm.end(), rng);

    const std::size_t n_blocks = n_total / block_size;
    std::vector<std::vector<std::size_t>> blocks(n_blocks);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        blocks[b].assign(perm.begin() + static_cast<std::ptrdiff_t>(b * block_size),
                         perm.begin() + static_cast<std::ptrdiff_t>((b + 1) * block_size));
    }
    return blocks;
}

/// n_total, n_total/2, n_total/4, ... down to `min_block`, returned in ascending order.
inline std::vector<std::size_t> default_block_grid(std::size_t n_total, std::size_t min_block = 20) {
    min_block = std::max<std::size_t>(min_block, 3);
    std::vector<std::size_t> grid;
    for (std::size_t n = n_total; n >= min_block; n /= 2) {
        grid.push_back(n);
    }
    if (grid.empty() && n_total >= 3) {
        grid.push_back(n_total);
    }
    std::reverse(grid.begin(), grid.end());
    return grid;
}

namespace detail {

template <class EstimateBlock>
ScanCurve run_scan(std::size_t n_total, std::span<const std::size_t> block_sizes, const ScanOptions& opts,
                   EstimateBlock&& estimate_block) {
    std::vector<std::size_t> sizes(block_sizes.begin(), block_sizes.end());
    std::sort(sizes.begin(), sizes.end());
    if (std::adjacent_find(sizes.begin(), sizes.end()) != sizes.end()) {
        throw InvalidArgument("block sizes must be distinct");
    }

    ScanCurve curve;
    curve.seed = opts.seed;
    for (std::size_t size : sizes) {
        const auto blocks = decimate(n_total, size, opts.seed);
        std::vector<double> d(blocks.size());
        detail::parallel_for(blocks.size(), opts.neighbors.threads, [&](std::size_t b) {
            try {
                d[b] = estimate_block(blocks[b]);
            } catch (const Error& e) {
                throw BlockEstimateError(size, b, e.what());
            }
        });

        ScanPoint pt;
        pt.block_size = size;
        pt.n_blocks = blocks.size();
        double sum = 0.0;
        for (double v : d) {
            sum += v;
        }
        pt.d_mean = sum / static_cast<double>(d.size());
        if (d.size() > 1) {
            double ss = 0.0;
            for (double v : d) {
                ss += (v - pt.d_mean) * (v - pt.d_mean);
            }
            pt.d_std = std::sqrt(ss / static_cast<double>(d.size() - 1));
        }
        curve.points.push_back(pt);
    }
    return curve;
}

} // namespace detail

/**
 * @brief Block-decimation scan of a coordinate dataset.
 *
 * Every block size must lie in [3, N] and sizes must be distinct. Block
 * estimates are gathered by block index, so the curve does not depend on the
 * number of threads. Estimator failures are rethrown as `BlockEstimateError`
 * naming the block size and block index.
 */
inline ScanCurve scan(const PointSet& ps, const Metric& metric, std::span<const std::size_t> block_sizes,
                      const ScanOptions& opts = {}) {
    check_metric(ps, metric);
    NeighborOptions inner = opts.neighbors;
    inner.threads = 1;
    return detail::run_scan(ps.size(), block_sizes, opts, [&](const std::vector<std::size_t>& block) {
        const auto nb = two_nearest(ps.subset(block), metric, inner);
        return estimate_id(nb, opts.estimator).d_hat;
    });
}

/// Block-decimation scan of a precomputed distance matrix.
inline ScanCurve scan(const DistanceMatrix& dm, std::span<const std::size_t> block_sizes,
                      const ScanOptions& opts = {}) {
    NeighborOptions inner = opts.neighbors;
    inner.threads = 1;
    return detail::run_scan(dm.size(), block_sizes, opts, [&](const std::vector<std::size_t>& block) {
        const auto nb = two_nearest_from_matrix(dm.subset(block), inner);
        return estimate_id(nb, opts.estimator).d_hat;
    });
}

/// True when (max - min) / mean of d_mean over points [first, last] is within `rel_tol`.
inline bool is_flat(const ScanCurve& curve, std::size_t first, std::size_t last, double rel_tol) {
    double lo = curve.points[first].d_mean;
    double hi = lo;
    double sum = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        lo = std::min(lo, curve.points[i].d_mean);
        hi = std::max(hi, curve.points[i].d_mean);
        sum += curve.points[i].d_mean;
    }
    const double mean = sum / static_cast<double>(last - first + 1);
    return mean > 0.0 && (hi - lo) / mean <= rel_tol;
}

/**
 * @brief Longest contiguous run of the curve with a flat d_mean.
 *
 * A run is flat when `is_flat()` holds and it spans at least `min_points`
 * curve points. Among runs of equal length the earliest wins. This is a
 * heuristic; the raw curve is the authoritative output.
 */
inline PlateauReport detect_plateau(const ScanCurve& curve, double rel_tol = 0.05, std::size_t min_points = 3) {
    PlateauReport report;
    const std::size_t n = curve.points.size();
    min_points = std::max<std::size_t>(min_points, 1);
    if (n < min_points) {
        return report;
    }
    std::size_t best_first = 0;
    std::size_t best_len = 0;
    for (std::size_t first = 0; first < n; ++first) {
        std::size_t last = first;
        while (last + 1 < n && is_flat(curve, first, last + 1, rel_tol)) {
            ++last;
        }
        const std::size_t len = last - first + 1;
        if (len >= min_points && len > best_len && is_flat(curve, first, last, rel_tol)) {
            best_first = first;
            best_len = len;
        }
    }
    if (best_len == 0) {
        return report;
    }
    double sum = 0.0;
    for (std::size_t i = best_first; i < best_first + best_len; ++i) {
        sum += curve.points[i].d_mean;
    }
    report.found = true;
    report.lo = curve.points[best_first].block_size;
    report.hi = curve.points[best_first + best_len - 1].block_size;
    report.d_plateau = sum / static_cast<double>(best_len);
    return report;
}

} // namespace twonn

#endif
