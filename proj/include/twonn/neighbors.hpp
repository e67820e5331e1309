#ifndef TWONN_NEIGHBORS_HPP
#define TWONN_NEIGHBORS_HPP

#include "twonn/dataset.hpp"
#include "twonn/detail/brute.hpp"
#include "twonn/detail/kernels.hpp"
#include "twonn/detail/parallel.hpp"
#include "twonn/error.hpp"
#include "twonn/kdtree.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

/**
 * @file neighbors.hpp
 *
 * @brief First and second nearest-neighbor distances for every point.
 *
 * All entry points return one `NeighborInfo` per point. Ties in distance are
 * broken by the lowest candidate index, and zero first-neighbor distances are
 * reported as `DuplicatePointsError` unless duplicates are dropped first.
 */

namespace twonn {

struct NeighborInfo {
    double r1 = 0.0;
    double r2 = 0.0;
    std::size_t idx1 = 0;
    std::size_t idx2 = 0;

    friend bool operator==(const NeighborInfo&, const NeighborInfo&) = default;
};

struct NeighborOptions {
    /// Remove all but the first row of each group of identical rows before searching.
    /// Returned indices then refer to the deduplicated set.
    bool drop_duplicates = false;
    /// Worker threads; 0 uses the hardware concurrency. Results do not depend on it.
    unsigned threads = 0;
};

namespace detail {

inline void require_three(std::size_t n) {
    if (n < 3) {
        throw TooFewPointsError(n);
    }
}

// Deduplicates or rejects identical rows ahead of the search.
inline PointSet prepare_points(const PointSet& ps, const Metric& metric, const NeighborOptions& opts) {
    require_three(ps.size());
    check_metric(ps, metric);
    if (opts.drop_duplicates) {
        PointSet out = remove_duplicate_rows(ps);
        require_three(out.size());
        return out;
    }
    auto pairs = duplicate_pairs(ps);
    if (!pairs.empty()) {
        throw DuplicatePointsError(std::move(pairs));
    }
    return ps;
}

// Distinct rows can still produce r1 == 0 through underflow of the squared sum.
inline void reject_zero_r1(const std::vector<NeighborInfo>& out) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i].r1 == 0.0 && i < out[i].idx1) {
            pairs.emplace_back(i, out[i].idx1);
        } else if (out[i].r1 == 0.0) {
            pairs.emplace_back(out[i].idx1, i);
        }
    }
    if (!pairs.empty()) {
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
        throw DuplicatePointsError(std::move(pairs));
    }
}

inline NeighborInfo finish(const TwoNeighborTree::Result& r) {
    return NeighborInfo{std::sqrt(r.sq1), std::sqrt(r.sq2), r.idx1, r.idx2};
}

} // namespace detail

/**
 * @brief Exhaustive O(N^2 D) search over squared distances.
 *
 * Single-threaded runs visit each unordered pair once and offer it to both
 * points; threaded runs scan all candidates per point. Both keep the two
 * smallest (distance, index) pairs, so they agree exactly.
 */
inline std::vector<NeighborInfo> two_nearest_brute(const PointSet& input, const Metric& metric,
                                                   const NeighborOptions& opts = {}) {
    const PointSet ps = detail::prepare_points(input, metric, opts);
    const std::size_t n = ps.size();
    const detail::DistanceTile tile(ps, metric);
    constexpr std::size_t width = detail::DistanceTile::width;
    std::vector<TwoNeighborTree::Result> best(n);

    if (detail::resolve_threads(opts.threads) <= 1) {
        std::array<double, width> buf{};
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t first = i + 1; first < n; first += width) {
                const std::size_t count = std::min(width, n - first);
                tile.compute(i, first, count, buf.data());
                for (std::size_t t = 0; t < count; ++t) {
                    best[i].offer(buf[t], first + t);
                    best[first + t].offer(buf[t], i);
                }
            }
        }
    } else {
        detail::parallel_for(n, opts.threads, [&](std::size_t i) {
            std::array<double, width> buf{};
            for (std::size_t first = 0; first < n; first += width) {
                const std::size_t count = std::min(width, n - first);
                tile.compute(i, first, count, buf.data());
                for (std::size_t t = 0; t < count; ++t) {
                    if (first + t != i) {
                        best[i].offer(buf[t], first + t);
                    }
                }
            }
        });
    }

    std::vector<NeighborInfo> out(n);
    std::transform(best.begin(), best.end(), out.begin(), detail::finish);
    detail::reject_zero_r1(out);
    return out;
}

namespace detail {

inline std::vector<NeighborInfo> query_all(const PointSet& ps, const TwoNeighborTree& tree, unsigned threads) {
    std::vector<NeighborInfo> out(ps.size());
    parallel_for(ps.size(), threads, [&](std::size_t i) { out[i] = finish(tree.query(ps.row(i).data(), i)); });
    reject_zero_r1(out);
    return out;
}

} // namespace detail

/**
 * @brief Exact search backed by `TwoNeighborTree`.
 *
 * Produces the same distances and indices as `two_nearest_brute()` for the
 * euclidean and periodic metrics.
 */
inline std::vector<NeighborInfo> two_nearest_accelerated(const PointSet& input, const Metric& metric,
                                                         const NeighborOptions& opts = {}) {
    const PointSet ps = detail::prepare_points(input, metric, opts);
    return detail::query_all(ps, TwoNeighborTree(ps, metric), opts.threads);
}

/**
 * @brief Exact search choosing the faster of the tree and the exhaustive scan.
 *
 * The tree is probed on a few evenly spaced points; when it would still
 * evaluate a large share of the dataset per query (high intrinsic dimension
 * relative to log N), the vectorized exhaustive scan is used instead. Both
 * paths return identical results.
 */
inline std::vector<NeighborInfo> two_nearest(const PointSet& input, const Metric& metric,
                                             const NeighborOptions& opts = {}) {
    if (input.size() < 64) {
        return two_nearest_brute(input, metric, opts);
    }
    const PointSet ps = detail::prepare_points(input, metric, opts);
    TwoNeighborTree tree(ps, metric);

    constexpr std::size_t probes = 32;
    std::size_t evaluated = 0;
    for (std::size_t p = 0; p < probes; ++p) {
        std::size_t count = 0;
        const std::size_t i = p * ps.size() / probes;
        tree.query(ps.row(i).data(), i, &count);
        evaluated += count;
    }
    if (evaluated / probes > ps.size() / 16) {
        NeighborOptions inner = opts;
        inner.drop_duplicates = false;
        return two_nearest_brute(ps, metric, inner);
    }
    return detail::query_all(ps, tree, opts.threads);
}

/**
 * @brief Read the two smallest off-diagonal entries of each row.
 *
 * Any zero off-diagonal entry is a coincident pair. With `drop_duplicates`,
 * point j is removed when it sits at distance zero from a kept point with a
 * lower index.
 */
inline std::vector<NeighborInfo> two_nearest_from_matrix(const DistanceMatrix& input,
                                                         const NeighborOptions& opts = {}) {
    detail::require_three(input.size());

    auto zero_pairs = [](const DistanceMatrix& dm) {
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < dm.size(); ++i) {
            for (std::size_t j = i + 1; j < dm.size(); ++j) {
                if (dm(i, j) == 0.0) {
                    pairs.emplace_back(i, j);
                }
            }
        }
        return pairs;
    };

    DistanceMatrix dm = input;
    if (opts.drop_duplicates) {
        std::vector<std::size_t> keep;
        for (std::size_t j = 0; j < input.size(); ++j) {
            bool coincident = false;
            for (auto i : keep) {
                if (input(i, j) == 0.0) {
                    coincident = true;
                    break;
                }
            }
            if (!coincident) {
                keep.push_back(j);
            }
        }
        if (keep.size() != input.size()) {
            dm = input.subset(keep);
        }
        detail::require_three(dm.size());
    }
    if (auto pairs = zero_pairs(dm); !pairs.empty()) {
        throw DuplicatePointsError(std::move(pairs));
    }

    const std::size_t n = dm.size();
    std::vector<NeighborInfo> out(n);
    detail::parallel_for(n, opts.threads, [&](std::size_t i) {
        TwoNeighborTree::Result best;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            const double d = dm(i, j);
            if (d < best.sq1) {
                best.sq2 = best.sq1;
                best.idx2 = best.idx1;
                best.sq1 = d;
                best.idx1 = j;
            } else if (d < best.sq2) {
                best.sq2 = d;
                best.idx2 = j;
            }
        }
        out[i] = NeighborInfo{best.sq1, best.sq2, best.idx1, best.idx2};
    });
    return out;
}

} // namespace twonn

#endif
