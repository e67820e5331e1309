#ifndef TWONN_DATASET_HPP
#define TWONN_DATASET_HPP

#include "twonn/detail/kernels.hpp"
#include "twonn/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

/**
 * @file dataset.hpp
 *
 * @brief Point sets, metrics and dense distance matrices.
 */

namespace twonn {

/**
 * @brief An immutable N x D table of finite coordinates, stored row-major.
 *
 * Duplicate rows are allowed here; they are rejected by the neighbor search,
 * where a zero first-neighbor distance makes the ratio r2/r1 undefined.
 */
class PointSet {
public:
    PointSet() = default;

    /**
     * @param n Number of points.
     * @param dim Number of coordinates per point.
     * @param coords Row-major coordinates, of length `n * dim`.
     *
     * Throws `NonFiniteError` for NaN/Inf entries. The minimum-size rule for
     * estimation is enforced by `validate_pointset()` and the estimators, not
     * here, so that small subsets can still be represented.
     */
    PointSet(std::size_t n, std::size_t dim, std::vector<double> coords)
        : n_(n), dim_(dim), coords_(std::move(coords)) {
        if (coords_.size() != n_ * dim_) {
            throw InvalidArgument("coordinate buffer has " + std::to_string(coords_.size()) +
                                  " values, expected " + std::to_string(n_ * dim_));
        }
        if (dim_ == 0 && n_ > 0) {
            throw InvalidArgument("points must have at least one coordinate");
        }
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t k = 0; k < dim_; ++k) {
                if (!std::isfinite(coords_[i * dim_ + k])) {
                    throw NonFiniteError(i, k);
                }
            }
        }
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t dim() const noexcept { return dim_; }

    std::span<const double> row(std::size_t i) const noexcept {
        return {coords_.data() + i * dim_, dim_};
    }
    double operator()(std::size_t i, std::size_t k) const noexcept { return coords_[i * dim_ + k]; }
    const std::vector<double>& coords() const noexcept { return coords_; }

    /// Rows `indices` in the given order.
    PointSet subset(std::span<const std::size_t> indices) const {
        std::vector<double> out;
        out.reserve(indices.size() * dim_);
        for (auto i : indices) {
            auto r = row(i);
            out.insert(out.end(), r.begin(), r.end());
        }
        return PointSet(indices.size(), dim_, std::move(out));
    }

    /// Every coordinate multiplied by `factor`.
    PointSet scaled(double factor) const {
        std::vector<double> out(coords_);
        for (auto& v : out) {
            v *= factor;
        }
        return PointSet(n_, dim_, std::move(out));
    }

    friend bool operator==(const PointSet&, const PointSet&) = default;

private:
    std::size_t n_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> coords_;
};

/**
 * @brief Validate a raw table into a `PointSet` usable for estimation.
 *
 * Throws `RaggedRowsError`, `NonFiniteError` (with its position) or
 * `TooFewPointsError` when there are fewer than 3 rows.
 */
inline PointSet validate_pointset(const std::vector<std::vector<double>>& table) {
    const std::size_t n = table.size();
    const std::size_t dim = n ? table.front().size() : 0;
    std::vector<double> coords;
    coords.reserve(n * dim);
    for (std::size_t i = 0; i < n; ++i) {
        if (table[i].size() != dim) {
            throw RaggedRowsError(i, dim, table[i].size());
        }
        coords.insert(coords.end(), table[i].begin(), table[i].end());
    }
    PointSet ps(n, dim, std::move(coords));
    if (n < 3) {
        throw TooFewPointsError(n);
    }
    return ps;
}

/**
 * @brief How distances between points are measured.
 *
 * `periodic` applies the minimum-image convention per coordinate inside a box
 * with the given edge lengths. `precomputed` marks data that arrives as a
 * distance matrix; it cannot be evaluated on coordinates.
 */
class Metric {
public:
    enum class Kind { euclidean, periodic, precomputed };

    static Metric euclidean() { return Metric(Kind::euclidean, {}); }
    static Metric precomputed() { return Metric(Kind::precomputed, {}); }
    static Metric periodic(std::vector<double> box) {
        if (box.empty()) {
            throw InvalidMetricError("periodic metric needs at least one box length");
        }
        for (double l : box) {
            if (!(l > 0.0) || !std::isfinite(l)) {
                throw InvalidMetricError("periodic box lengths must be positive and finite");
            }
        }
        return Metric(Kind::periodic, std::move(box));
    }

    Kind kind() const noexcept { return kind_; }
    bool is_periodic() const noexcept { return kind_ == Kind::periodic; }
    const std::vector<double>& box() const noexcept { return box_; }

    friend bool operator==(const Metric&, const Metric&) = default;

private:
    Metric(Kind kind, std::vector<double> box) : kind_(kind), box_(std::move(box)) {}

    Kind kind_ = Kind::euclidean;
    std::vector<double> box_;
};

/**
 * @brief Check that `metric` can be evaluated on `ps`.
 *
 * Periodic metrics need one box length per coordinate and every coordinate
 * in [0, L). Points are never wrapped silently.
 */
inline void check_metric(const PointSet& ps, const Metric& metric) {
    switch (metric.kind()) {
    case Metric::Kind::euclidean:
        return;
    case Metric::Kind::precomputed:
        throw InvalidMetricError("precomputed metric requires a distance matrix, not coordinates");
    case Metric::Kind::periodic:
        break;
    }
    const auto& box = metric.box();
    if (box.size() != ps.dim()) {
        throw DimensionMismatchError(box.size(), ps.dim());
    }
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t k = 0; k < ps.dim(); ++k) {
            const double v = ps(i, k);
            if (v < 0.0 || v >= box[k]) {
                throw PointOutsideBoxError(i, k);
            }
        }
    }
}

/// Squared distance; the neighbor search works on these and takes the root at output.
inline double squared_distance(std::span<const double> a, std::span<const double> b, const Metric& metric) {
    if (a.size() != b.size()) {
        throw DimensionMismatchError(a.size(), b.size());
    }
    switch (metric.kind()) {
    case Metric::Kind::euclidean:
        return detail::sq_euclidean(a.data(), b.data(), a.size());
    case Metric::Kind::periodic:
        if (metric.box().size() != a.size()) {
            throw DimensionMismatchError(metric.box().size(), a.size());
        }
        return detail::sq_periodic(a.data(), b.data(), metric.box().data(), a.size());
    case Metric::Kind::precomputed:
        break;
    }
    throw InvalidMetricError("precomputed metric cannot be evaluated on coordinates");
}

inline double distance(std::span<const double> a, std::span<const double> b, const Metric& metric) {
    return std::sqrt(squared_distance(a, b, metric));
}

/**
 * @brief A dense, symmetric N x N matrix of non-negative distances.
 *
 * Construction validates the matrix: finite non-negative entries, zero
 * diagonal, and symmetry within a relative tolerance of 1e-9. Pairs that are
 * asymmetric within tolerance are replaced by their average.
 */
class DistanceMatrix {
public:
    static constexpr double symmetry_tolerance = 1e-9;

    DistanceMatrix() = default;

    DistanceMatrix(std::size_t n, std::vector<double> entries) : n_(n), d_(std::move(entries)) {
        if (d_.size() != n_ * n_) {
            throw NotSquareError("distance matrix has " + std::to_string(d_.size()) + " entries, expected " +
                                 std::to_string(n_ * n_));
        }
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                const double v = d_[i * n_ + j];
                if (!std::isfinite(v)) {
                    throw NonFiniteError(i, j);
                }
                if (v < 0.0) {
                    throw NegativeDistanceError(i, j);
                }
            }
            if (d_[i * n_ + i] != 0.0) {
                throw InvalidDiagonalError(i);
            }
        }
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = i + 1; j < n_; ++j) {
                double& a = d_[i * n_ + j];
                double& b = d_[j * n_ + i];
                if (a == b) {
                    continue;
                }
                if (std::fabs(a - b) > symmetry_tolerance * std::max(a, b)) {
                    throw AsymmetricMatrixError(i, j);
                }
                const double mean = 0.5 * (a + b);
                a = mean;
                b = mean;
            }
        }
    }

    /// From a table of rows; throws `NotSquareError` unless every row has N entries.
    static DistanceMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        const std::size_t n = rows.size();
        std::vector<double> flat;
        flat.reserve(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != n) {
                throw NotSquareError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                                     " entries in a " + std::to_string(n) + "-row matrix");
            }
            flat.insert(flat.end(), rows[i].begin(), rows[i].end());
        }
        return DistanceMatrix(n, std::move(flat));
    }

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return d_[i * n_ + j]; }
    std::span<const double> row(std::size_t i) const noexcept { return {d_.data() + i * n_, n_}; }

    DistanceMatrix subset(std::span<const std::size_t> indices) const {
        const std::size_t m = indices.size();
        std::vector<double> out(m * m);
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < m; ++b) {
                out[a * m + b] = (*this)(indices[a], indices[b]);
            }
        }
        return DistanceMatrix(m, std::move(out));
    }

private:
    std::size_t n_ = 0;
    std::vector<double> d_;
};

/// Full pairwise matrix of `ps` under a coordinate metric.
inline DistanceMatrix pairwise_distances(const PointSet& ps, const Metric& metric) {
    check_metric(ps, metric);
    const std::size_t n = ps.size();
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = distance(ps.row(i), ps.row(j), metric);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    return DistanceMatrix(n, std::move(d));
}

/**
 * @brief Groups of bitwise-identical rows.
 *
 * Returns every coincident pair (i, j), i < j, sorted. Runs in O(N log N)
 * comparisons by sorting row indices lexicographically.
 */
inline std::vector<std::pair<std::size_t, std::size_t>> duplicate_pairs(const PointSet& ps) {
    std::vector<std::size_t> order(ps.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto less = [&](std::size_t a, std::size_t b) {
        auto ra = ps.row(a), rb = ps.row(b);
        return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    };
    std::stable_sort(order.begin(), order.end(), less);

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::size_t start = 0;
    while (start < order.size()) {
        std::size_t stop = start + 1;
        while (stop < order.size() && !less(order[start], order[stop])) {
            ++stop;
        }
        for (std::size_t a = start; a < stop; ++a) {
            for (std::size_t b = a + 1; b < stop; ++b) {
                pairs.emplace_back(std::min(order[a], order[b]), std::max(order[a], order[b]));
            }
        }
        start = stop;
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

/// Keeps the first occurrence of each group of identical rows, preserving order.
inline PointSet remove_duplicate_rows(const PointSet& ps) {
    const auto pairs = duplicate_pairs(ps);
    if (pairs.empty()) {
        return ps;
    }
    std::vector<bool> drop(ps.size(), false);
    for (const auto& [first, second] : pairs) {
        drop[second] = true;
    }
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (!drop[i]) {
            keep.push_back(i);
        }
    }
    return ps.subset(keep);
}

} // namespace twonn

#endif
