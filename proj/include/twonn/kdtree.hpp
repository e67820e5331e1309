#ifndef TWONN_KDTREE_HPP
#define TWONN_KDTREE_HPP

#include "twonn/dataset.hpp"
#include "twonn/detail/kernels.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

/**
 * @file kdtree.hpp
 *
 * @brief Exact kd-tree for first/second nearest neighbor queries.
 */

namespace twonn {

/**
 * @brief Exact two-nearest-neighbor search over the points of a `PointSet`.
 *
 * Supports the euclidean and periodic metrics. Results are identical, bit for
 * bit, to an exhaustive scan that keeps the two lexicographically smallest
 * (squared distance, index) pairs:
 *
 * - candidate distances use the same kernels as the exhaustive scan;
 * - a subtree is skipped only when its box bound is strictly larger than the
 *   current second-best squared distance, so equal-distance candidates with
 *   lower indices are never missed;
 * - box bounds are accumulated in the same coordinate order as the distance
 *   kernels from per-coordinate terms that never exceed the corresponding
 *   kernel terms. Rounding is monotone, so the bound never exceeds the
 *   computed distance of any point inside the box.
 */
class TwoNeighborTree {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    /// The two lexicographically smallest (squared distance, index) pairs offered so far.
    /// The outcome does not depend on the order of the offers.
    struct Result {
        double sq1 = std::numeric_limits<double>::infinity();
        double sq2 = std::numeric_limits<double>::infinity();
        std::size_t idx1 = npos;
        std::size_t idx2 = npos;

        void offer(double d, std::size_t j) {
            if (d < sq1 || (d == sq1 && j < idx1)) {
                sq2 = sq1;
                idx2 = idx1;
                sq1 = d;
                idx1 = j;
            } else if (d < sq2 || (d == sq2 && j < idx2)) {
                sq2 = d;
                idx2 = j;
            }
        }
    };

    TwoNeighborTree(const PointSet& ps, const Metric& metric, std::size_t leaf_size = 8)
        : dim_(ps.dim()), leaf_size_(std::max<std::size_t>(leaf_size, 1)), periodic_(metric.is_periodic()),
          box_(metric.box()) {
        check_metric(ps, metric);
        order_.resize(ps.size());
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        if (!order_.empty()) {
            build(ps, 0, order_.size());
        }
        coords_.resize(ps.size() * dim_);
        for (std::size_t pos = 0; pos < order_.size(); ++pos) {
            auto r = ps.row(order_[pos]);
            std::copy(r.begin(), r.end(), coords_.begin() + static_cast<std::ptrdiff_t>(pos * dim_));
        }
    }

    /// Two nearest neighbors of `query`, excluding the point with index `self`.
    /// When `evaluated` is given, it receives the number of distances computed.
    Result query(const double* query, std::size_t self, std::size_t* evaluated = nullptr) const {
        Result res;
        std::size_t count = 0;
        if (!nodes_.empty()) {
            search(0, query, self, res, count);
        }
        if (evaluated) {
            *evaluated = count;
        }
        return res;
    }

    std::size_t node_count() const noexcept { return nodes_.size(); }

private:
    struct Node {
        std::size_t begin = 0;
        std::size_t end = 0;
        std::int64_t left = -1;
        std::int64_t right = -1;
    };

    const double* lower(std::size_t node) const { return bounds_.data() + node * 2 * dim_; }
    const double* upper(std::size_t node) const { return bounds_.data() + node * 2 * dim_ + dim_; }

    std::size_t build(const PointSet& ps, std::size_t begin, std::size_t end) {
        const std::size_t id = nodes_.size();
        nodes_.push_back(Node{begin, end, -1, -1});
        bounds_.resize(bounds_.size() + 2 * dim_);

        std::vector<double> lo(dim_, std::numeric_limits<double>::infinity());
        std::vector<double> hi(dim_, -std::numeric_limits<double>::infinity());
        for (std::size_t pos = begin; pos < end; ++pos) {
            for (std::size_t k = 0; k < dim_; ++k) {
                const double v = ps(order_[pos], k);
                lo[k] = std::min(lo[k], v);
                hi[k] = std::max(hi[k], v);
            }
        }
        std::copy(lo.begin(), lo.end(), bounds_.begin() + static_cast<std::ptrdiff_t>(id * 2 * dim_));
        std::copy(hi.begin(), hi.end(), bounds_.begin() + static_cast<std::ptrdiff_t>(id * 2 * dim_ + dim_));

        if (end - begin <= leaf_size_) {
            return id;
        }
        std::size_t split = 0;
        double widest = -1.0;
        for (std::size_t k = 0; k < dim_; ++k) {
            if (hi[k] - lo[k] > widest) {
                widest = hi[k] - lo[k];
                split = k;
            }
        }
        if (!(widest > 0.0)) {
            return id; // all points coincide
        }

        const std::size_t mid = begin + (end - begin) / 2;
        auto first = order_.begin() + static_cast<std::ptrdiff_t>(begin);
        std::nth_element(first, order_.begin() + static_cast<std::ptrdiff_t>(mid),
                         order_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                             const double va = ps(a, split), vb = ps(b, split);
                             return va < vb || (va == vb && a < b);
                         });

        const std::size_t left = build(ps, begin, mid);
        const std::size_t right = build(ps, mid, end);
        nodes_[id].left = static_cast<std::int64_t>(left);
        nodes_[id].right = static_cast<std::int64_t>(right);
        return id;
    }

    double box_bound(std::size_t node, const double* q) const {
        const double* lo = lower(node);
        const double* hi = upper(node);
        double sum = 0.0;
        if (periodic_) {
            for (std::size_t k = 0; k < dim_; ++k) {
                if (q[k] < lo[k] || q[k] > hi[k]) {
                    const double t = std::min(detail::minimum_image(q[k], lo[k], box_[k]),
                                              detail::minimum_image(q[k], hi[k], box_[k]));
                    sum += t * t;
                }
            }
        } else {
            for (std::size_t k = 0; k < dim_; ++k) {
                double t = 0.0;
                if (q[k] < lo[k]) {
                    t = q[k] - lo[k];
                } else if (q[k] > hi[k]) {
                    t = q[k] - hi[k];
                }
                sum += t * t;
            }
        }
        return sum;
    }

    double point_distance(const double* q, std::size_t pos) const {
        const double* p = coords_.data() + pos * dim_;
        return periodic_ ? detail::sq_periodic(q, p, box_.data(), dim_) : detail::sq_euclidean(q, p, dim_);
    }

    void search(std::size_t node_id, const double* q, std::size_t self, Result& res, std::size_t& count) const {
        const Node& node = nodes_[node_id];
        if (node.left < 0) {
            for (std::size_t pos = node.begin; pos < node.end; ++pos) {
                const std::size_t j = order_[pos];
                if (j != self) {
                    res.offer(point_distance(q, pos), j);
                }
            }
            count += node.end - node.begin;
            return;
        }
        const auto left = static_cast<std::size_t>(node.left);
        const auto right = static_cast<std::size_t>(node.right);
        const double bl = box_bound(left, q);
        const double br = box_bound(right, q);
        const bool left_first = bl <= br;
        const std::size_t near = left_first ? left : right;
        const std::size_t far = left_first ? right : left;
        const double near_bound = left_first ? bl : br;
        const double far_bound = left_first ? br : bl;
        if (!(near_bound > res.sq2)) {
            search(near, q, self, res, count);
        }
        if (!(far_bound > res.sq2)) {
            search(far, q, self, res, count);
        }
    }

    std::size_t dim_;
    std::size_t leaf_size_;
    bool periodic_;
    std::vector<double> box_;
    std::vector<std::size_t> order_;
    std::vector<double> coords_;
    std::vector<Node> nodes_;
    std::vector<double> bounds_;
};

} // namespace twonn

#endif
