#ifndef TWONN_DETAIL_BRUTE_HPP
#define TWONN_DETAIL_BRUTE_HPP

#include "twonn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace twonn::detail {

// Wider vector units only change how many targets are processed at once;
// each lane performs the same scalar operations in the same order.
#if defined(__GNUC__) && defined(__x86_64__) && !defined(__clang__)
__attribute__((target_clones("avx2", "default")))
#endif
inline void tile_kernel(const double* q, const double* cols, std::size_t stride, std::size_t dim, std::size_t count,
                        const double* box, double* out) {
    std::fill(out, out + count, 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
        const double qk = q[k];
        const double* col = cols + k * stride;
        if (box) {
            const double len = box[k];
            for (std::size_t t = 0; t < count; ++t) {
                const double delta = std::fabs(qk - col[t]);
                const double wrapped = len - delta;
                const double diff = wrapped < delta ? wrapped : delta;
                out[t] += diff * diff;
            }
        } else {
            for (std::size_t t = 0; t < count; ++t) {
                const double diff = qk - col[t];
                out[t] += diff * diff;
            }
        }
    }
}

/**
 * Squared distances from one point to a run of others, over a
 * coordinate-major copy of the data. Each distance is accumulated in the
 * same order and with the same operations as `sq_euclidean` /
 * `sq_periodic`, so the values are bitwise identical to those kernels; the
 * loop over targets vectorizes without reassociating any sum.
 */
class DistanceTile {
public:
    static constexpr std::size_t width = 256;

    DistanceTile(const PointSet& ps, const Metric& metric)
        : n_(ps.size()), dim_(ps.dim()), periodic_(metric.is_periodic()), box_(metric.box()),
          rows_(ps.coords()), cols_(ps.size() * ps.dim()) {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t k = 0; k < dim_; ++k) {
                cols_[k * n_ + i] = rows_[i * dim_ + k];
            }
        }
    }

    std::size_t size() const noexcept { return n_; }

    /// out[t] = squared distance between point i and point first + t, for t < count <= width.
    void compute(std::size_t i, std::size_t first, std::size_t count, double* out) const {
        tile_kernel(rows_.data() + i * dim_, cols_.data() + first, n_, dim_, count, periodic_ ? box_.data() : nullptr,
                    out);
    }

private:
    std::size_t n_;
    std::size_t dim_;
    bool periodic_;
    std::vector<double> box_;
    std::vector<double> rows_;
    std::vector<double> cols_;
};

} // namespace twonn::detail

#endif
