#ifndef TWONN_DETAIL_KERNELS_HPP
#define TWONN_DETAIL_KERNELS_HPP

#include <cmath>
#include <cstddef>

namespace twonn::detail {

// Both kernels accumulate over coordinates in index order. The tree search
// relies on this order to compare its lower bounds against these sums.

inline double minimum_image(double a, double b, double box) {
    const double delta = std::fabs(a - b);
    const double wrapped = box - delta;
    return wrapped < delta ? wrapped : delta;
}

inline double sq_euclidean(const double* a, const double* b, std::size_t dim) {
    double sum = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const double diff = a[k] - b[k];
        sum += diff * diff;
    }
    return sum;
}

inline double sq_periodic(const double* a, const double* b, const double* box, std::size_t dim) {
    double sum = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const double diff = minimum_image(a[k], b[k], box[k]);
        sum += diff * diff;
    }
    return sum;
}

} // namespace twonn::detail

#endif
