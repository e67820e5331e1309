#ifndef TWONN_ESTIMATOR_HPP
#define TWONN_ESTIMATOR_HPP

#include "twonn/error.hpp"
#include "twonn/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

/**
 * @file estimator.hpp
 *
 * @brief Intrinsic dimension from the ratio of second to first neighbor distance.
 *
 * Under local uniformity the ratio mu = r2 / r1 follows a Pareto law with
 * density d mu^(-d-1) on [1, inf), so -log(1 - F(mu)) = d log(mu). The
 * default estimator sorts mu, assigns the empirical cumulate F = i / N, and
 * fits a line through the origin to (log mu, -log(1 - F)) after removing the
 * largest ratios. A closed-form likelihood estimate is offered alongside.
 */

namespace twonn {

enum class Method { cdf_fit, mle };

inline std::string_view to_string(Method m) {
    return m == Method::cdf_fit ? "cdf_fit" : "mle";
}

struct EstimatorOptions {
    /// Fraction of points with the largest mu excluded from the fit.
    double discard_fraction = 0.10;
    Method method = Method::cdf_fit;
};

struct Estimate {
    double d_hat = 0.0;
    Method method = Method::cdf_fit;
    std::size_t n_total = 0;
    std::size_t n_used = 0;
    double discard_fraction = 0.0;
    /// RMS of y - d_hat * x over the fitted (finite) cumulate points.
    double rms_residual = 0.0;
};

/// Per-point ratios r2 / r1, each finite and at least 1.
class MuSample {
public:
    MuSample() = default;

    explicit MuSample(std::vector<double> values) : values_(std::move(values)) {
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i]) || values_[i] < 1.0) {
                throw InvalidArgument("mu[" + std::to_string(i) + "] = " + std::to_string(values_[i]) +
                                      " is not a finite value >= 1");
            }
        }
    }

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

/// One point of the (log mu, -log(1 - F_emp)) plane. The largest mu has y = +inf.
struct CdfPoint {
    double x = 0.0;
    double y = 0.0;

    bool fittable() const noexcept { return std::isfinite(y); }
};

struct LineFit {
    double slope = 0.0;
    double rms_residual = 0.0;
};

inline MuSample compute_mu(std::span<const NeighborInfo> neighbors) {
    std::vector<double> mu;
    mu.reserve(neighbors.size());
    for (const auto& nb : neighbors) {
        mu.push_back(nb.r2 / nb.r1);
    }
    return MuSample(std::move(mu));
}

/**
 * @brief Empirical cumulate of mu, sorted ascending.
 *
 * The i-th smallest value (1-based) gets F = i / N. The last point has F = 1
 * and is emitted with y = +inf; it can never be fitted.
 */
inline std::vector<CdfPoint> empirical_cdf(const MuSample& mu) {
    std::vector<double> sorted = mu.values();
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    std::vector<CdfPoint> pts(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = static_cast<double>(i + 1) / n;
        pts[i].x = std::log(sorted[i]);
        pts[i].y = i + 1 == sorted.size() ? std::numeric_limits<double>::infinity() : -std::log1p(-f);
    }
    return pts;
}

/**
 * @brief Least-squares slope of y = s x, i.e. sum(xy) / sum(x^2).
 *
 * Sums run sequentially in input order so the result is reproducible.
 * Throws `NoSpreadError` when every x is zero (or the input is empty) and
 * `InvalidArgument` for non-finite coordinates.
 */
inline LineFit fit_line_through_origin(std::span<const CdfPoint> pts) {
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& p : pts) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw InvalidArgument("cannot fit a non-finite cumulate point");
        }
        sxx += p.x * p.x;
        sxy += p.x * p.y;
    }
    if (!(sxx > 0.0)) {
        throw NoSpreadError();
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    double ss = 0.0;
    for (const auto& p : pts) {
        const double r = p.y - fit.slope * p.x;
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(pts.size()));
    return fit;
}

/// ceil(fraction * n), guarded against products like 0.1 * 30 landing a hair above an integer.
inline std::size_t discard_count(std::size_t n, double fraction) {
    if (!(fraction >= 0.0) || !(fraction < 1.0)) {
        throw InvalidArgument("discard fraction must lie in [0, 1), got " + std::to_string(fraction));
    }
    const double raw = fraction * static_cast<double>(n);
    return static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
}

namespace detail {

inline double rms_against(std::span<const CdfPoint> pts, double slope) {
    double ss = 0.0;
    std::size_t count = 0;
    for (const auto& p : pts) {
        if (p.fittable()) {
            const double r = p.y - slope * p.x;
            ss += r * r;
            ++count;
        }
    }
    return count ? std::sqrt(ss / static_cast<double>(count)) : 0.0;
}

} // namespace detail

/**
 * @brief Closed-form likelihood estimate d = n_used / sum(log mu).
 *
 * Removes the ceil(fraction * N) largest ratios; unlike the cumulate fit it
 * keeps the largest value when the fraction is zero.
 */
inline Estimate estimate_id_mle(const MuSample& mu, double discard_fraction) {
    const std::size_t n = mu.size();
    const std::size_t k = discard_count(n, discard_fraction);
    if (k >= n) {
        throw TooFewAfterDiscardError(n, 0);
    }
    const auto cdf = empirical_cdf(mu);
    const std::size_t used = n - k;
    double sum = 0.0;
    for (std::size_t i = 0; i < used; ++i) {
        sum += cdf[i].x;
    }
    if (!(sum > 0.0)) {
        throw NoSpreadError();
    }
    Estimate est;
    est.method = Method::mle;
    est.d_hat = static_cast<double>(used) / sum;
    est.n_total = n;
    est.n_used = used;
    est.discard_fraction = discard_fraction;
    est.rms_residual = detail::rms_against(std::span(cdf).first(used), est.d_hat);
    return est;
}

/// Cumulate fit or likelihood estimate on a precomputed mu sample.
inline Estimate estimate_from_mu(const MuSample& mu, const EstimatorOptions& opts = {}) {
    const std::size_t n = mu.size();
    if (n < 3) {
        throw TooFewPointsError(n);
    }
    if (opts.method == Method::mle) {
        const std::size_t k = discard_count(n, opts.discard_fraction);
        if (n - std::min(k, n) < 2) {
            throw TooFewAfterDiscardError(n, n - std::min(k, n));
        }
        return estimate_id_mle(mu, opts.discard_fraction);
    }

    // The F = 1 point always goes, even with a zero discard fraction.
    const std::size_t k = std::max<std::size_t>(discard_count(n, opts.discard_fraction), 1);
    const std::size_t used = k < n ? n - k : 0;
    if (used < 2) {
        throw TooFewAfterDiscardError(n, used);
    }
    const auto cdf = empirical_cdf(mu);
    const auto fit = fit_line_through_origin(std::span(cdf).first(used));

    Estimate est;
    est.method = Method::cdf_fit;
    est.d_hat = fit.slope;
    est.n_total = n;
    est.n_used = used;
    est.discard_fraction = opts.discard_fraction;
    est.rms_residual = fit.rms_residual;
    return est;
}

inline Estimate estimate_id(std::span<const NeighborInfo> neighbors, const EstimatorOptions& opts = {}) {
    return estimate_from_mu(compute_mu(neighbors), opts);
}

/// Which cumulate points `estimate_from_mu` fits; the rest are discarded.
inline std::vector<bool> kept_mask(std::size_t n, const Estimate& est) {
    std::vector<bool> mask(n, false);
    std::fill_n(mask.begin(), std::min(est.n_used, n), true);
    return mask;
}

/// Volume of the unit ball in d dimensions, pi^(d/2) / Gamma(d/2 + 1).
inline double unit_ball_volume(int d) {
    if (d < 1) {
        throw InvalidArgument("ball dimension must be positive");
    }
    const double half = 0.5 * static_cast<double>(d);
    return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

/**
 * Shell volumes around a point: dv1 = w_d r1^d, dv2 = w_d (r2^d - r1^d),
 * and their ratio R = dv2 / dv1 = mu^d - 1. For a homogeneous process of
 * intensity rho both volumes are Exponential(rho) and R has density 1/(1+R)^2.
 */
struct ShellSample {
    double delta_v1 = 0.0;
    double delta_v2 = 0.0;
    double ratio = 0.0;
};

inline std::vector<ShellSample> shell_samples(std::span<const NeighborInfo> neighbors, int d) {
    const double omega = unit_ball_volume(d);
    std::vector<ShellSample> out;
    out.reserve(neighbors.size());
    for (const auto& nb : neighbors) {
        const double v1 = std::pow(nb.r1, d);
        const double v2 = std::pow(nb.r2, d);
        ShellSample s;
        s.delta_v1 = omega * v1;
        s.delta_v2 = omega * (v2 - v1);
        s.ratio = s.delta_v2 / s.delta_v1;
        out.push_back(s);
    }
    return out;
}

} // namespace twonn

#endif
