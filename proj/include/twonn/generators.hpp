#ifndef TWONN_GENERATORS_HPP
#define TWONN_GENERATORS_HPP

#include "twonn/dataset.hpp"
#include "twonn/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

/**
 * @file generators.hpp
 *
 * @brief Seeded synthetic datasets with known intrinsic dimension.
 *
 * Every generator draws from a single `std::mt19937_64` stream in a fixed
 * order, so a spec (including its seed) maps to exactly one point set.
 */

namespace twonn {

enum class GeneratorKind { hypercube, gaussian, cauchy_norm, hypersphere, swiss_roll, noisy_plane, noisy_gauss_roll };

inline constexpr std::array<std::pair<GeneratorKind, std::string_view>, 7> generator_kind_names{{
    {GeneratorKind::hypercube, "hypercube"},
    {GeneratorKind::gaussian, "gaussian"},
    {GeneratorKind::cauchy_norm, "cauchy_norm"},
    {GeneratorKind::hypersphere, "hypersphere"},
    {GeneratorKind::swiss_roll, "swiss_roll"},
    {GeneratorKind::noisy_plane, "noisy_plane"},
    {GeneratorKind::noisy_gauss_roll, "noisy_gauss_roll"},
}};

inline std::string_view to_string(GeneratorKind kind) {
    for (const auto& [k, name] : generator_kind_names) {
        if (k == kind) {
            return name;
        }
    }
    return "unknown";
}

inline std::optional<GeneratorKind> parse_generator_kind(std::string_view name) {
    for (const auto& [k, n] : generator_kind_names) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::hypercube;
    /// Intrinsic dimension; must be 2 for the swiss roll and the noisy kinds.
    std::size_t d = 2;
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    /// Periodic box on [0, 1)^d; hypercube only.
    bool pbc = false;
    /// Standard deviation of the Gaussian noise added along each extra direction.
    double noise_sigma = 0.0;
    std::size_t noise_dims = 0;
};

struct GeneratedData {
    PointSet points;
    /// Metric the dataset is meant to be analyzed with.
    Metric metric = Metric::euclidean();
};

namespace swiss_roll {
inline constexpr double t_min = 1.5 * std::numbers::pi;
inline constexpr double t_max = 4.5 * std::numbers::pi;
inline constexpr double height = 21.0;

/// Arc length along the spiral (t cos t, t sin t) from t = 0.
inline double arc_length(double t) {
    return 0.5 * (t * std::sqrt(1.0 + t * t) + std::asinh(t));
}
} // namespace swiss_roll

/// Side of the square carrying the noisy plane, [0, side)^2.
inline constexpr double noisy_plane_side = 0.5;

namespace detail {

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    double normal() { return normal_(rng_); }

    void unit_vector(double* out, std::size_t dim) {
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                out[k] = normal();
                norm2 += out[k] * out[k];
            }
        } while (!(norm2 > 0.0));
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t k = 0; k < dim; ++k) {
            out[k] *= inv;
        }
    }

    /// Area-uniform parameter on the swiss roll: density proportional to sqrt(1 + t^2).
    double roll_parameter() {
        const double envelope = std::sqrt(1.0 + swiss_roll::t_max * swiss_roll::t_max);
        while (true) {
            const double t = swiss_roll::t_min + uniform() * (swiss_roll::t_max - swiss_roll::t_min);
            if (uniform() * envelope < std::sqrt(1.0 + t * t)) {
                return t;
            }
        }
    }

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

inline bool is_noisy(GeneratorKind k) {
    return k == GeneratorKind::noisy_plane || k == GeneratorKind::noisy_gauss_roll;
}

} // namespace detail

/// Number of coordinates produced for `spec`.
inline std::size_t embedding_dim(const GeneratorSpec& spec) {
    switch (spec.kind) {
    case GeneratorKind::hypercube:
    case GeneratorKind::gaussian:
    case GeneratorKind::cauchy_norm:
        return spec.d;
    case GeneratorKind::hypersphere:
        return spec.d + 1;
    case GeneratorKind::swiss_roll:
        return 3;
    case GeneratorKind::noisy_plane:
        return 2 + spec.noise_dims;
    case GeneratorKind::noisy_gauss_roll:
        return 3 + spec.noise_dims;
    }
    return spec.d;
}

inline void validate(const GeneratorSpec& spec) {
    if (spec.n < 1) {
        throw InvalidArgument("generator needs n >= 1");
    }
    if (spec.d < 1) {
        throw InvalidArgument("generator needs d >= 1");
    }
    if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) {
        throw InvalidArgument("noise sigma must be a finite non-negative value");
    }
    const auto name = std::string(to_string(spec.kind));
    if (spec.pbc && spec.kind != GeneratorKind::hypercube) {
        throw UnsupportedCombinationError("periodic boundaries are only defined for the hypercube, not " + name);
    }
    if (!detail::is_noisy(spec.kind) && (spec.noise_sigma != 0.0 || spec.noise_dims != 0)) {
        throw UnsupportedCombinationError("noise options apply only to noisy_plane and noisy_gauss_roll, not " +
                                          name);
    }
    const bool two_dimensional = spec.kind == GeneratorKind::swiss_roll || detail::is_noisy(spec.kind);
    if (two_dimensional && spec.d != 2) {
        throw UnsupportedCombinationError(name + " has intrinsic dimension 2; got d = " + std::to_string(spec.d));
    }
}

/**
 * @brief Draw the dataset described by `spec`.
 *
 * - hypercube: uniform on [0, 1)^d, periodic metric when `pbc` is set;
 * - gaussian: standard normal in d dimensions;
 * - cauchy_norm: isotropic direction, norm t = tan(pi u / 2) so that t has
 *   density proportional to 1 / (1 + t^2);
 * - hypersphere: uniform on the unit d-sphere in d + 1 coordinates;
 * - swiss_roll: (t cos t, h, t sin t), t in [1.5 pi, 4.5 pi] drawn
 *   area-uniformly, h uniform in [0, 21];
 * - noisy_plane: uniform on [0, 0.5)^2 plus `noise_dims` Gaussian
 *   coordinates;
 * - noisy_gauss_roll: a 2-D Gaussian in roll coordinates (t centered at 3 pi
 *   with scale pi / 2 and clamped to the roll, h centered at 10.5 with scale
 *   3), mapped onto the swiss roll, plus `noise_dims` Gaussian coordinates.
 */
inline GeneratedData generate(const GeneratorSpec& spec) {
    validate(spec);
    const std::size_t dim = embedding_dim(spec);
    std::vector<double> coords(spec.n * dim, 0.0);
    detail::Sampler rng(spec.seed);

    for (std::size_t i = 0; i < spec.n; ++i) {
        double* row = coords.data() + i * dim;
        switch (spec.kind) {
        case GeneratorKind::hypercube:
            for (std::size_t k = 0; k < dim; ++k) {
                row[k] = rng.uniform();
            }
            break;
        case GeneratorKind::gaussian:
            for (std::size_t k = 0; k < dim; ++k) {
                row[k] = rng.normal();
            }
            break;
        case GeneratorKind::cauchy_norm: {
            rng.unit_vector(row, dim);
            const double radius = std::tan(0.5 * std::numbers::pi * rng.uniform());
            for (std::size_t k = 0; k < dim; ++k) {
                row[k] *= radius;
            }
            break;
        }
        case GeneratorKind::hypersphere:
            rng.unit_vector(row, dim);
            break;
        case GeneratorKind::swiss_roll: {
            const double t = rng.roll_parameter();
            row[0] = t * std::cos(t);
            row[1] = swiss_roll::height * rng.uniform();
            row[2] = t * std::sin(t);
            break;
        }
        case GeneratorKind::noisy_plane:
            row[0] = noisy_plane_side * rng.uniform();
            row[1] = noisy_plane_side * rng.uniform();
            for (std::size_t k = 2; k < dim; ++k) {
                row[k] = spec.noise_sigma * rng.normal();
            }
            break;
        case GeneratorKind::noisy_gauss_roll: {
            const double g1 = rng.normal();
            const double g2 = rng.normal();
            const double t =
                std::clamp(3.0 * std::numbers::pi + g1 * 0.5 * std::numbers::pi, swiss_roll::t_min, swiss_roll::t_max);
            const double h = 0.5 * swiss_roll::height + g2 * 3.0;
            row[0] = t * std::cos(t);
            row[1] = h;
            row[2] = t * std::sin(t);
            for (std::size_t k = 3; k < dim; ++k) {
                row[k] = spec.noise_sigma * rng.normal();
            }
            break;
        }
        }
    }

    GeneratedData out{PointSet(spec.n, dim, std::move(coords)), Metric::euclidean()};
    if (spec.pbc) {
        out.metric = Metric::periodic(std::vector<double>(dim, 1.0));
    }
    return out;
}

} // namespace twonn

#endif
