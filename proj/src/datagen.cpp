#include "rnmf/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rnmf/rng.hpp"

namespace rnmf {

namespace {

// Distinct positions via partial Fisher-Yates over [0, n).
std::vector<std::size_t> sample_distinct(Rng& rng, std::size_t n, std::size_t k) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.below(n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

void corrupt_laplace(const DenseMatrix& v, const LaplaceNoise& p, std::uint64_t seed,
                     CorruptionResult& out) {
    if (!(p.scale > 0.0)) throw std::invalid_argument("corrupt: laplace scale must be positive");
    for (std::size_t j = 0; j < v.cols(); ++j) {
        Rng rng(Rng::derive(seed, j));
        for (std::size_t i = 0; i < v.rows(); ++i) {
            const double noisy = v(i, j) + rng.laplace(p.scale);
            out.corrupted(i, j) = noisy > 0.0 ? noisy : 0.0;
            out.mask.emplace_back(i, j);
        }
    }
}

void corrupt_salt_pepper(const DenseMatrix& v, const SaltPepper& p, std::uint64_t seed,
                         CorruptionResult& out) {
    if (p.fraction < 0.0 || p.fraction > 1.0) {
        throw std::invalid_argument("corrupt: salt-pepper fraction must lie in [0, 1]");
    }
    const auto k = static_cast<std::size_t>(
        std::llround(p.fraction * static_cast<double>(v.rows())));
    for (std::size_t j = 0; j < v.cols(); ++j) {
        Rng rng(Rng::derive(seed, j));
        std::vector<std::size_t> hit = sample_distinct(rng, v.rows(), k);
        std::sort(hit.begin(), hit.end());
        for (std::size_t i : hit) {
            out.corrupted(i, j) = (rng.next_u64() & 1u) ? p.high : p.low;
            out.mask.emplace_back(i, j);
        }
    }
}

void corrupt_block(const DenseMatrix& v, const BlockOcclusion& p, std::uint64_t seed,
                   std::optional<std::pair<std::size_t, std::size_t>> image_shape,
                   CorruptionResult& out) {
    if (!image_shape) {
        throw std::invalid_argument("corrupt: block occlusion requires an image shape");
    }
    const auto [height, width] = *image_shape;
    if (height * width != v.rows()) {
        throw std::invalid_argument("corrupt: image shape " + std::to_string(height) + "x" +
                                    std::to_string(width) + " does not match " +
                                    std::to_string(v.rows()) + " rows");
    }
    if (p.size == 0 || p.size > std::min(height, width)) {
        throw std::invalid_argument("corrupt: block size " + std::to_string(p.size) +
                                    " exceeds image " + std::to_string(height) + "x" +
                                    std::to_string(width));
    }
    for (std::size_t j = 0; j < v.cols(); ++j) {
        Rng rng(Rng::derive(seed, j));
        const std::size_t r0 = rng.below(height - p.size + 1);
        const std::size_t c0 = rng.below(width - p.size + 1);
        for (std::size_t dr = 0; dr < p.size; ++dr) {
            for (std::size_t dc = 0; dc < p.size; ++dc) {
                const std::size_t row = (r0 + dr) * width + (c0 + dc);
                out.corrupted(row, j) = p.fill;
                out.mask.emplace_back(row, j);
            }
        }
    }
}

}  // namespace

CorruptionResult corrupt(const DenseMatrix& v, const CorruptionSpec& spec,
                         std::optional<std::pair<std::size_t, std::size_t>> image_shape) {
    CorruptionResult out;
    out.corrupted = v;
    if (const auto* lap = std::get_if<LaplaceNoise>(&spec.kind)) {
        corrupt_laplace(v, *lap, spec.seed, out);
    } else if (const auto* sp = std::get_if<SaltPepper>(&spec.kind)) {
        corrupt_salt_pepper(v, *sp, spec.seed, out);
    } else {
        corrupt_block(v, std::get<BlockOcclusion>(spec.kind), spec.seed, image_shape, out);
    }
    std::sort(out.mask.begin(), out.mask.end());
    return out;
}

LineData gen_line(const SyntheticLineSpec& spec) {
    if (spec.n_outliers > spec.n_points) {
        throw std::invalid_argument("gen_line: more outliers than points");
    }
    if (!(spec.slope >= 0.0) || !(spec.x_max > 0.0)) {
        throw std::invalid_argument("gen_line: slope must be >= 0 and x_max > 0");
    }
    LineData data;
    data.clean = DenseMatrix(2, spec.n_points);
    Rng rng(spec.seed);
    for (std::size_t j = 0; j < spec.n_points; ++j) {
        const double x = rng.uniform(0.0, spec.x_max);
        data.clean(0, j) = x;
        data.clean(1, j) = spec.slope * x;
    }
    data.v = data.clean;
    data.outlier_columns = sample_distinct(rng, spec.n_points, spec.n_outliers);

    // Axis "both" follows the heaviest synthetic protocol: the first half
    // of the selected points gets x-noise, the rest y-noise.
    const std::size_t n_x = spec.axis == OutlierAxis::x   ? spec.n_outliers
                            : spec.axis == OutlierAxis::y ? 0
                                                          : spec.n_outliers / 2;
    for (std::size_t idx = 0; idx < spec.n_outliers; ++idx) {
        const std::size_t j = data.outlier_columns[idx];
        const double noise = rng.uniform(0.0, 2.0 * spec.x_max);
        data.v(idx < n_x ? 0 : 1, j) = noise;
    }
    std::sort(data.outlier_columns.begin(), data.outlier_columns.end());
    return data;
}

PlantedFactors gen_lowrank(std::size_t m, std::size_t n, std::size_t r, std::uint64_t seed) {
    if (r == 0 || r > std::min(m, n)) {
        throw std::invalid_argument("gen_lowrank: rank " + std::to_string(r) +
                                    " outside [1, min(m, n)]");
    }
    Rng rng(seed);
    PlantedFactors out;
    out.w_true = DenseMatrix(m, r);
    for (double& x : out.w_true.data()) x = rng.uniform01();
    out.h_true = DenseMatrix(r, n);
    for (double& x : out.h_true.data()) x = rng.uniform01();
    out.v = matmul(out.w_true, out.h_true);
    return out;
}

}  // namespace rnmf
