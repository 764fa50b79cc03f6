#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "rnmf/matrix.hpp"
#include "rnmf/types.hpp"

namespace rnmf {

/// Additive Laplace(0, scale) noise on every entry, clamped at zero.
struct LaplaceNoise {
    double scale = 1.0;
};

/// Exactly round(fraction * rows) entries per column forced to low or high
/// with equal probability, at distinct positions.
struct SaltPepper {
    double fraction = 0.0;
    double low = 0.0;
    double high = 255.0;
};

/// One size x size block per column (each column a vectorized image),
/// filled with a constant. The default fill deliberately exceeds the usual
/// pixel maximum to act as an extreme outlier.
struct BlockOcclusion {
    std::size_t size = 1;
    double fill = 550.0;
};

struct CorruptionSpec {
    std::variant<LaplaceNoise, SaltPepper, BlockOcclusion> kind;
    std::uint64_t seed = 0;
};

struct CorruptionResult {
    DenseMatrix corrupted;
    IndexSet mask;  // positions that were altered (all entries for Laplace)
};

/// Applies the corruption column by column with per-column derived seeds.
/// Block occlusion needs image_shape = (height, width) with
/// height * width == v.rows(); columns are images in row-major pixel
/// order.
CorruptionResult corrupt(const DenseMatrix& v, const CorruptionSpec& spec,
                         std::optional<std::pair<std::size_t, std::size_t>> image_shape =
                             std::nullopt);

enum class OutlierAxis { x, y, both };

struct SyntheticLineSpec {
    std::size_t n_points = 180;
    double slope = 0.2;
    std::size_t n_outliers = 0;
    OutlierAxis axis = OutlierAxis::both;
    std::uint64_t seed = 0;
    double x_max = 10.0;  // inlier x-range; contamination draws from [0, 2*x_max)
};

struct LineData {
    DenseMatrix v;      // 2 x n, contaminated
    DenseMatrix clean;  // 2 x n, every column on the line
    std::vector<std::size_t> outlier_columns;
};

/// Two-dimensional points on y = slope * x with a chosen number of
/// contaminated columns. Axis x replaces the x-coordinate with uniform
/// positive noise and keeps y; axis y the reverse; axis both splits the
/// outliers half and half. All values stay non-negative.
LineData gen_line(const SyntheticLineSpec& spec);

struct PlantedFactors {
    DenseMatrix v;  // = w_true * h_true, exact rank <= r
    DenseMatrix w_true;
    DenseMatrix h_true;
};

/// Planted low-rank non-negative instance with iid uniform(0,1) factors.
PlantedFactors gen_lowrank(std::size_t m, std::size_t n, std::size_t r, std::uint64_t seed);

}  // namespace rnmf
