#pragma once

#include <filesystem>

#include "rnmf/eval.hpp"
#include "rnmf/matrix.hpp"
#include "rnmf/types.hpp"

namespace rnmf {

/// Matrix CSV: no header, one matrix row per line, comma-separated values
/// serialized with 17 significant digits so a write/read round trip is
/// bit-exact. Dimensions are inferred on read.
void write_matrix_csv(const std::filesystem::path& path, const DenseMatrix& m);
DenseMatrix read_matrix_csv(const std::filesystem::path& path);

/// Mask CSV: one "row,col" pair per line.
void write_index_csv(const std::filesystem::path& path, const IndexSet& indices);
IndexSet read_index_csv(const std::filesystem::path& path);

/// Labels: one integer per line.
void write_labels_csv(const std::filesystem::path& path, const LabelVector& labels);
LabelVector read_labels_csv(const std::filesystem::path& path);

struct PgmImage {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> pixels;  // row-major, raw values (no normalization)
};

/// Reads a P2 (ASCII) or P5 (binary) PGM file; P5 with maxval > 255 uses
/// two big-endian bytes per pixel.
PgmImage read_pgm(const std::filesystem::path& path);

/// All *.pgm files of a directory, sorted by filename, one image per
/// column in row-major pixel order. All images must share one shape.
DenseMatrix load_pgm_dir(const std::filesystem::path& dir);

/// Dispatch: a directory loads as a PGM folder, anything else as matrix
/// CSV.
DenseMatrix load_matrix(const std::filesystem::path& path);

}  // namespace rnmf
