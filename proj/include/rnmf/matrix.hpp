#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace rnmf {

/// Dense real matrix, row-major flat storage. Values are immutable once a
/// matrix has been handed to a solver; mutation is single-owner.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    /// Contiguous view of row i (row-major storage).
    std::span<const double> row_span(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row_span(std::size_t i) {
        return {data_.data() + i * cols_, cols_};
    }

    std::vector<double> column(std::size_t j) const;
    void set_column(std::size_t j, std::span<const double> values);

    bool all_finite() const;
    bool all_nonneg() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Exact product a*b. Throws std::invalid_argument on inner-dimension
/// mismatch, naming both shapes.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix transpose(const DenseMatrix& a);

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);

/// Elementwise max(value, 0). Normalizes -0.0 to 0.0.
DenseMatrix project_nonneg(const DenseMatrix& a);

/// sqrt of the sum of squared entries, accumulated in row-major order.
double frobenius_norm(const DenseMatrix& a);

/// Largest eigenvalue of a square symmetric PSD matrix by power iteration
/// with a deterministic all-ones start vector. Returns 0 for the zero
/// matrix. Throws on non-square input.
double spectral_norm(const DenseMatrix& a, double tol = 1e-9, std::size_t max_iter = 100);

/// Rescales each column of w to unit Euclidean norm and returns the
/// original norms, so a coefficient matrix can be rescaled row-wise to
/// keep the product unchanged. Throws if any column is all-zero, listing
/// the offending column indices.
std::pair<DenseMatrix, std::vector<double>> normalize_columns(const DenseMatrix& w);

/// h row i multiplied by scales[i]; the companion of normalize_columns.
DenseMatrix scale_rows(const DenseMatrix& h, const std::vector<double>& scales);

/// Median of a sample; even-sized inputs average the two middle order
/// statistics. Throws on empty input.
double median(std::vector<double> values);

double mean(std::span<const double> values);

/// Population standard deviation (divides by N).
double stddev(std::span<const double> values);

}  // namespace rnmf
