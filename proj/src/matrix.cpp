#include "rnmf/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rnmf {

namespace {

std::string shape_of(const DenseMatrix& a) {
    return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument(std::string(op) + ": shape mismatch " + shape_of(a) +
                                    " vs " + shape_of(b));
    }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    DenseMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) {
            throw std::invalid_argument("from_rows: ragged initializer, row " + std::to_string(i) +
                                        " has " + std::to_string(row.size()) + " entries, expected " +
                                        std::to_string(c));
        }
        std::size_t j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

std::vector<double> DenseMatrix::column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

void DenseMatrix::set_column(std::size_t j, std::span<const double> values) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

bool DenseMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

bool DenseMatrix::all_nonneg() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return v >= 0.0; });
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul: inner dimensions differ, " + shape_of(a) + " * " +
                                    shape_of(b));
    }
    DenseMatrix out(a.rows(), b.cols(), 0.0);
    // i-k-j order: streams through b and out rows; accumulation order is
    // fixed so results are bit-reproducible.
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "operator+");
    DenseMatrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
    return out;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "operator-");
    DenseMatrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= b.data()[i];
    return out;
}

DenseMatrix project_nonneg(const DenseMatrix& a) {
    DenseMatrix out = a;
    for (double& v : out.data()) v = (v > 0.0) ? v : 0.0;
    return out;
}

double frobenius_norm(const DenseMatrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

double spectral_norm(const DenseMatrix& a, double tol, std::size_t max_iter) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("spectral_norm: matrix must be square, got " + shape_of(a));
    }
    const std::size_t n = a.rows();
    if (n == 0) return 0.0;

    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> av(n, 0.0);
    double lambda = 0.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += a(i, j) * v[j];
            av[i] = s;
        }
        double norm = 0.0;
        for (double x : av) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        double rayleigh = 0.0;
        for (std::size_t i = 0; i < n; ++i) rayleigh += v[i] * av[i];
        for (std::size_t i = 0; i < n; ++i) v[i] = av[i] / norm;
        if (it > 0 && std::abs(rayleigh - lambda) <= tol * std::abs(rayleigh)) {
            lambda = rayleigh;
            break;
        }
        lambda = rayleigh;
    }
    return lambda;
}

std::pair<DenseMatrix, std::vector<double>> normalize_columns(const DenseMatrix& w) {
    std::vector<double> scales(w.cols(), 0.0);
    std::vector<std::size_t> zero_cols;
    for (std::size_t j = 0; j < w.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < w.rows(); ++i) s += w(i, j) * w(i, j);
        scales[j] = std::sqrt(s);
        if (scales[j] == 0.0) zero_cols.push_back(j);
    }
    if (!zero_cols.empty()) {
        std::ostringstream msg;
        msg << "normalize_columns: zero column(s) at index";
        for (std::size_t j : zero_cols) msg << " " << j;
        throw std::invalid_argument(msg.str());
    }
    DenseMatrix out = w;
    for (std::size_t j = 0; j < w.cols(); ++j)
        for (std::size_t i = 0; i < w.rows(); ++i) out(i, j) /= scales[j];
    return {std::move(out), std::move(scales)};
}

DenseMatrix scale_rows(const DenseMatrix& h, const std::vector<double>& scales) {
    if (scales.size() != h.rows()) {
        throw std::invalid_argument("scale_rows: " + std::to_string(scales.size()) +
                                    " scales for " + std::to_string(h.rows()) + " rows");
    }
    DenseMatrix out = h;
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j) out(i, j) *= scales[i];
    return out;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty sample");
    const std::size_t n = values.size();
    const std::size_t mid = n / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double hi = values[mid];
    if (n % 2 == 1) return hi;
    double lo = *std::max_element(values.begin(), values.begin() + mid);
    return 0.5 * (lo + hi);
}

double mean(std::span<const double> values) {
    if (values.empty()) return 0.0;
    double s = std::accumulate(values.begin(), values.end(), 0.0);
    return s / static_cast<double>(values.size());
}

double stddev(std::span<const double> values) {
    if (values.empty()) return 0.0;
    const double m = mean(values);
    double s = 0.0;
    for (double v : values) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(values.size()));
}

}  // namespace rnmf
