#include "rnmf/wnls.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rnmf {

namespace {

void validate(const WnlsProblem& p) {
    const std::size_t m = p.w.rows();
    const std::size_t r = p.w.cols();
    if (p.d.size() != m || p.v.size() != m) {
        throw std::invalid_argument("wnls: weight/target length " + std::to_string(p.d.size()) +
                                    "/" + std::to_string(p.v.size()) + " does not match basis rows " +
                                    std::to_string(m));
    }
    if (p.h0.size() != r) {
        throw std::invalid_argument("wnls: warm start length " + std::to_string(p.h0.size()) +
                                    " does not match basis columns " + std::to_string(r));
    }
    for (double di : p.d) {
        if (!(di >= 0.0) || !std::isfinite(di)) {
            throw std::invalid_argument("wnls: weights must be finite and >= 0");
        }
    }
}

// Normal-equation data: A = W^T D W (r x r, symmetric PSD), b = W^T D v.
// Forming them once makes every OGM step O(r^2).
void form_normal(const WnlsProblem& p, DenseMatrix& a, std::vector<double>& b) {
    const std::size_t m = p.w.rows();
    const std::size_t r = p.w.cols();
    a = DenseMatrix(r, r, 0.0);
    b.assign(r, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double di = p.d[i];
        if (di == 0.0) continue;
        const auto wi = p.w.row_span(i);
        for (std::size_t k = 0; k < r; ++k) {
            const double dw = di * wi[k];
            b[k] += dw * p.v[i];
            for (std::size_t l = k; l < r; ++l) a(k, l) += dw * wi[l];
        }
    }
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = 0; l < k; ++l) a(k, l) = a(l, k);
}

void apply(const DenseMatrix& a, std::span<const double> x, std::vector<double>& out) {
    const std::size_t r = a.rows();
    for (std::size_t i = 0; i < r; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < r; ++j) s += a(i, j) * x[j];
        out[i] = s;
    }
}

double pg_norm(std::span<const double> h, std::span<const double> grad) {
    double s = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double pg = h[i] > 0.0 ? grad[i] : std::min(0.0, grad[i]);
        s += pg * pg;
    }
    return std::sqrt(s);
}

// Quadratic objective up to the constant (1/2) v^T D v, which cancels in
// every comparison made here.
double quad_objective(const DenseMatrix& a, std::span<const double> b, std::span<const double> h,
                      std::vector<double>& scratch) {
    apply(a, h, scratch);
    double s = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) s += (0.5 * scratch[i] - b[i]) * h[i];
    return s;
}

}  // namespace

std::vector<double> wnls_gradient(const WnlsProblem& p, std::span<const double> z) {
    validate(p);
    const std::size_t r = p.w.cols();
    if (z.size() != r) {
        throw std::invalid_argument("wnls_gradient: point length " + std::to_string(z.size()) +
                                    " does not match basis columns " + std::to_string(r));
    }
    const std::size_t m = p.w.rows();
    std::vector<double> grad(r, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto wi = p.w.row_span(i);
        double fit = 0.0;
        for (std::size_t k = 0; k < r; ++k) fit += wi[k] * z[k];
        const double coeff = p.d[i] * (fit - p.v[i]);
        if (coeff == 0.0) continue;
        for (std::size_t k = 0; k < r; ++k) grad[k] += coeff * wi[k];
    }
    return grad;
}

std::vector<double> projected_gradient(const WnlsProblem& p, std::span<const double> h) {
    for (double hi : h) {
        if (hi < 0.0) throw std::invalid_argument("projected_gradient: point must be >= 0");
    }
    std::vector<double> grad = wnls_gradient(p, h);
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i] == 0.0) grad[i] = std::min(0.0, grad[i]);
    }
    return grad;
}

std::pair<std::vector<double>, OgmTrace> solve_wnls(const WnlsProblem& p, double eps1,
                                                    std::size_t max_iter) {
    validate(p);
    if (!(eps1 > 0.0)) throw std::invalid_argument("solve_wnls: eps1 must be positive");
    for (double hi : p.h0) {
        if (hi < 0.0) throw std::invalid_argument("solve_wnls: warm start must be >= 0");
    }
    const std::size_t r = p.w.cols();

    OgmTrace trace;
    std::vector<double> h(p.h0.begin(), p.h0.end());

    DenseMatrix a;
    std::vector<double> b;
    form_normal(p, a, b);

    trace.lipschitz = spectral_norm(a);
    if (trace.lipschitz <= 0.0) {
        trace.status = WnlsStatus::zero_lipschitz;
        return {std::move(h), trace};
    }
    const double lipschitz = trace.lipschitz;

    std::vector<double> scratch(r, 0.0);
    std::vector<double> grad(r, 0.0);

    auto gradient_at = [&](std::span<const double> x) {
        apply(a, x, grad);
        for (std::size_t i = 0; i < r; ++i) grad[i] -= b[i];
    };

    gradient_at(h);
    trace.initial_pg_norm = pg_norm(h, grad);
    if (trace.initial_pg_norm == 0.0) {
        trace.status = WnlsStatus::stationary_start;
        trace.final_pg_norm = 0.0;
        return {std::move(h), trace};
    }
    const double threshold = std::max(eps1, 1e-3) * trace.initial_pg_norm;

    std::vector<double> z = h;
    std::vector<double> h_next(r, 0.0);
    std::vector<double> best = h;
    double best_obj = quad_objective(a, b, h, scratch);
    double alpha = 1.0;

    trace.status = WnlsStatus::max_iterations;
    for (std::size_t k = 0; k < max_iter; ++k) {
        gradient_at(z);
        for (std::size_t i = 0; i < r; ++i) {
            const double step = z[i] - grad[i] / lipschitz;
            h_next[i] = step > 0.0 ? step : 0.0;
        }
        const double alpha_next = 0.5 * (1.0 + std::sqrt(4.0 * alpha * alpha + 1.0));
        const double momentum = (alpha - 1.0) / alpha_next;
        for (std::size_t i = 0; i < r; ++i) {
            z[i] = h_next[i] + momentum * (h_next[i] - h[i]);
        }
        h.swap(h_next);
        alpha = alpha_next;
        ++trace.iterations;

        const double obj = quad_objective(a, b, h, scratch);
        if (obj < best_obj) {
            best_obj = obj;
            best = h;
        }
        gradient_at(h);
        trace.final_pg_norm = pg_norm(h, grad);
        if (trace.final_pg_norm <= threshold) {
            trace.status = WnlsStatus::converged;
            break;
        }
    }
    return {std::move(best), trace};
}

}  // namespace rnmf
