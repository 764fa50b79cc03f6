#include "rnmf/losses.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rnmf {

double g(double x, double sigma) {
    if (x < 0.0) throw std::invalid_argument("g: argument must be >= 0, got " + std::to_string(x));
    if (x <= sigma) return std::log1p(x);
    return std::log1p(sigma);
}

double objective(const DenseMatrix& v, const DenseMatrix& w, const DenseMatrix& h,
                 const TruncatedCauchyLoss& loss) {
    if (!(loss.gamma > 0.0)) {
        throw std::invalid_argument("objective: gamma must be positive");
    }
    if (w.cols() != h.rows() || v.rows() != w.rows() || v.cols() != h.cols()) {
        throw std::invalid_argument(
            "objective: shapes not conformable, v " + std::to_string(v.rows()) + "x" +
            std::to_string(v.cols()) + ", w " + std::to_string(w.rows()) + "x" +
            std::to_string(w.cols()) + ", h " + std::to_string(h.rows()) + "x" +
            std::to_string(h.cols()));
    }
    const DenseMatrix e = v - matmul(w, h);
    double total = 0.0;
    for (double r : e.data()) {
        const double x = (r / loss.gamma) * (r / loss.gamma);
        total += g(x, loss.sigma);
    }
    return 0.5 * total;
}

double hq_weight(double x, double sigma) {
    if (x < 0.0) {
        throw std::invalid_argument("hq_weight: argument must be >= 0, got " + std::to_string(x));
    }
    if (x <= sigma) return 1.0 / (1.0 + x);
    return 0.0;
}

double baseline_weight(double e, const WeightFunction& fn) {
    const double a = std::abs(e);
    switch (fn.kind) {
        case WeightKind::l2:
            return 1.0;
        case WeightKind::l1:
            return kTauSmooth / std::max(a, kTauSmooth);
        case WeightKind::l21_column:
            // e is the Euclidean norm of the residual column.
            return kTauSmooth / std::max(a, kTauSmooth);
        case WeightKind::huber:
            if (!(fn.huber_cutoff > 0.0)) {
                throw std::invalid_argument("baseline_weight: huber cutoff unset");
            }
            return a <= fn.huber_cutoff ? 1.0 : fn.huber_cutoff / a;
        case WeightKind::cim:
            if (!(fn.cim_sigma > 0.0)) {
                throw std::invalid_argument("baseline_weight: cim kernel width unset");
            }
            return std::exp(-(e * e) / (2.0 * fn.cim_sigma * fn.cim_sigma));
        case WeightKind::cauchy: {
            if (!(fn.cauchy_gamma > 0.0)) {
                throw std::invalid_argument("baseline_weight: cauchy gamma unset");
            }
            const double x = (e / fn.cauchy_gamma) * (e / fn.cauchy_gamma);
            return 1.0 / (1.0 + x);
        }
        case WeightKind::truncated_cauchy: {
            if (!(fn.cauchy_gamma > 0.0)) {
                throw std::invalid_argument("baseline_weight: cauchy gamma unset");
            }
            if (!(fn.trunc_sigma > 0.0)) {
                throw std::invalid_argument("baseline_weight: truncation sigma unset");
            }
            const double x = (e / fn.cauchy_gamma) * (e / fn.cauchy_gamma);
            return hq_weight(x, fn.trunc_sigma);
        }
    }
    throw std::logic_error("baseline_weight: unknown kind");
}

double conjugate_value(double y, double sigma) {
    if (y < -1.0 || y > 0.0) {
        throw std::invalid_argument("conjugate_value: y must lie in [-1, 0]");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("conjugate_value: sigma must be positive and finite");
    }
    // The inner maximizer x* = -1 - 1/y of x*y + ln(1+x) leaves [0, sigma]
    // once y exceeds -1/(1+sigma); beyond that the supremum sits at the
    // truncation point.
    const double knee = -1.0 / (1.0 + sigma);
    if (y <= knee) {
        // y = -1 gives x* = 0 and value 0; the formula below reaches it
        // continuously.
        return -y - 1.0 - std::log(-y);
    }
    return sigma * y + std::log1p(sigma);
}

double verify_conjugacy(double x, double sigma, std::size_t grid_points) {
    if (x < 0.0) throw std::invalid_argument("verify_conjugacy: x must be >= 0");
    if (grid_points < 2) throw std::invalid_argument("verify_conjugacy: grid too small");
    double best = -std::numeric_limits<double>::infinity();
    const double step = 1.0 / static_cast<double>(grid_points - 1);
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double y = std::min(0.0, -1.0 + static_cast<double>(i) * step);
        const double value = y * x - conjugate_value(y, sigma);
        if (value > best) best = value;
    }
    return best;
}

}  // namespace rnmf
