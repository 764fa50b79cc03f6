#include "rnmf/hq_cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "alternation.hpp"
#include "rnmf/losses.hpp"

namespace rnmf {

namespace {

constexpr double kGammaMinFloor = 1e-12;

std::vector<double> magnitudes(const DenseMatrix& e) {
    std::vector<double> out;
    out.reserve(e.size());
    for (double x : e.data()) out.push_back(std::abs(x));
    return out;
}

double resolve_gamma_min(const DenseMatrix& v, const SolverConfig& cfg) {
    if (cfg.gamma_min > 0.0) return cfg.gamma_min;
    if (v.empty()) return kGammaMinFloor;
    const double med = median(magnitudes(v));
    return std::max(1e-4 * med, kGammaMinFloor);
}

// Per-iteration state for the truncated-Cauchy weight policy. One scale and
// one outlier set govern a whole outer iteration, so both weight refreshes
// and both objective evaluations of a step are mutually consistent.
class HqPolicy {
public:
    HqPolicy(const SolverConfig& cfg, double gamma_min) : cfg_(cfg), gamma_min_(gamma_min) {}

    void begin_iteration(const DenseMatrix& e, std::size_t t) {
        if (t == 0) {
            // Start the scale at the residual root mean square (one Nagy
            // step from an arbitrarily large scale lands there). It sits
            // well above the median on heavy-tailed residuals, so the
            // first sweeps see a smooth, nearly quadratic loss; the
            // per-iteration updates anneal it down from there.
            double sq = 0.0;
            for (double r : e.data()) sq += r * r;
            const double rms = std::sqrt(sq / static_cast<double>(e.size()));
            gamma_ = std::max(rms, gamma_min_);
            if (cfg_.scale_mode == ScaleMode::fixed && cfg_.fixed_gamma > 0.0) {
                gamma_ = cfg_.fixed_gamma;
            }
        } else if (cfg_.scale_mode == ScaleMode::nagy) {
            // One fixed-point step per outer iteration, with the downward
            // rate capped at 5%: the scale anneals alongside the factors
            // instead of being driven to the fixed point of each
            // intermediate residual, which degenerates to the floor
            // whenever at least half the entries fit exactly and freezes
            // the alternation before the factors settle.
            const double next = estimate_scale_nagy(e, gamma_, 1e-6, 1, gamma_min_);
            gamma_ = std::max(next, 0.95 * gamma_);
        }
        switch (cfg_.truncation_mode) {
            case TruncationMode::robust_stat:
                if (t >= cfg_.burn_in) {
                    OutlierScan scan = detect_outliers_scan(e);
                    outliers_ = std::move(scan.indices);
                    const double ratio = scan.threshold / gamma_;
                    plateau_sigma_ = ratio * ratio;
                } else {
                    outliers_.clear();
                    plateau_sigma_ = kUnboundedSigma;
                }
                rebuild_mask(e.rows(), e.cols());
                break;
            case TruncationMode::explicit_sigma: {
                // Thresholding happens per weight evaluation; the set below
                // records where the step's starting residual sits on the
                // plateau, with the same predicate the weight fill uses.
                plateau_sigma_ = cfg_.sigma;
                outliers_.clear();
                for (std::size_t i = 0; i < e.rows(); ++i) {
                    for (std::size_t j = 0; j < e.cols(); ++j) {
                        const double x = (e(i, j) / gamma_) * (e(i, j) / gamma_);
                        if (hq_weight(x, cfg_.sigma) == 0.0) outliers_.emplace_back(i, j);
                    }
                }
                break;
            }
            case TruncationMode::none:
                outliers_.clear();
                plateau_sigma_ = kUnboundedSigma;
                mask_.assign(e.size(), 0);
                break;
        }
        step_outliers_ = outliers_;
    }

    void fill_weights(const DenseMatrix& e, DenseMatrix& q) {
        if (cfg_.truncation_mode == TruncationMode::explicit_sigma) {
            outliers_.clear();
            for (std::size_t i = 0; i < e.rows(); ++i) {
                for (std::size_t j = 0; j < e.cols(); ++j) {
                    const double x = (e(i, j) / gamma_) * (e(i, j) / gamma_);
                    q(i, j) = hq_weight(x, cfg_.sigma);
                    if (q(i, j) == 0.0) outliers_.emplace_back(i, j);
                }
            }
            return;
        }
        for (std::size_t idx = 0; idx < e.size(); ++idx) {
            const double x = (e.data()[idx] / gamma_) * (e.data()[idx] / gamma_);
            q.data()[idx] = mask_[idx] ? 0.0 : 1.0 / (1.0 + x);
        }
    }

    // Objective of the truncated loss at the current scale: non-outlier
    // entries contribute (1/2) ln(1 + (e/gamma)^2), rejected entries sit on
    // the plateau (1/2) ln(1 + sigma) with sigma the implied truncation
    // level of this iteration.
    double objective(const DenseMatrix& e) const {
        double total = 0.0;
        if (cfg_.truncation_mode == TruncationMode::explicit_sigma) {
            for (double r : e.data()) {
                total += g((r / gamma_) * (r / gamma_), cfg_.sigma);
            }
            return 0.5 * total;
        }
        std::size_t rejected = 0;
        for (std::size_t idx = 0; idx < e.size(); ++idx) {
            if (mask_[idx]) {
                ++rejected;
                continue;
            }
            const double x = (e.data()[idx] / gamma_) * (e.data()[idx] / gamma_);
            total += std::log1p(x);
        }
        if (rejected > 0 && std::isfinite(plateau_sigma_)) {
            total += static_cast<double>(rejected) * std::log1p(plateau_sigma_);
        }
        return 0.5 * total;
    }

    double gamma() const { return gamma_; }
    // Current outlier set; in explicit mode this tracks the most recent
    // weight evaluation, so after the final refresh it matches the final
    // weights.
    const IndexSet& outliers() const { return outliers_; }
    // Outlier set as of the step's starting residual; matches the weights
    // used by the coefficient solves.
    const IndexSet& step_outliers() const { return step_outliers_; }

private:
    void rebuild_mask(std::size_t rows, std::size_t cols) {
        mask_.assign(rows * cols, 0);
        for (const auto& [i, j] : outliers_) mask_[i * cols + j] = 1;
    }

    const SolverConfig& cfg_;
    double gamma_min_;
    double gamma_ = 0.0;
    double plateau_sigma_ = kUnboundedSigma;
    IndexSet outliers_;
    IndexSet step_outliers_;
    std::vector<std::uint8_t> mask_;
};

}  // namespace

DenseMatrix update_weights(const DenseMatrix& e, double gamma, const IndexSet& outliers) {
    if (!(gamma > 0.0)) throw std::invalid_argument("update_weights: gamma must be positive");
    DenseMatrix q(e.rows(), e.cols(), 0.0);
    for (std::size_t idx = 0; idx < e.size(); ++idx) {
        const double x = (e.data()[idx] / gamma) * (e.data()[idx] / gamma);
        q.data()[idx] = 1.0 / (1.0 + x);
    }
    for (const auto& [i, j] : outliers) q(i, j) = 0.0;
    return q;
}

double estimate_scale_nagy(const DenseMatrix& e, double gamma0, double tol, std::size_t max_iter,
                           double gamma_min) {
    if (!(gamma0 > 0.0)) {
        throw std::invalid_argument("estimate_scale_nagy: gamma0 must be positive");
    }
    if (e.empty()) return std::max(gamma_min, kGammaMinFloor);
    const double count = static_cast<double>(e.size());
    double gamma = gamma0;
    for (std::size_t k = 0; k < max_iter; ++k) {
        double sum = 0.0;
        for (double r : e.data()) {
            const double x = (r / gamma) * (r / gamma);
            sum += 1.0 / (1.0 + x);
        }
        const double e0 = sum / count;
        if (e0 >= 1.0) {
            // Only possible when every residual is zero: the fixed point
            // collapses to zero, so stop at the floor.
            gamma = gamma_min;
            break;
        }
        const double next = gamma * std::sqrt(1.0 / e0 - 1.0);
        const bool converged = std::abs(next - gamma) <= tol * gamma;
        gamma = next;
        if (converged || !(gamma > 0.0) || !std::isfinite(gamma)) break;
    }
    return std::max(gamma, gamma_min);
}

OutlierScan detect_outliers_scan(const DenseMatrix& e) {
    OutlierScan scan;
    if (e.empty()) return scan;
    const std::vector<double> mags = magnitudes(e);
    const double med = median(mags);
    std::vector<double> lower;
    lower.reserve(mags.size() / 2 + 1);
    for (double v : mags) {
        if (v <= med) lower.push_back(v);
    }
    const double mu = mean(lower);
    const double raw_delta = stddev(lower);
    // Floor keeps a (near-)constant sample from flagging everything.
    const double delta = std::max(raw_delta, 1e-12 + 1e-6 * mu);
    scan.threshold = mu + 3.0 * delta;
    for (std::size_t i = 0; i < e.rows(); ++i) {
        for (std::size_t j = 0; j < e.cols(); ++j) {
            if (std::abs(e(i, j)) > scan.threshold) scan.indices.emplace_back(i, j);
        }
    }
    return scan;
}

IndexSet detect_outliers(const DenseMatrix& e) { return detect_outliers_scan(e).indices; }

HqState factorize(const DenseMatrix& v, const SolverConfig& cfg,
                  const IterationObserver& observer) {
    if (cfg.scale_mode == ScaleMode::fixed && cfg.fixed_gamma < 0.0) {
        throw std::invalid_argument("factorize: fixed gamma must be positive");
    }
    if (cfg.truncation_mode == TruncationMode::explicit_sigma && !(cfg.sigma > 0.0)) {
        throw std::invalid_argument("factorize: explicit truncation requires sigma > 0");
    }

    HqPolicy policy(cfg, resolve_gamma_min(v, cfg));
    detail::WeightPolicy hooks{
        [&](const DenseMatrix& e, std::size_t t) { policy.begin_iteration(e, t); },
        [&](const DenseMatrix& e, DenseMatrix& q) { policy.fill_weights(e, q); },
        [&](const DenseMatrix& e) { return policy.objective(e); },
    };

    HqState state;
    detail::StepObserver step = [&](std::size_t t, const DenseMatrix& e_start,
                                    const DenseMatrix& q, double f_start, double f_end) {
        state.gamma_trace.push_back(policy.gamma());
        state.outlier_count_trace.push_back(policy.step_outliers().size());
        if (observer) {
            observer(IterationRecord{t, policy.gamma(), policy.step_outliers(), q, e_start,
                                     f_start, f_end});
        }
    };

    detail::AlternationOptions opt{cfg.rank, cfg.eps1,     cfg.eps2,
                                   cfg.max_outer, cfg.max_inner, cfg.seed};
    detail::AlternationResult res = detail::run_alternation(v, opt, hooks, step);

    state.w = std::move(res.w);
    state.h = std::move(res.h);
    state.residual = std::move(res.residual);
    state.weights = std::move(res.weights);
    state.gamma = policy.gamma();
    state.outliers = policy.outliers();
    state.objective_trace = std::move(res.objective_end);
    state.objective_start_trace = std::move(res.objective_start);
    state.outer_iter = res.outer_iter;
    state.termination = res.termination;
    return state;
}

bool coefficient_bound_check(const DenseMatrix& w, std::span<const double> h_col, double sigma,
                             double gamma, double alpha) {
    if (!(gamma > 0.0) || !(alpha > 0.0) || !(sigma > 0.0)) {
        throw std::invalid_argument(
            "coefficient_bound_check: sigma, gamma, alpha must be positive");
    }
    for (std::size_t j = 0; j < w.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < w.rows(); ++i) s += w(i, j) * w(i, j);
        if (std::abs(std::sqrt(s) - 1.0) > 1e-8) {
            throw std::invalid_argument("coefficient_bound_check: basis column " +
                                        std::to_string(j) + " is not unit-norm");
        }
    }
    double s = 0.0;
    for (double x : h_col) s += x * x;
    const double bound = 2.0 * alpha + sigma * alpha / (std::sqrt(2.0) * gamma);
    return std::sqrt(s) <= bound;
}

}  // namespace rnmf
