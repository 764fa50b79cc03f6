#include "rnmf/baselines.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "alternation.hpp"
#include "rnmf/hq_cauchy.hpp"
#include "rnmf/losses.hpp"

namespace rnmf {

namespace {

double huber_loss(double x, double c) {
    const double a = std::abs(x);
    return a <= c ? x * x : 2.0 * c * a - c * c;
}

// Shared residual statistics; each method reads what it needs.
std::vector<double> column_norms(const DenseMatrix& e) {
    std::vector<double> norms(e.cols(), 0.0);
    for (std::size_t i = 0; i < e.rows(); ++i)
        for (std::size_t j = 0; j < e.cols(); ++j) norms[j] += e(i, j) * e(i, j);
    for (double& v : norms) v = std::sqrt(v);
    return norms;
}

struct BaselinePolicy {
    BaselineMethod method;
    double huber_cutoff = 0.0;
    double cim_sigma = 0.0;
    std::vector<double> col_norms;

    void begin_iteration(const DenseMatrix& e, std::size_t) {
        switch (method) {
            case BaselineMethod::huber: {
                std::vector<double> mags;
                mags.reserve(e.size());
                for (double x : e.data()) mags.push_back(std::abs(x));
                huber_cutoff = std::max(median(std::move(mags)), kTauSmooth);
                break;
            }
            case BaselineMethod::cim: {
                double s = 0.0;
                for (double x : e.data()) s += x * x;
                cim_sigma =
                    std::max(std::sqrt(s / static_cast<double>(e.size())), kTauSmooth);
                break;
            }
            default:
                break;
        }
    }

    void fill_weights(const DenseMatrix& e, DenseMatrix& q) {
        switch (method) {
            case BaselineMethod::l2:
                for (double& v : q.data()) v = 1.0;
                break;
            case BaselineMethod::l1: {
                const WeightFunction fn = WeightFunction::l1();
                for (std::size_t idx = 0; idx < e.size(); ++idx) {
                    q.data()[idx] = baseline_weight(e.data()[idx], fn);
                }
                break;
            }
            case BaselineMethod::l21: {
                col_norms = column_norms(e);
                const WeightFunction fn = WeightFunction::l21();
                for (std::size_t i = 0; i < e.rows(); ++i)
                    for (std::size_t j = 0; j < e.cols(); ++j)
                        q(i, j) = baseline_weight(col_norms[j], fn);
                break;
            }
            case BaselineMethod::huber: {
                const WeightFunction fn = WeightFunction::huber(huber_cutoff);
                for (std::size_t idx = 0; idx < e.size(); ++idx) {
                    q.data()[idx] = baseline_weight(e.data()[idx], fn);
                }
                break;
            }
            case BaselineMethod::cim: {
                const WeightFunction fn = WeightFunction::cim(cim_sigma);
                for (std::size_t idx = 0; idx < e.size(); ++idx) {
                    q.data()[idx] = baseline_weight(e.data()[idx], fn);
                }
                break;
            }
            case BaselineMethod::cauchy:
                throw std::logic_error("cauchy baseline is delegated");
        }
    }

    double objective(const DenseMatrix& e) const {
        double total = 0.0;
        switch (method) {
            case BaselineMethod::l2:
                for (double x : e.data()) total += x * x;
                return total;
            case BaselineMethod::l1:
                for (double x : e.data()) total += std::abs(x);
                return total;
            case BaselineMethod::l21: {
                for (double v : column_norms(e)) total += v;
                return total;
            }
            case BaselineMethod::huber:
                for (double x : e.data()) total += huber_loss(x, huber_cutoff);
                return total;
            case BaselineMethod::cim: {
                const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi_v<double>) * cim_sigma);
                for (double x : e.data()) {
                    total += 1.0 - norm * std::exp(-(x * x) / (2.0 * cim_sigma * cim_sigma));
                }
                return total;
            }
            case BaselineMethod::cauchy:
                break;
        }
        throw std::logic_error("cauchy baseline is delegated");
    }
};

}  // namespace

const char* to_string(BaselineMethod m) {
    switch (m) {
        case BaselineMethod::l2: return "l2";
        case BaselineMethod::l1: return "l1";
        case BaselineMethod::l21: return "l21";
        case BaselineMethod::huber: return "huber";
        case BaselineMethod::cim: return "cim";
        case BaselineMethod::cauchy: return "cauchy";
    }
    return "?";
}

BaselineResult factorize_baseline(const DenseMatrix& v, const BaselineConfig& cfg) {
    if (cfg.method == BaselineMethod::cauchy) {
        // The untruncated Cauchy method is the half-quadratic driver with
        // truncation disabled and the scale held fixed.
        SolverConfig hq;
        hq.rank = cfg.rank;
        hq.eps1 = cfg.eps1;
        hq.eps2 = cfg.eps2;
        hq.max_outer = cfg.max_outer;
        hq.max_inner = cfg.max_inner;
        hq.seed = cfg.seed;
        hq.scale_mode = ScaleMode::fixed;
        hq.fixed_gamma = cfg.cauchy_gamma;
        hq.truncation_mode = TruncationMode::none;
        HqState state = factorize(v, hq);
        BaselineResult res;
        res.w = std::move(state.w);
        res.h = std::move(state.h);
        res.objective_trace = std::move(state.objective_trace);
        res.outer_iter = state.outer_iter;
        res.termination = state.termination;
        return res;
    }

    BaselinePolicy policy{cfg.method, 0.0, 0.0, {}};
    detail::WeightPolicy hooks{
        [&](const DenseMatrix& e, std::size_t t) { policy.begin_iteration(e, t); },
        [&](const DenseMatrix& e, DenseMatrix& q) { policy.fill_weights(e, q); },
        [&](const DenseMatrix& e) { return policy.objective(e); },
    };
    detail::AlternationOptions opt{cfg.rank, cfg.eps1,     cfg.eps2,
                                   cfg.max_outer, cfg.max_inner, cfg.seed};
    detail::AlternationResult raw = detail::run_alternation(v, opt, hooks);

    BaselineResult res;
    res.w = std::move(raw.w);
    res.h = std::move(raw.h);
    res.objective_trace = std::move(raw.objective_end);
    res.outer_iter = raw.outer_iter;
    res.termination = raw.termination;
    return res;
}

}  // namespace rnmf
