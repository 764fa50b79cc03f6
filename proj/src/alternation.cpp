#include "alternation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rnmf/parallel.hpp"
#include "rnmf/rng.hpp"
#include "rnmf/wnls.hpp"

namespace rnmf::detail {

namespace {

void validate(const DenseMatrix& v, const AlternationOptions& opt) {
    if (!v.all_finite()) throw std::invalid_argument("factorize: input has non-finite entries");
    if (!v.all_nonneg()) throw std::invalid_argument("factorize: input has negative entries");
    const std::size_t lim = std::min(v.rows(), v.cols());
    if (opt.rank == 0 || opt.rank > lim) {
        throw std::invalid_argument("factorize: rank " + std::to_string(opt.rank) +
                                    " outside [1, " + std::to_string(lim) + "] for a " +
                                    std::to_string(v.rows()) + "x" + std::to_string(v.cols()) +
                                    " matrix");
    }
    if (!(opt.eps1 > 0.0) || !(opt.eps2 > 0.0)) {
        throw std::invalid_argument("factorize: tolerances must be positive");
    }
    if (opt.max_outer == 0 || opt.max_inner == 0) {
        throw std::invalid_argument("factorize: iteration caps must be positive");
    }
}

// W, H ~ iid uniform(0,1) scaled so the initial product matches the data
// magnitude: sqrt(mean(V)/r). Draw order is W row-major then H row-major.
void init_factors(const DenseMatrix& v, std::size_t rank, std::uint64_t seed, DenseMatrix& w,
                  DenseMatrix& h) {
    double total = 0.0;
    for (double x : v.data()) total += x;
    const double m = v.size() > 0 ? total / static_cast<double>(v.size()) : 0.0;
    const double scale = std::sqrt(std::max(m, 1e-12) / static_cast<double>(rank));
    Rng rng(seed);
    w = DenseMatrix(v.rows(), rank);
    for (double& x : w.data()) x = scale * rng.uniform01();
    h = DenseMatrix(rank, v.cols());
    for (double& x : h.data()) x = scale * rng.uniform01();
}

DenseMatrix residual_of(const DenseMatrix& v, const DenseMatrix& w, const DenseMatrix& h) {
    return v - matmul(w, h);
}

}  // namespace

AlternationResult run_alternation(const DenseMatrix& v, const AlternationOptions& opt,
                                  WeightPolicy& policy, const StepObserver& observer) {
    validate(v, opt);
    const std::size_t m = v.rows();
    const std::size_t n = v.cols();
    const std::size_t threads = thread_count_from_env();

    AlternationResult res;
    init_factors(v, opt.rank, opt.seed, res.w, res.h);

    DenseMatrix e = residual_of(v, res.w, res.h);
    DenseMatrix q(m, n, 0.0);
    double f_init = 0.0;
    double f_end_prev = 0.0;

    for (std::size_t t = 0; t < opt.max_outer; ++t) {
        policy.begin_iteration(e, t);
        policy.fill_weights(e, q);
        const double f_start = policy.objective(e);
        if (t == 0) f_init = f_start;

        // Observer snapshots, taken before the buffers are reused.
        DenseMatrix e_snapshot, q_snapshot;
        if (observer) {
            e_snapshot = e;
            q_snapshot = q;
        }

        // Coefficient update, one weighted NNLS per column.
        parallel_for(n, threads, [&](std::size_t j) {
            const std::vector<double> d = q.column(j);
            const std::vector<double> target = v.column(j);
            const std::vector<double> warm = res.h.column(j);
            auto [sol, trace] = solve_wnls({res.w, d, target, warm}, opt.eps1, opt.max_inner);
            (void)trace;
            res.h.set_column(j, sol);
        });

        // Residual and weights refreshed against the new coefficients, at
        // the same per-iteration parameters.
        e = residual_of(v, res.w, res.h);
        policy.fill_weights(e, q);

        // Basis update: the transposed subproblem, one solve per row.
        const DenseMatrix ht = transpose(res.h);
        parallel_for(m, threads, [&](std::size_t i) {
            auto [sol, trace] =
                solve_wnls({ht, q.row_span(i), v.row_span(i), res.w.row_span(i)}, opt.eps1,
                           opt.max_inner);
            (void)trace;
            for (std::size_t k = 0; k < opt.rank; ++k) res.w(i, k) = sol[k];
        });

        e = residual_of(v, res.w, res.h);
        const double f_end = policy.objective(e);
        res.objective_start.push_back(f_start);
        res.objective_end.push_back(f_end);
        res.outer_iter = t + 1;

        if (observer) observer(t, e_snapshot, q_snapshot, f_start, f_end);

        if (t >= 1) {
            const double num = std::abs(f_end - f_end_prev);
            const double den = std::abs(f_init - f_end);
            const bool converged = den > 0.0 ? (num / den <= opt.eps2) : (num == 0.0);
            if (converged) {
                res.termination = Termination::converged;
                f_end_prev = f_end;
                break;
            }
        }
        f_end_prev = f_end;
    }

    res.residual = std::move(e);
    res.weights = DenseMatrix(m, n, 0.0);
    policy.fill_weights(res.residual, res.weights);
    return res;
}

}  // namespace rnmf::detail
