#pragma once

// Internal reweighted alternating least-squares engine shared by the
// truncated-Cauchy driver and the baseline solvers. Not installed.

#include <cstdint>
#include <functional>

#include "rnmf/matrix.hpp"
#include "rnmf/types.hpp"

namespace rnmf::detail {

struct WeightPolicy {
    // Invoked with the residual at the top of outer iteration t; updates
    // per-iteration parameters (scale, cutoffs, outlier set).
    std::function<void(const DenseMatrix& e, std::size_t t)> begin_iteration;
    // Weights at the current parameters; q is preallocated to e's shape.
    std::function<void(const DenseMatrix& e, DenseMatrix& q)> fill_weights;
    // Per-method objective at the current parameters.
    std::function<double(const DenseMatrix& e)> objective;
};

struct AlternationOptions {
    std::size_t rank = 1;
    double eps1 = 1e-6;
    double eps2 = 1e-6;
    std::size_t max_outer = 500;
    std::size_t max_inner = 500;
    std::uint64_t seed = 0;
};

struct AlternationResult {
    DenseMatrix w;
    DenseMatrix h;
    DenseMatrix residual;  // V - W H at exit
    DenseMatrix weights;   // fill_weights applied to the final residual
    std::vector<double> objective_start;  // per step, at that step's parameters
    std::vector<double> objective_end;
    std::size_t outer_iter = 0;
    Termination termination = Termination::max_iter;
};

// Called once per outer iteration with the step's starting residual, the
// weights used for the column solves, and both objective values at the
// step's fixed parameters. References are valid only during the call.
using StepObserver = std::function<void(std::size_t t, const DenseMatrix& e_start,
                                        const DenseMatrix& q, double f_start, double f_end)>;

AlternationResult run_alternation(const DenseMatrix& v, const AlternationOptions& opt,
                                  WeightPolicy& policy, const StepObserver& observer = {});

}  // namespace rnmf::detail
