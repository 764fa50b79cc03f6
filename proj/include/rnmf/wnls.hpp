#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rnmf/matrix.hpp"

namespace rnmf {

/// One column's weighted non-negative least-squares subproblem:
/// min_{h >= 0} (1/2) sum_i d_i (v_i - (W h)_i)^2. The basis is borrowed,
/// not owned; the problem is solved immediately after construction.
struct WnlsProblem {
    const DenseMatrix& w;        // m x r basis, fixed during the solve
    std::span<const double> d;   // m per-entry weights, >= 0
    std::span<const double> v;   // m targets
    std::span<const double> h0;  // r warm start, >= 0
};

enum class WnlsStatus {
    converged,         // projected-gradient criterion met
    max_iterations,    // iteration cap reached first
    stationary_start,  // warm start already stationary
    zero_lipschitz,    // all weights zero; warm start returned unchanged
};

struct OgmTrace {
    std::size_t iterations = 0;
    double initial_pg_norm = 0.0;
    double final_pg_norm = 0.0;
    double lipschitz = 0.0;
    WnlsStatus status = WnlsStatus::converged;
};

/// Exact gradient W^T D (W z - v) of the weighted least-squares objective.
std::vector<double> wnls_gradient(const WnlsProblem& p, std::span<const double> z);

/// Projected gradient: the raw gradient on positive coordinates,
/// min(0, gradient) on coordinates at the boundary. Throws if h has a
/// negative entry.
std::vector<double> projected_gradient(const WnlsProblem& p, std::span<const double> h);

/// Nesterov-accelerated projected gradient descent on the weighted NNLS
/// subproblem. Stops once the projected-gradient norm falls below
/// max(eps1, 1e-3) times its warm-start value, or after max_iter steps.
/// The returned iterate is feasible and never has a worse objective than
/// the warm start.
std::pair<std::vector<double>, OgmTrace> solve_wnls(const WnlsProblem& p, double eps1,
                                                    std::size_t max_iter);

}  // namespace rnmf
