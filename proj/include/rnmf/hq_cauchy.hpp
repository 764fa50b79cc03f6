#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rnmf/matrix.hpp"
#include "rnmf/types.hpp"

namespace rnmf {

enum class ScaleMode { nagy, fixed };
enum class TruncationMode { robust_stat, explicit_sigma, none };

struct SolverConfig {
    std::size_t rank = 2;
    double eps1 = 1e-6;  // inner projected-gradient tolerance
    double eps2 = 1e-6;  // outer relative-progress tolerance
    std::size_t max_outer = 500;
    std::size_t max_inner = 500;
    ScaleMode scale_mode = ScaleMode::nagy;
    double fixed_gamma = 0.0;  // fixed scale; <= 0 means median(|E0|)
    TruncationMode truncation_mode = TruncationMode::robust_stat;
    double sigma = 0.0;  // explicit truncation parameter
    std::uint64_t seed = 0;
    double gamma_min = 0.0;  // scale floor; <= 0 means 1e-4 * median(|V|)
    std::size_t burn_in = 1;  // first outer iteration that rejects outliers
};

struct HqState {
    DenseMatrix w;
    DenseMatrix h;
    DenseMatrix residual;  // V - W H at exit
    DenseMatrix weights;   // refreshed from the final residual, outliers zeroed
    double gamma = 0.0;
    IndexSet outliers;
    // Objective values per outer iteration, both evaluated at that
    // iteration's scale and outlier set: _trace holds the end-of-step
    // value, _start_trace the value before the step's factor updates.
    std::vector<double> objective_trace;
    std::vector<double> objective_start_trace;
    std::vector<double> gamma_trace;
    std::vector<std::size_t> outlier_count_trace;
    std::size_t outer_iter = 0;
    Termination termination = Termination::max_iter;
};

/// Per-iteration snapshot handed to an observer. References are only valid
/// during the callback.
struct IterationRecord {
    std::size_t iteration;
    double gamma;
    const IndexSet& outliers;
    const DenseMatrix& weights;         // weights used for the column solves
    const DenseMatrix& residual_start;  // V - W^t H^t
    double objective_start;             // at this step's (gamma, outliers)
    double objective_end;               // same parameters, updated factors
};

using IterationObserver = std::function<void(const IterationRecord&)>;

/// Q_ij = 1/(1 + (e_ij/gamma)^2), then zeroed at the listed outlier
/// positions.
DenseMatrix update_weights(const DenseMatrix& e, double gamma, const IndexSet& outliers);

/// Fixed-point scale estimate gamma <- gamma * sqrt(1/e0 - 1) with
/// e0 the mean of 1/(1+(E_ij/gamma)^2). Stops when the relative step falls
/// below tol or after max_iter rounds; the result never drops below
/// gamma_min. An all-zero residual returns gamma_min directly.
double estimate_scale_nagy(const DenseMatrix& e, double gamma0, double tol = 1e-6,
                           std::size_t max_iter = 100, double gamma_min = 1e-12);

struct OutlierScan {
    IndexSet indices;
    double threshold = 0.0;  // mu + 3*delta learned from the below-median half
};

/// Three-sigma outlier rule on residual magnitudes: mean and deviation are
/// estimated from the below-median half of the magnitudes, and every entry
/// whose magnitude exceeds mu + 3*delta is flagged.
OutlierScan detect_outliers_scan(const DenseMatrix& e);
IndexSet detect_outliers(const DenseMatrix& e);

/// Alternating half-quadratic factorization V ~ W H under the truncated
/// Cauchy loss: per outer iteration a weight update, optional scale
/// re-estimation, optional outlier rejection, a column-wise coefficient
/// solve and a row-wise basis solve, until the relative-progress criterion
/// or max_outer. Throws if v has negative entries or rank exceeds
/// min(m, n).
HqState factorize(const DenseMatrix& v, const SolverConfig& cfg,
                  const IterationObserver& observer = {});

/// Coefficient-boundedness diagnostic: ||h|| <= 2*alpha + sigma*alpha /
/// (sqrt(2)*gamma), valid once the basis columns are unit-norm. Throws if
/// w is not column-normalized.
bool coefficient_bound_check(const DenseMatrix& w, std::span<const double> h_col, double sigma,
                             double gamma, double alpha);

}  // namespace rnmf
