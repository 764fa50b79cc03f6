#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rnmf/matrix.hpp"
#include "rnmf/types.hpp"

namespace rnmf {

enum class SuiteScale { quick, full };

struct PropertyResult {
    std::string name;
    double discrepancy = 0.0;  // measured worst-case violation or ratio
    double tolerance = 0.0;    // pass iff discrepancy <= tolerance
    bool pass = false;
    std::string note;
};

struct SuiteReport {
    std::uint64_t seed = 0;
    SuiteScale scale = SuiteScale::quick;
    std::vector<PropertyResult> results;

    bool all_pass() const {
        for (const auto& r : results) {
            if (!r.pass) return false;
        }
        return true;
    }
};

/// Executes every cross-module invariant at the chosen scale and reports
/// the measured discrepancies. Failures are data, not exceptions; the
/// report is deterministic per seed.
SuiteReport run_suite(std::uint64_t seed, SuiteScale scale);

/// Worst entrywise deviation of `weights` from the half-quadratic rule
/// 1/(1+(e/gamma)^2) with the listed outliers forced to zero. Used both by
/// the suite and as a tamper detector in tests.
double weight_consistency_discrepancy(const DenseMatrix& e, double gamma, const IndexSet& outliers,
                                      const DenseMatrix& weights);

/// Exhaustive active-set oracle for the weighted NNLS subproblem: solves
/// the unconstrained weighted least-squares on every coordinate subset,
/// keeps the feasible candidates, and returns the best objective
/// (1/2) sum_i d_i (v_i - (W h)_i)^2. Exponential in the number of basis
/// columns; intended for tiny instances.
double wnls_active_set_oracle(const DenseMatrix& w, std::span<const double> d,
                              std::span<const double> v);

/// The same weighted objective at a given point, for comparing a solver
/// result against the oracle.
double wnls_objective_value(const DenseMatrix& w, std::span<const double> d,
                            std::span<const double> v, std::span<const double> h);

}  // namespace rnmf
