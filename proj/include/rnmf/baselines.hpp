#pragma once

#include <cstdint>
#include <vector>

#include "rnmf/matrix.hpp"
#include "rnmf/types.hpp"

namespace rnmf {

enum class BaselineMethod { l2, l1, l21, huber, cim, cauchy };

const char* to_string(BaselineMethod m);

struct BaselineConfig {
    BaselineMethod method = BaselineMethod::l2;
    std::size_t rank = 2;
    double eps1 = 1e-6;
    double eps2 = 1e-6;
    std::size_t max_outer = 500;
    std::size_t max_inner = 500;
    std::uint64_t seed = 0;
    double cauchy_gamma = 0.0;  // cauchy method only; <= 0 means median(|E0|)
};

struct BaselineResult {
    DenseMatrix w;
    DenseMatrix h;
    std::vector<double> objective_trace;  // per-method objective, end of step
    std::size_t outer_iter = 0;
    Termination termination = Termination::max_iter;
};

/// Reweighted alternating factorization for the classic robust NMF family.
/// Each outer iteration recomputes the method's entrywise (or columnwise)
/// weights from the current residual and solves the weighted NNLS
/// subproblems column- then row-wise. l2 runs with unit weights (plain
/// accelerated projected-gradient NMF); huber re-estimates its cutoff as
/// the residual-magnitude median and cim its kernel width as the residual
/// root mean square each iteration; cauchy is the untruncated special case
/// of the half-quadratic driver at a fixed scale.
BaselineResult factorize_baseline(const DenseMatrix& v, const BaselineConfig& cfg);

}  // namespace rnmf
