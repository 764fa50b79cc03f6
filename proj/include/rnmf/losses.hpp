#pragma once

#include <cstddef>
#include <limits>

#include "rnmf/matrix.hpp"

namespace rnmf {

/// Truncation parameter value selecting the untruncated Cauchy loss.
inline constexpr double kUnboundedSigma = std::numeric_limits<double>::infinity();

/// Smoothing floor for the 1/|e| style reweighting rules, which are
/// otherwise undefined at an exact fit.
inline constexpr double kTauSmooth = 1e-8;

/// Truncated Cauchy loss parameters: loss(e) = g((e/gamma)^2) with
/// g(x) = ln(1+x) capped at ln(1+sigma) once x exceeds sigma.
struct TruncatedCauchyLoss {
    double gamma = 1.0;
    double sigma = kUnboundedSigma;
};

/// g(x) = ln(1+x) for 0 <= x <= sigma, ln(1+sigma) beyond. Throws for x < 0.
double g(double x, double sigma);

/// (1/2) sum_ij g(((v - w h) / gamma)_ij^2). Throws on shape mismatch or
/// non-positive gamma.
double objective(const DenseMatrix& v, const DenseMatrix& w, const DenseMatrix& h,
                 const TruncatedCauchyLoss& loss);

/// Magnitude of the half-quadratic auxiliary maximizer: 1/(1+x) for
/// x <= sigma, 0 beyond. With x = (e/gamma)^2 this is the per-entry weight
/// of the alternating solver. Throws for x < 0.
double hq_weight(double x, double sigma);

enum class WeightKind { l2, l1, l21_column, huber, cim, cauchy, truncated_cauchy };

/// An entrywise (or, for l21_column, columnwise) reweighting rule, in the
/// unit-normalized form weight(0) = 1. Positive rescaling of the weights
/// leaves the weighted least-squares subproblems unchanged, so the
/// normalization is free.
struct WeightFunction {
    WeightKind kind = WeightKind::l2;
    double huber_cutoff = 0.0;
    double cim_sigma = 0.0;
    double cauchy_gamma = 0.0;
    double trunc_sigma = kUnboundedSigma;

    static WeightFunction l2() { return {WeightKind::l2, 0, 0, 0, kUnboundedSigma}; }
    static WeightFunction l1() { return {WeightKind::l1, 0, 0, 0, kUnboundedSigma}; }
    static WeightFunction l21() { return {WeightKind::l21_column, 0, 0, 0, kUnboundedSigma}; }
    static WeightFunction huber(double cutoff) {
        return {WeightKind::huber, cutoff, 0, 0, kUnboundedSigma};
    }
    static WeightFunction cim(double sigma) {
        return {WeightKind::cim, 0, sigma, 0, kUnboundedSigma};
    }
    static WeightFunction cauchy(double gamma) {
        return {WeightKind::cauchy, 0, 0, gamma, kUnboundedSigma};
    }
    static WeightFunction truncated_cauchy(double gamma, double sigma) {
        return {WeightKind::truncated_cauchy, 0, 0, gamma, sigma};
    }
};

/// Weight for a residual entry e (for l21_column, e is the column residual
/// norm). Throws if the parameters the kind needs are unset.
double baseline_weight(double e, const WeightFunction& fn);

/// Convex conjugate f*(y) of the core function f = -g on y in [-1, 0],
/// evaluated in closed form.
double conjugate_value(double y, double sigma);

/// Grid search of max_y { y*x - f*(y) } over y in [-1, 0]. The biconjugate
/// equals f(x) = -g(x); callers assert agreement within the grid
/// resolution.
double verify_conjugacy(double x, double sigma, std::size_t grid_points = 200001);

}  // namespace rnmf
