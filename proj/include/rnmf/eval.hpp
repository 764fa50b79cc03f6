#pragma once

#include <cstdint>
#include <vector>

#include "rnmf/matrix.hpp"

namespace rnmf {

using LabelVector = std::vector<long long>;

struct KmeansResult {
    LabelVector labels;
    double inertia = 0.0;
    // Inertia after each Lloyd sweep of the winning restart.
    std::vector<double> inertia_trace;
};

/// K-means on the columns of h: k-means++ seeding, Lloyd iterations until
/// the assignment stabilizes (at most 300 sweeps), best inertia over
/// `restarts` seeded restarts. Throws if k exceeds the number of columns.
KmeansResult kmeans_full(const DenseMatrix& h, std::size_t k, std::size_t restarts,
                         std::uint64_t seed);
LabelVector kmeans(const DenseMatrix& h, std::size_t k, std::size_t restarts, std::uint64_t seed);

/// Clustering accuracy: the best label matching between pred and truth,
/// solved exactly on the contingency table, as a fraction of agreeing
/// points. Throws on length mismatch.
double accuracy(const LabelVector& pred, const LabelVector& truth);

/// Normalized mutual information with geometric-mean normalization.
/// Degenerate cases: 1 when the labelings are identical up to renaming,
/// 0 when one labeling is constant and they differ.
double nmi(const LabelVector& pred, const LabelVector& truth);

/// Arithmetic-mean normalization variant.
double nmi_arithmetic(const LabelVector& pred, const LabelVector& truth);

/// ||v_clean - w h||_F / ||v_clean||_F. Throws if v_clean is all-zero.
double rel_error(const DenseMatrix& v_clean, const DenseMatrix& w, const DenseMatrix& h);

struct TrialMetrics {
    double accuracy = 0.0;
    double nmi = 0.0;
};

struct ClusterReport {
    double accuracy_mean = 0.0;
    double accuracy_std = 0.0;
    double nmi_mean = 0.0;
    double nmi_std = 0.0;
    double rel_error = 0.0;
    bool has_rel_error = false;
    std::size_t trials = 0;
    std::vector<TrialMetrics> per_trial;
};

/// Repeats k-means on h with per-trial derived seeds and scores each run
/// against the ground-truth labels. Standard deviations are over trials
/// (population convention).
ClusterReport cluster_report(const DenseMatrix& h, const LabelVector& truth, std::size_t k,
                             std::size_t trials, std::size_t restarts, std::uint64_t seed);

}  // namespace rnmf
