#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "rnmf/eval.hpp"
#include "rnmf/matrix.hpp"
#include "rnmf/rng.hpp"

using rnmf::DenseMatrix;
using rnmf::LabelVector;

TEST_CASE("kmeans separates two far clusters exactly") {
    DenseMatrix pts(2, 20);
    for (std::size_t j = 0; j < 10; ++j) {
        pts(0, j) = 0.0 + 0.01 * static_cast<double>(j);
        pts(1, j) = 0.0;
        pts(0, 10 + j) = 100.0 + 0.01 * static_cast<double>(j);
        pts(1, 10 + j) = 100.0;
    }
    const LabelVector labels = rnmf::kmeans(pts, 2, 5, 1);
    for (std::size_t j = 1; j < 10; ++j) CHECK(labels[j] == labels[0]);
    for (std::size_t j = 11; j < 20; ++j) CHECK(labels[j] == labels[10]);
    CHECK(labels[0] != labels[10]);
}

TEST_CASE("kmeans with k equal to n isolates every point") {
    DenseMatrix pts(1, 6);
    for (std::size_t j = 0; j < 6; ++j) pts(0, j) = static_cast<double>(j) * 3.0;
    const rnmf::KmeansResult res = rnmf::kmeans_full(pts, 6, 3, 2);
    CHECK(res.inertia == doctest::Approx(0.0));
    LabelVector sorted = res.labels;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t j = 0; j < 6; ++j) CHECK(sorted[j] == static_cast<long long>(j));
}

TEST_CASE("kmeans recovers a planted partition of duplicated centroids") {
    DenseMatrix pts(3, 30);
    for (std::size_t j = 0; j < 30; ++j) {
        const std::size_t c = j % 3;
        for (std::size_t d = 0; d < 3; ++d) pts(d, j) = (c == d) ? 10.0 : 0.0;
    }
    const LabelVector labels = rnmf::kmeans(pts, 3, 5, 7);
    for (std::size_t j = 0; j < 30; ++j) CHECK(labels[j] == labels[j % 3]);
    CHECK(rnmf::kmeans_full(pts, 3, 5, 7).inertia == doctest::Approx(0.0));
}

TEST_CASE("kmeans validates k") {
    DenseMatrix pts(2, 3, 1.0);
    CHECK_THROWS(rnmf::kmeans(pts, 4, 1, 0));
    CHECK_THROWS(rnmf::kmeans(pts, 0, 1, 0));
}

TEST_CASE("accuracy is one for identical and relabeled partitions") {
    const LabelVector truth{0, 0, 1, 1, 2, 2};
    CHECK(rnmf::accuracy(truth, truth) == 1.0);
    const LabelVector relabeled{5, 5, 3, 3, 9, 9};
    CHECK(rnmf::accuracy(relabeled, truth) == 1.0);
}

TEST_CASE("accuracy of a constant prediction against balanced classes is 1/k") {
    const std::size_t k = 4, n = 400;
    LabelVector pred(n, 7);
    LabelVector truth(n);
    for (std::size_t i = 0; i < n; ++i) truth[i] = static_cast<long long>(i % k);
    CHECK(rnmf::accuracy(pred, truth) == doctest::Approx(1.0 / static_cast<double>(k)));
}

TEST_CASE("accuracy validates lengths") {
    CHECK_THROWS(rnmf::accuracy({0, 1}, {0, 1, 2}));
}

TEST_CASE("nmi degenerate and exact cases") {
    const LabelVector a{0, 0, 1, 1};
    CHECK(rnmf::nmi(a, a) == doctest::Approx(1.0));
    const LabelVector shifted{4, 4, 2, 2};
    CHECK(rnmf::nmi(shifted, a) == doctest::Approx(1.0));
    const LabelVector constant{3, 3, 3, 3};
    CHECK(rnmf::nmi(constant, a) == 0.0);
    CHECK(rnmf::nmi(constant, constant) == 1.0);
}

TEST_CASE("nmi of independent labelings vanishes for large samples") {
    rnmf::Rng rng(31);
    const std::size_t n = 10000;
    LabelVector a(n), b(n);
    for (auto& x : a) x = static_cast<long long>(rng.below(5));
    for (auto& x : b) x = static_cast<long long>(rng.below(5));
    CHECK(rnmf::nmi(a, b) <= 0.05);
}

TEST_CASE("nmi arithmetic variant stays within [geometric, 1]") {
    rnmf::Rng rng(32);
    LabelVector a(500), b(500);
    for (std::size_t i = 0; i < 500; ++i) {
        a[i] = static_cast<long long>(rng.below(4));
        b[i] = (rng.uniform01() < 0.8) ? a[i] : static_cast<long long>(rng.below(4));
    }
    const double geo = rnmf::nmi(a, b);
    const double ari = rnmf::nmi_arithmetic(a, b);
    CHECK(ari >= 0.0);
    CHECK(ari <= 1.0);
    CHECK(std::abs(ari - geo) < 0.1);
}

TEST_CASE("rel_error formula cases") {
    const DenseMatrix w = DenseMatrix::from_rows({{1, 0}, {0, 1}});
    const DenseMatrix h = DenseMatrix::from_rows({{2, 0}, {0, 3}});
    const DenseMatrix v = rnmf::matmul(w, h);
    CHECK(rnmf::rel_error(v, w, h) == 0.0);

    const DenseMatrix zero_w(2, 2, 0.0);
    CHECK(rnmf::rel_error(v, zero_w, h) == doctest::Approx(1.0));

    // Known perturbation: ||V - WH||_F computed by hand.
    DenseMatrix v2 = v;
    v2(0, 0) += 0.3;
    v2(1, 1) -= 0.4;
    const double expected = std::sqrt(0.3 * 0.3 + 0.4 * 0.4) / rnmf::frobenius_norm(v2);
    CHECK(rnmf::rel_error(v2, w, h) == doctest::Approx(expected).epsilon(1e-12));

    CHECK_THROWS(rnmf::rel_error(DenseMatrix(2, 2, 0.0), w, h));
}

TEST_CASE("cluster_report carries one entry per trial") {
    DenseMatrix pts(2, 12);
    for (std::size_t j = 0; j < 12; ++j) {
        pts(0, j) = (j < 6) ? 0.0 : 50.0;
        pts(1, j) = static_cast<double>(j % 6);
    }
    LabelVector truth(12);
    for (std::size_t j = 0; j < 12; ++j) truth[j] = j < 6 ? 0 : 1;
    const rnmf::ClusterReport rep = rnmf::cluster_report(pts, truth, 2, 10, 4, 5);
    CHECK(rep.trials == 10);
    CHECK(rep.per_trial.size() == 10);
    CHECK(rep.accuracy_mean == doctest::Approx(1.0));
    CHECK(rep.nmi_mean == doctest::Approx(1.0));
    CHECK(rep.accuracy_std == doctest::Approx(0.0));
}
