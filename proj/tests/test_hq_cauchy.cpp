#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rnmf/datagen.hpp"
#include "rnmf/eval.hpp"
#include "rnmf/hq_cauchy.hpp"
#include "rnmf/matrix.hpp"
#include "rnmf/property_suite.hpp"
#include "rnmf/rng.hpp"

using rnmf::DenseMatrix;
using rnmf::IndexSet;
using rnmf::SolverConfig;

TEST_CASE("update_weights values and outlier override") {
    const double gamma = 0.7;
    DenseMatrix e(2, 2, 0.0);
    CHECK(rnmf::update_weights(e, gamma, {}).data() ==
          std::vector<double>{1.0, 1.0, 1.0, 1.0});

    e(0, 1) = gamma;
    DenseMatrix q = rnmf::update_weights(e, gamma, {});
    CHECK(q(0, 1) == doctest::Approx(0.5));

    q = rnmf::update_weights(e, gamma, {{0, 0}});
    CHECK(q(0, 0) == 0.0);  // overridden despite zero residual
    CHECK_THROWS_AS(rnmf::update_weights(e, 0.0, {}), std::invalid_argument);
}

TEST_CASE("nagy estimator fixed point when all magnitudes equal gamma0") {
    DenseMatrix e(8, 8, 0.0);
    const double gamma0 = 1.7;
    for (std::size_t i = 0; i < e.size(); ++i) {
        e.data()[i] = (i % 2 == 0) ? gamma0 : -gamma0;
    }
    // e0 = 1/2 exactly, so the update multiplies by sqrt(1/e0 - 1) = 1.
    CHECK(rnmf::estimate_scale_nagy(e, gamma0, 1e-6, 100, 1e-12) == gamma0);
}

TEST_CASE("nagy estimator clamps degenerate inputs") {
    const DenseMatrix zero(4, 4, 0.0);
    CHECK(rnmf::estimate_scale_nagy(zero, 2.0, 1e-6, 100, 1e-3) == 1e-3);
    CHECK_THROWS_AS(rnmf::estimate_scale_nagy(zero, 0.0, 1e-6, 100, 1e-3),
                    std::invalid_argument);
}

namespace {

// Independent evaluation of the documented outlier rule, kept free of the
// library's implementation details.
IndexSet outlier_rule_oracle(const DenseMatrix& e) {
    std::vector<double> mags;
    for (double x : e.data()) mags.push_back(std::abs(x));
    std::vector<double> sorted = mags;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double med =
        n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    std::vector<double> lower;
    for (double m : mags) {
        if (m <= med) lower.push_back(m);
    }
    double mu = 0.0;
    for (double m : lower) mu += m;
    mu /= static_cast<double>(lower.size());
    double var = 0.0;
    for (double m : lower) var += (m - mu) * (m - mu);
    const double delta =
        std::max(std::sqrt(var / static_cast<double>(lower.size())), 1e-12 + 1e-6 * mu);
    const double threshold = mu + 3.0 * delta;
    IndexSet out;
    for (std::size_t i = 0; i < e.rows(); ++i) {
        for (std::size_t j = 0; j < e.cols(); ++j) {
            if (std::abs(e(i, j)) > threshold) out.emplace_back(i, j);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("detect_outliers on constant and empty residuals") {
    CHECK(rnmf::detect_outliers(DenseMatrix(5, 5, 0.3)).empty());
    CHECK(rnmf::detect_outliers(DenseMatrix(4, 4, 0.0)).empty());
    CHECK(rnmf::detect_outliers(DenseMatrix()).empty());
}

TEST_CASE("detect_outliers flags planted spikes and matches the rule oracle") {
    rnmf::Rng rng(99);
    DenseMatrix e(100, 100);
    for (double& x : e.data()) x = rng.uniform01();
    std::set<std::size_t> planted;
    while (planted.size() < 100) planted.insert(rng.below(e.size()));
    for (std::size_t idx : planted) e.data()[idx] = 500.0;

    const IndexSet got = rnmf::detect_outliers(e);
    CHECK(got == outlier_rule_oracle(e));
    std::set<std::size_t> got_flat;
    for (const auto& [i, j] : got) got_flat.insert(i * e.cols() + j);
    for (std::size_t idx : planted) CHECK(got_flat.count(idx) == 1);
}

TEST_CASE("factorize validates inputs") {
    DenseMatrix v(4, 4, 1.0);
    SolverConfig cfg;
    cfg.rank = 5;
    CHECK_THROWS_AS(rnmf::factorize(v, cfg), std::invalid_argument);
    cfg.rank = 2;
    v(1, 1) = -0.5;
    CHECK_THROWS_AS(rnmf::factorize(v, cfg), std::invalid_argument);
}

TEST_CASE("factorize recovers a planted product on clean data") {
    const rnmf::PlantedFactors data = rnmf::gen_lowrank(24, 18, 3, 77);
    SolverConfig cfg;
    cfg.rank = 3;
    cfg.seed = 77;
    cfg.truncation_mode = rnmf::TruncationMode::none;
    cfg.max_outer = 200;
    const rnmf::HqState state = rnmf::factorize(data.v, cfg);
    CHECK(state.w.all_nonneg());
    CHECK(state.h.all_nonneg());
    REQUIRE_FALSE(state.objective_trace.empty());
    CHECK(state.objective_trace.back() <= state.objective_start_trace.front() + 1e-8);
    CHECK(rnmf::rel_error(data.v, state.w, state.h) <= 1e-2);
}

TEST_CASE("factorize at full rank reaches near-exact reconstruction") {
    const rnmf::PlantedFactors data = rnmf::gen_lowrank(6, 10, 6, 3);
    SolverConfig cfg;
    cfg.rank = 6;  // = min(m, n)
    cfg.seed = 3;
    cfg.truncation_mode = rnmf::TruncationMode::none;
    cfg.max_outer = 400;
    cfg.eps2 = 1e-10;
    const rnmf::HqState state = rnmf::factorize(data.v, cfg);
    CHECK(rnmf::rel_error(data.v, state.w, state.h) <= 1e-3);
}

TEST_CASE("line dataset: basis direction within five degrees") {
    rnmf::SyntheticLineSpec spec;
    spec.n_points = 180;
    spec.slope = 0.2;
    spec.n_outliers = 80;
    spec.axis = rnmf::OutlierAxis::both;
    spec.seed = 3;
    const rnmf::LineData data = rnmf::gen_line(spec);

    SolverConfig cfg;
    cfg.rank = 1;
    cfg.seed = 3;
    cfg.burn_in = 40;
    const rnmf::HqState state = rnmf::factorize(data.v, cfg);
    const double wx = state.w(0, 0), wy = state.w(1, 0);
    const double norm = std::hypot(wx, wy);
    REQUIRE(norm > 0.0);
    const double cosine = (wx * 1.0 + wy * 0.2) / (norm * std::hypot(1.0, 0.2));
    const double angle_deg = std::acos(std::clamp(cosine, -1.0, 1.0)) * 180.0 /
                             3.14159265358979323846;
    CHECK(angle_deg <= 5.0);
}

TEST_CASE("explicit truncation zeroes weights beyond the plateau radius") {
    const rnmf::PlantedFactors data = rnmf::gen_lowrank(16, 12, 2, 5);
    DenseMatrix v = data.v;
    v(3, 4) += 100.0;  // one extreme spike
    SolverConfig cfg;
    cfg.rank = 2;
    cfg.seed = 5;
    cfg.truncation_mode = rnmf::TruncationMode::explicit_sigma;
    cfg.sigma = 4.0;
    cfg.max_outer = 40;
    const rnmf::HqState state = rnmf::factorize(v, cfg);
    const double limit = state.gamma * std::sqrt(cfg.sigma);
    for (std::size_t i = 0; i < v.rows(); ++i) {
        for (std::size_t j = 0; j < v.cols(); ++j) {
            if (std::abs(state.residual(i, j)) > limit) {
                CHECK(state.weights(i, j) == 0.0);
            } else {
                CHECK(state.weights(i, j) > 0.0);
            }
        }
    }
    bool spike_rejected = false;
    for (const auto& [i, j] : state.outliers) {
        if (i == 3 && j == 4) spike_rejected = true;
    }
    CHECK(spike_rejected);
}

TEST_CASE("coefficient_bound_check formula and validation") {
    const DenseMatrix unit = DenseMatrix::identity(2);
    const std::vector<double> zero{0.0, 0.0};
    CHECK(rnmf::coefficient_bound_check(unit, zero, 2.0, 1.0, 1.0));

    // Threshold at alpha = 1, sigma = 2, gamma = 1 is 2 + sqrt(2).
    const double bound = 2.0 + std::sqrt(2.0);
    const std::vector<double> inside{bound - 1e-9, 0.0};
    const std::vector<double> outside{bound + 1e-9, 0.0};
    CHECK(rnmf::coefficient_bound_check(unit, inside, 2.0, 1.0, 1.0));
    CHECK_FALSE(rnmf::coefficient_bound_check(unit, outside, 2.0, 1.0, 1.0));

    const DenseMatrix not_unit = DenseMatrix::from_rows({{2.0, 0.0}, {0.0, 1.0}});
    CHECK_THROWS_AS(rnmf::coefficient_bound_check(not_unit, zero, 2.0, 1.0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("weight-consistency tamper detector fires on unzeroed outliers") {
    DenseMatrix e(3, 3, 0.0);
    e(1, 2) = 5.0;
    const double gamma = 1.0;
    const IndexSet outliers{{1, 2}};
    const DenseMatrix honest = rnmf::update_weights(e, gamma, outliers);
    CHECK(rnmf::weight_consistency_discrepancy(e, gamma, outliers, honest) == 0.0);

    const DenseMatrix tampered = rnmf::update_weights(e, gamma, {});  // zeroing skipped
    CHECK(rnmf::weight_consistency_discrepancy(e, gamma, outliers, tampered) > 0.0);
}

TEST_CASE("hq state snapshot is internally consistent") {
    const rnmf::PlantedFactors data = rnmf::gen_lowrank(20, 15, 3, 9);
    double high = 0.0;
    for (double x : data.v.data()) high = std::max(high, x);
    const DenseMatrix v =
        rnmf::corrupt(data.v, {rnmf::SaltPepper{0.15, 0.0, high}, 9}).corrupted;
    SolverConfig cfg;
    cfg.rank = 3;
    cfg.seed = 9;
    cfg.max_outer = 30;
    const rnmf::HqState state = rnmf::factorize(v, cfg);
    for (double q : state.weights.data()) {
        CHECK(q >= 0.0);
        CHECK(q <= 1.0);
    }
    for (const auto& [i, j] : state.outliers) CHECK(state.weights(i, j) == 0.0);
    CHECK(rnmf::weight_consistency_discrepancy(state.residual, state.gamma, state.outliers,
                                               state.weights) == 0.0);
    CHECK(state.gamma_trace.size() == state.outer_iter);
    CHECK(state.objective_trace.size() == state.outer_iter);
}
