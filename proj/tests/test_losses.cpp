#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "rnmf/losses.hpp"
#include "rnmf/matrix.hpp"

using rnmf::DenseMatrix;
using rnmf::kUnboundedSigma;
using rnmf::TruncatedCauchyLoss;
using rnmf::WeightFunction;

TEST_CASE("g piecewise values") {
    CHECK(rnmf::g(0.0, 5.0) == 0.0);
    CHECK(rnmf::g(0.0, kUnboundedSigma) == 0.0);
    const double sigma = 2.5;
    CHECK(rnmf::g(sigma, sigma) == doctest::Approx(std::log1p(sigma)).epsilon(1e-15));
    CHECK(rnmf::g(sigma, sigma) == rnmf::g(sigma + 1.0, sigma));
    CHECK(rnmf::g(3.0, kUnboundedSigma) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
    CHECK_THROWS_AS(rnmf::g(-0.1, 1.0), std::invalid_argument);
}

TEST_CASE("objective zero at exact fit") {
    const DenseMatrix w = DenseMatrix::from_rows({{1, 2}, {0.5, 1}});
    const DenseMatrix h = DenseMatrix::from_rows({{0.2, 1.0}, {0.7, 0.1}});
    const DenseMatrix v = rnmf::matmul(w, h);
    CHECK(rnmf::objective(v, w, h, {1.0, kUnboundedSigma}) == 0.0);
}

TEST_CASE("objective hand evaluation with residuals {gamma, gamma, 0, 0}") {
    // W = 0, H = 0 leaves the residual equal to V itself.
    const double gamma = 0.8;
    const DenseMatrix v = DenseMatrix::from_rows({{gamma, gamma}, {0, 0}});
    const DenseMatrix w(2, 1, 0.0);
    const DenseMatrix h(1, 2, 0.0);
    CHECK(rnmf::objective(v, w, h, {gamma, kUnboundedSigma}) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("objective plateau contribution beyond the truncation radius") {
    const double gamma = 1.0, sigma = 4.0;
    // |residual| = 5 > gamma*sqrt(sigma) = 2, so each entry contributes
    // exactly (1/2) ln(1+sigma).
    const DenseMatrix v = DenseMatrix::from_rows({{5.0, 5.0, 5.0}});
    const DenseMatrix w(1, 1, 0.0);
    const DenseMatrix h(1, 3, 0.0);
    CHECK(rnmf::objective(v, w, h, {gamma, sigma}) ==
          doctest::Approx(1.5 * std::log1p(sigma)).epsilon(1e-14));
}

TEST_CASE("objective rejects shape mismatch and bad gamma") {
    const DenseMatrix v(2, 2), w(2, 1), h(1, 3);
    CHECK_THROWS_AS(rnmf::objective(v, w, h, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(rnmf::objective(v, w, DenseMatrix(1, 2), {0.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("hq_weight maximizer magnitude") {
    CHECK(rnmf::hq_weight(0.0, 3.0) == 1.0);
    CHECK(rnmf::hq_weight(3.0 + 1e-12, 3.0) == 0.0);
    CHECK(rnmf::hq_weight(3.0, 3.0) == doctest::Approx(0.25));
    CHECK(rnmf::hq_weight(1.0, kUnboundedSigma) == 0.5);
    CHECK_THROWS_AS(rnmf::hq_weight(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("baseline_weight equals one at zero residual for every kind") {
    const WeightFunction kinds[] = {
        WeightFunction::l2(),          WeightFunction::l1(),
        WeightFunction::l21(),         WeightFunction::huber(2.0),
        WeightFunction::cim(1.0),      WeightFunction::cauchy(1.5),
        WeightFunction::truncated_cauchy(1.5, 4.0),
    };
    for (const auto& fn : kinds) CHECK(rnmf::baseline_weight(0.0, fn) == 1.0);
}

TEST_CASE("baseline_weight formulas") {
    CHECK(rnmf::baseline_weight(4.0, WeightFunction::huber(2.0)) == doctest::Approx(0.5));
    CHECK(rnmf::baseline_weight(1.0, WeightFunction::cim(1.0)) ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK(rnmf::baseline_weight(1.5, WeightFunction::cauchy(1.5)) == doctest::Approx(0.5));
    // Even in the residual argument.
    CHECK(rnmf::baseline_weight(-4.0, WeightFunction::huber(2.0)) ==
          rnmf::baseline_weight(4.0, WeightFunction::huber(2.0)));
}

TEST_CASE("baseline_weight rejects unset parameters") {
    WeightFunction fn;
    fn.kind = rnmf::WeightKind::huber;
    CHECK_THROWS_AS(rnmf::baseline_weight(1.0, fn), std::invalid_argument);
    fn.kind = rnmf::WeightKind::cim;
    CHECK_THROWS_AS(rnmf::baseline_weight(1.0, fn), std::invalid_argument);
    fn.kind = rnmf::WeightKind::cauchy;
    CHECK_THROWS_AS(rnmf::baseline_weight(1.0, fn), std::invalid_argument);
}

TEST_CASE("conjugacy grid search reproduces -g") {
    // x = 0: the maximum sits at y = -1 where f*(-1) = 0.
    CHECK(rnmf::verify_conjugacy(0.0, 2.0) == doctest::Approx(0.0).epsilon(1e-10));
    // Interior maximizer at y = -1/2.
    CHECK(rnmf::verify_conjugacy(1.0, 1.0) == doctest::Approx(-std::log(2.0)).epsilon(1e-4));
    CHECK(rnmf::verify_conjugacy(1.0, 5.0) == doctest::Approx(-std::log(2.0)).epsilon(1e-4));
    // Truncation branch: maximum at y = 0.
    for (double sigma : {1.0, 5.0}) {
        CHECK(rnmf::verify_conjugacy(2.0 * sigma, sigma) ==
              doctest::Approx(-std::log1p(sigma)).epsilon(1e-4));
    }
}
