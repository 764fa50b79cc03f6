#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rnmf/matrix.hpp"
#include "rnmf/property_suite.hpp"
#include "rnmf/wnls.hpp"

using rnmf::DenseMatrix;
using rnmf::WnlsProblem;

TEST_CASE("wnls_gradient is zero at an exact fit and under zero weights") {
    const DenseMatrix w = DenseMatrix::from_rows({{1, 0}, {0, 1}, {1, 1}});
    const std::vector<double> z{0.5, 1.5};
    const std::vector<double> v{0.5, 1.5, 2.0};
    const std::vector<double> ones{1, 1, 1};
    const std::vector<double> zeros{0, 0, 0};
    const std::vector<double> h0{0, 0};
    for (double g : rnmf::wnls_gradient({w, ones, v, h0}, z)) {
        CHECK(g == doctest::Approx(0.0).epsilon(1e-14));
    }
    for (double g : rnmf::wnls_gradient({w, zeros, v, h0}, z)) CHECK(g == 0.0);
}

TEST_CASE("wnls_gradient hand case: masked second row") {
    const DenseMatrix w = DenseMatrix::from_rows({{1}, {1}});
    const std::vector<double> d{1, 0};
    const std::vector<double> v{2, 5};
    const std::vector<double> h0{0};
    const std::vector<double> z{0};
    // Objective reduces to (1/2)(2 - z)^2, gradient at 0 is -2.
    const auto g = rnmf::wnls_gradient({w, d, v, h0}, z);
    REQUIRE(g.size() == 1);
    CHECK(g[0] == doctest::Approx(-2.0));
}

TEST_CASE("projected_gradient boundary behavior") {
    const DenseMatrix w = DenseMatrix::from_rows({{1, 0}, {0, 1}});
    const std::vector<double> d{1, 1};
    const std::vector<double> v{-1, 2};  // target below zero forces positive gradient at 0
    const WnlsProblem p{w, d, v, std::vector<double>{0, 0}};

    // Interior point: projected gradient equals the raw gradient.
    const std::vector<double> interior{1.0, 1.0};
    const auto raw = rnmf::wnls_gradient(p, interior);
    const auto proj = rnmf::projected_gradient(p, interior);
    for (std::size_t i = 0; i < raw.size(); ++i) CHECK(raw[i] == proj[i]);

    // At zero with uphill gradient the component clamps to zero; with
    // downhill gradient it is kept.
    const std::vector<double> origin{0.0, 0.0};
    const auto pg = rnmf::projected_gradient(p, origin);
    CHECK(pg[0] == 0.0);   // gradient +1 clamped
    CHECK(pg[1] == -2.0);  // active descent direction kept

    const std::vector<double> bad{-0.5, 0.0};
    CHECK_THROWS_AS(rnmf::projected_gradient(p, bad), std::invalid_argument);
}

TEST_CASE("solve_wnls identity design projects the target") {
    const DenseMatrix w = DenseMatrix::identity(3);
    const std::vector<double> d{1, 1, 1};
    const std::vector<double> v{2.0, -1.0, 0.5};
    const std::vector<double> h0{0.1, 0.1, 0.1};
    auto [h, trace] = rnmf::solve_wnls({w, d, v, h0}, 1e-6, 200);
    CHECK(h[0] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(h[1] == doctest::Approx(0.0));
    CHECK(h[2] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("solve_wnls weighted hand case") {
    const DenseMatrix w = DenseMatrix::from_rows({{1}, {1}});
    const std::vector<double> d{1, 0};
    const std::vector<double> v{2, 5};
    const std::vector<double> h0{0};
    auto [h, trace] = rnmf::solve_wnls({w, d, v, h0}, 1e-6, 200);
    CHECK(h[0] == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("momentum sequence starts at the golden ratio") {
    // Step 5 of the inner method: alpha' = (1 + sqrt(4 a^2 + 1)) / 2.
    const double alpha1 = 0.5 * (1.0 + std::sqrt(4.0 * 1.0 * 1.0 + 1.0));
    CHECK(alpha1 == doctest::Approx(1.6180339887).epsilon(1e-9));
}

TEST_CASE("all-zero weights return the warm start with a skip status") {
    const DenseMatrix w = DenseMatrix::from_rows({{1, 2}, {3, 4}});
    const std::vector<double> d{0, 0};
    const std::vector<double> v{1, 1};
    const std::vector<double> h0{0.3, 0.4};
    auto [h, trace] = rnmf::solve_wnls({w, d, v, h0}, 1e-6, 100);
    CHECK(h == h0);
    CHECK(trace.status == rnmf::WnlsStatus::zero_lipschitz);
    CHECK(trace.iterations == 0);
}

TEST_CASE("stationary warm start returns immediately") {
    const DenseMatrix w = DenseMatrix::identity(2);
    const std::vector<double> d{1, 1};
    const std::vector<double> v{1.0, 2.0};
    const std::vector<double> h0{1.0, 2.0};
    auto [h, trace] = rnmf::solve_wnls({w, d, v, h0}, 1e-6, 100);
    CHECK(h == h0);
    CHECK(trace.status == rnmf::WnlsStatus::stationary_start);
}

TEST_CASE("solve_wnls input validation") {
    const DenseMatrix w = DenseMatrix::identity(2);
    const std::vector<double> d{1, 1};
    const std::vector<double> v{1, 1};
    CHECK_THROWS_AS(rnmf::solve_wnls({w, d, v, std::vector<double>{1.0}}, 1e-6, 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(rnmf::solve_wnls({w, d, v, std::vector<double>{-1.0, 0.0}}, 1e-6, 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        rnmf::solve_wnls({w, std::vector<double>{-1.0, 1.0}, v, std::vector<double>{0.0, 0.0}},
                         1e-6, 10),
        std::invalid_argument);
    CHECK_THROWS_AS(rnmf::solve_wnls({w, d, v, std::vector<double>{0.0, 0.0}}, 0.0, 10),
                    std::invalid_argument);
}

TEST_CASE("trace satisfies the relaxed stopping contract on normal exit") {
    const DenseMatrix w = DenseMatrix::from_rows({{1.0, 0.3}, {0.2, 1.0}, {0.5, 0.5}});
    const std::vector<double> d{1.0, 0.5, 2.0};
    const std::vector<double> v{1.0, 2.0, 0.2};
    const std::vector<double> h0{0.5, 0.5};
    auto [h, trace] = rnmf::solve_wnls({w, d, v, h0}, 1e-6, 500);
    REQUIRE(trace.status == rnmf::WnlsStatus::converged);
    CHECK(trace.final_pg_norm <= std::max(1e-6, 1e-3) * trace.initial_pg_norm);
    const double f0 = rnmf::wnls_objective_value(w, d, v, h0);
    const double f1 = rnmf::wnls_objective_value(w, d, v, h);
    CHECK(f1 <= f0 + 1e-12);
}
