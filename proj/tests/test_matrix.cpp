#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "rnmf/matrix.hpp"

using rnmf::DenseMatrix;

TEST_CASE("matmul identity and zero") {
    const DenseMatrix a = DenseMatrix::from_rows({{1, 2}, {3, 4}, {5, 6}});
    const DenseMatrix i3 = DenseMatrix::identity(3);
    const DenseMatrix out = rnmf::matmul(i3, a);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(out.data()[k] == a.data()[k]);

    const DenseMatrix z = rnmf::matmul(DenseMatrix::from_rows({{1, 2}, {3, 4}}),
                                       DenseMatrix::from_rows({{0}, {0}}));
    CHECK(z(0, 0) == 0.0);
    CHECK(z(1, 0) == 0.0);
}

TEST_CASE("matmul hand-checked product") {
    const DenseMatrix out = rnmf::matmul(DenseMatrix::from_rows({{1, 2}, {3, 4}}),
                                         DenseMatrix::from_rows({{5}, {6}}));
    CHECK(out(0, 0) == doctest::Approx(17.0).epsilon(1e-14));
    CHECK(out(1, 0) == doctest::Approx(39.0).epsilon(1e-14));
}

TEST_CASE("matmul dimension mismatch names both shapes") {
    const DenseMatrix a(2, 3);
    const DenseMatrix b(2, 3);
    CHECK_THROWS_WITH_AS(rnmf::matmul(a, b), doctest::Contains("2x3"), std::invalid_argument);
}

TEST_CASE("project_nonneg clamps and normalizes signed zero") {
    const DenseMatrix m = DenseMatrix::from_rows({{-1.0, 2.0}});
    const DenseMatrix p = rnmf::project_nonneg(m);
    CHECK(p(0, 0) == 0.0);
    CHECK(p(0, 1) == 2.0);

    const DenseMatrix nonneg = DenseMatrix::from_rows({{0.5, 1.5}});
    const DenseMatrix same = rnmf::project_nonneg(nonneg);
    CHECK(same.data() == nonneg.data());

    const DenseMatrix z = rnmf::project_nonneg(DenseMatrix::from_rows({{-0.0}}));
    CHECK(z(0, 0) == 0.0);
    CHECK_FALSE(std::signbit(z(0, 0)));
}

TEST_CASE("spectral_norm on diagonal, zero, and hand-solved matrices") {
    CHECK(rnmf::spectral_norm(DenseMatrix::from_rows({{3, 0}, {0, 1}})) ==
          doctest::Approx(3.0).epsilon(1e-9));
    CHECK(rnmf::spectral_norm(DenseMatrix(4, 4, 0.0)) == 0.0);
    // Eigenvalues of [[2,1],[1,2]] are 2 +- 1.
    CHECK(rnmf::spectral_norm(DenseMatrix::from_rows({{2, 1}, {1, 2}})) ==
          doctest::Approx(3.0).epsilon(1e-9));
    CHECK_THROWS_AS(rnmf::spectral_norm(DenseMatrix(2, 3)), std::invalid_argument);
}

TEST_CASE("frobenius_norm basics") {
    CHECK(rnmf::frobenius_norm(DenseMatrix(3, 3, 0.0)) == 0.0);
    CHECK(rnmf::frobenius_norm(DenseMatrix::from_rows({{3, 4}})) == doctest::Approx(5.0));
    CHECK(rnmf::frobenius_norm(DenseMatrix::identity(4)) == doctest::Approx(2.0));
}

TEST_CASE("normalize_columns rescales and reports scales") {
    const DenseMatrix w = DenseMatrix::from_rows({{3}, {4}});
    const auto [wn, scales] = rnmf::normalize_columns(w);
    CHECK(wn(0, 0) == doctest::Approx(0.6));
    CHECK(wn(1, 0) == doctest::Approx(0.8));
    REQUIRE(scales.size() == 1);
    CHECK(scales[0] == doctest::Approx(5.0));

    const DenseMatrix unit = DenseMatrix::identity(3);
    const auto [un, uscales] = rnmf::normalize_columns(unit);
    for (std::size_t k = 0; k < unit.size(); ++k) CHECK(un.data()[k] == unit.data()[k]);
    for (double s : uscales) CHECK(s == doctest::Approx(1.0));
}

TEST_CASE("normalize_columns rejects zero columns with indices") {
    const DenseMatrix w = DenseMatrix::from_rows({{1, 0, 2}, {1, 0, 3}});
    CHECK_THROWS_WITH_AS(rnmf::normalize_columns(w), doctest::Contains("1"),
                         std::invalid_argument);
}

TEST_CASE("normalize then rescale preserves the product") {
    const DenseMatrix w = DenseMatrix::from_rows({{0.3, 2.0}, {1.7, 0.1}, {0.4, 0.9}});
    const DenseMatrix h = DenseMatrix::from_rows({{1.0, 0.2, 3.0}, {0.5, 0.7, 0.1}});
    const DenseMatrix before = rnmf::matmul(w, h);
    const auto [wn, scales] = rnmf::normalize_columns(w);
    const DenseMatrix after = rnmf::matmul(wn, rnmf::scale_rows(h, scales));
    for (std::size_t k = 0; k < before.size(); ++k) {
        CHECK(before.data()[k] == doctest::Approx(after.data()[k]).epsilon(1e-12));
    }
}

TEST_CASE("median conventions") {
    CHECK(rnmf::median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(rnmf::median({4.0, 1.0, 3.0, 2.0}) == 2.5);
    CHECK_THROWS_AS(rnmf::median({}), std::invalid_argument);
}

TEST_CASE("scale_rows validates length") {
    CHECK_THROWS_AS(rnmf::scale_rows(DenseMatrix(2, 2), {1.0}), std::invalid_argument);
}
