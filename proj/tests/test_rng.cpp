#include <cmath>

#include "doctest.h"
#include "rnmf/rng.hpp"

using rnmf::Rng;

TEST_CASE("identical seed gives identical stream") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("child streams are deterministic and distinct") {
    CHECK(Rng::derive(7, 0) == Rng::derive(7, 0));
    CHECK(Rng::derive(7, 0) != Rng::derive(7, 1));
    CHECK(Rng::derive(7, 0) != Rng::derive(8, 0));
    Rng c1 = Rng(9).child(3);
    Rng c2 = Rng(9).child(3);
    for (int i = 0; i < 100; ++i) CHECK(c1.uniform01() == c2.uniform01());
}

TEST_CASE("uniform01 stays in [0, 1) and open variant in (0, 1)") {
    Rng rng(1);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const double v = rng.uniform01_open();
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("below covers the range without bias artifacts") {
    Rng rng(5);
    int counts[7] = {0};
    for (int i = 0; i < 70000; ++i) ++counts[rng.below(7)];
    for (int c : counts) {
        CHECK(c > 9000);
        CHECK(c < 11000);
    }
    CHECK_THROWS(rng.below(0));
}

TEST_CASE("laplace draws have the right absolute-moment scale") {
    Rng rng(11);
    double acc = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) acc += std::abs(rng.laplace(3.0));
    CHECK(acc / n == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("cauchy draws are finite and sign-balanced") {
    Rng rng(13);
    int pos = 0;
    for (int i = 0; i < 20000; ++i) {
        const double x = rng.cauchy(2.0);
        CHECK(std::isfinite(x));
        if (x > 0) ++pos;
    }
    CHECK(pos > 9000);
    CHECK(pos < 11000);
}
