#include <cmath>

#include "doctest.h"
#include "rnmf/baselines.hpp"
#include "rnmf/datagen.hpp"
#include "rnmf/eval.hpp"
#include "rnmf/hq_cauchy.hpp"
#include "rnmf/losses.hpp"
#include "rnmf/rng.hpp"

using rnmf::BaselineConfig;
using rnmf::BaselineMethod;
using rnmf::DenseMatrix;

TEST_CASE("l2 baseline recovers a planted product and descends monotonically") {
    const rnmf::PlantedFactors data = rnmf::gen_lowrank(24, 18, 3, 21);
    BaselineConfig cfg;
    cfg.method = BaselineMethod::l2;
    cfg.rank = 3;
    cfg.seed = 21;
    cfg.max_outer = 200;
    const rnmf::BaselineResult res = rnmf::factorize_baseline(data.v, cfg);
    CHECK(rnmf::rel_error(data.v, res.w, res.h) <= 1e-2);
    for (std::size_t t = 1; t < res.objective_trace.size(); ++t) {
        CHECK(res.objective_trace[t] <= res.objective_trace[t - 1] + 1e-8);
    }
}

TEST_CASE("l21 weights scale inversely with the column residual norm") {
    // A column with twice the residual norm receives half the weight.
    const double w1 = rnmf::baseline_weight(0.4, rnmf::WeightFunction::l21());
    const double w2 = rnmf::baseline_weight(0.8, rnmf::WeightFunction::l21());
    CHECK(w1 == doctest::Approx(2.0 * w2).epsilon(1e-12));
}

TEST_CASE("huber beats l2 under sparse large deviations") {
    const rnmf::PlantedFactors data = rnmf::gen_lowrank(40, 30, 3, 33);
    DenseMatrix v = data.v;
    rnmf::Rng rng(34);
    const std::size_t hits = v.size() / 20;  // 5% of entries
    for (std::size_t k = 0; k < hits; ++k) {
        v.data()[rng.below(v.size())] += 10.0;
    }
    BaselineConfig cfg;
    cfg.rank = 3;
    cfg.seed = 33;
    cfg.max_outer = 150;

    cfg.method = BaselineMethod::huber;
    const rnmf::BaselineResult hub = rnmf::factorize_baseline(v, cfg);
    cfg.method = BaselineMethod::l2;
    const rnmf::BaselineResult l2 = rnmf::factorize_baseline(v, cfg);

    const double hub_err = rnmf::rel_error(data.v, hub.w, hub.h);
    const double l2_err = rnmf::rel_error(data.v, l2.w, l2.h);
    CHECK(hub_err < l2_err);
}

TEST_CASE("cauchy baseline coincides with the untruncated fixed-scale driver") {
    const rnmf::PlantedFactors data = rnmf::gen_lowrank(18, 14, 2, 55);
    BaselineConfig bc;
    bc.method = BaselineMethod::cauchy;
    bc.rank = 2;
    bc.seed = 55;
    bc.max_outer = 25;
    bc.cauchy_gamma = 0.9;
    const rnmf::BaselineResult base = rnmf::factorize_baseline(data.v, bc);

    rnmf::SolverConfig hc;
    hc.rank = 2;
    hc.seed = 55;
    hc.max_outer = 25;
    hc.scale_mode = rnmf::ScaleMode::fixed;
    hc.fixed_gamma = 0.9;
    hc.truncation_mode = rnmf::TruncationMode::none;
    const rnmf::HqState hq = rnmf::factorize(data.v, hc);

    REQUIRE(base.objective_trace.size() == hq.objective_trace.size());
    for (std::size_t t = 0; t < base.objective_trace.size(); ++t) {
        CHECK(std::abs(base.objective_trace[t] - hq.objective_trace[t]) <= 1e-10);
    }
    CHECK(base.w.data() == hq.w.data());
    CHECK(base.h.data() == hq.h.data());
}

TEST_CASE("baselines validate like the main driver") {
    DenseMatrix v(3, 3, 1.0);
    v(0, 0) = -1.0;
    BaselineConfig cfg;
    cfg.rank = 2;
    CHECK_THROWS(rnmf::factorize_baseline(v, cfg));
}

TEST_CASE("method names round-trip") {
    CHECK(std::string(rnmf::to_string(BaselineMethod::l21)) == "l21");
    CHECK(std::string(rnmf::to_string(BaselineMethod::cim)) == "cim");
}
