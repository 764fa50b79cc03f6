#include "rnmf/property_suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "rnmf/baselines.hpp"
#include "rnmf/datagen.hpp"
#include "rnmf/eval.hpp"
#include "rnmf/hq_cauchy.hpp"
#include "rnmf/losses.hpp"
#include "rnmf/rng.hpp"
#include "rnmf/wnls.hpp"

namespace rnmf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Sizes {
    std::size_t mat = 24;            // generic matrix dimension
    std::size_t rank = 3;
    std::size_t descent_instances = 3;
    std::size_t descent_dim = 32;
    std::size_t descent_rank = 3;
    std::size_t bound_instances = 20;
    std::size_t timing_small = 45;
    std::size_t timing_large = 64;
    std::size_t timing_rank = 4;
    std::size_t kmeans_points = 60;
};

Sizes sizes_for(SuiteScale scale) {
    Sizes s;
    if (scale == SuiteScale::full) {
        s.mat = 96;
        s.rank = 8;
        s.descent_instances = 20;
        s.descent_dim = 64;
        s.descent_rank = 4;
        s.timing_small = 181;
        s.timing_large = 256;
        s.timing_rank = 8;
        s.kmeans_points = 400;
    }
    return s;
}

DenseMatrix random_matrix(Rng& rng, std::size_t r, std::size_t c, double lo, double hi) {
    DenseMatrix m(r, c);
    for (double& v : m.data()) v = rng.uniform(lo, hi);
    return m;
}

PropertyResult make_result(std::string name, double discrepancy, double tolerance,
                           std::string note = {}) {
    PropertyResult r;
    r.name = std::move(name);
    r.discrepancy = discrepancy;
    r.tolerance = tolerance;
    r.pass = discrepancy <= tolerance;
    r.note = std::move(note);
    return r;
}

// Restores RNMF_THREADS on scope exit.
class ThreadEnvGuard {
public:
    ThreadEnvGuard() {
        if (const char* v = std::getenv("RNMF_THREADS")) {
            had_ = true;
            saved_ = v;
        }
    }
    ~ThreadEnvGuard() {
        if (had_) {
            ::setenv("RNMF_THREADS", saved_.c_str(), 1);
        } else {
            ::unsetenv("RNMF_THREADS");
        }
    }

private:
    bool had_ = false;
    std::string saved_;
};

// ---- matrix-core -----------------------------------------------------

PropertyResult check_matmul_associativity(std::uint64_t seed, const Sizes& sz) {
    Rng rng(seed);
    double worst = 0.0;
    for (int rep = 0; rep < 4; ++rep) {
        const std::size_t a = 3 + rng.below(sz.mat);
        const std::size_t b = 3 + rng.below(sz.mat);
        const std::size_t c = 3 + rng.below(sz.mat);
        const std::size_t d = 3 + rng.below(sz.mat);
        const DenseMatrix ma = random_matrix(rng, a, b, 1.0, 2.0);
        const DenseMatrix mb = random_matrix(rng, b, c, 1.0, 2.0);
        const DenseMatrix mc = random_matrix(rng, c, d, 1.0, 2.0);
        const DenseMatrix left = matmul(matmul(ma, mb), mc);
        const DenseMatrix right = matmul(ma, matmul(mb, mc));
        for (std::size_t i = 0; i < left.size(); ++i) {
            const double x = left.data()[i];
            const double y = right.data()[i];
            worst = std::max(worst, std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1.0}));
        }
    }
    return make_result("matrix.matmul-associativity", worst, 1e-10);
}

PropertyResult check_project_idempotent(std::uint64_t seed, const Sizes& sz) {
    Rng rng(seed);
    DenseMatrix m = random_matrix(rng, sz.mat, sz.mat, -2.0, 2.0);
    m(0, 0) = -0.0;
    const DenseMatrix once = project_nonneg(m);
    const DenseMatrix twice = project_nonneg(once);
    double worst = 0.0;
    for (std::size_t i = 0; i < once.size(); ++i) {
        if (once.data()[i] != twice.data()[i] || std::signbit(once.data()[i])) worst = 1.0;
    }
    return make_result("matrix.project-nonneg-idempotent", worst, 0.0);
}

PropertyResult check_spectral_norm_dominates(std::uint64_t seed, const Sizes& sz) {
    Rng rng(seed);
    const std::size_t n = std::min<std::size_t>(sz.mat, 32);
    const DenseMatrix m = random_matrix(rng, n, n, 0.0, 1.0);
    const DenseMatrix a = matmul(transpose(m), m);
    const double s = spectral_norm(a);
    double worst = 0.0;
    std::vector<double> v(n), av(n);
    for (int rep = 0; rep < 100; ++rep) {
        double norm = 0.0;
        for (auto& x : v) {
            x = rng.uniform(-1.0, 1.0);
        }
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += a(i, j) * v[j];
            av[i] = acc;
        }
        double quot = 0.0;
        for (double x : av) quot += x * x;
        quot = std::sqrt(quot) / norm;
        worst = std::max(worst, (quot - s) / s);
    }
    return make_result("matrix.spectral-norm-dominates-quotients", worst, 1e-6);
}

PropertyResult check_rng_determinism(std::uint64_t seed, const Sizes&) {
    Rng a(seed), b(seed);
    std::size_t mismatches = 0;
    for (int i = 0; i < 4096; ++i) {
        if (a.next_u64() != b.next_u64()) ++mismatches;
    }
    Rng c(Rng::derive(seed, 7)), d(Rng::derive(seed, 7));
    for (int i = 0; i < 512; ++i) {
        if (c.uniform01() != d.uniform01()) ++mismatches;
        if (c.laplace(2.0) != d.laplace(2.0)) ++mismatches;
    }
    return make_result("matrix.rng-stream-determinism", static_cast<double>(mismatches), 0.0);
}

// ---- losses ----------------------------------------------------------

PropertyResult check_hq_weight_identity(std::uint64_t, const Sizes&) {
    const double sigma = 7.0;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double x = sigma * static_cast<double>(i) / 999.0;
        worst = std::max(worst, std::abs(hq_weight(x, sigma) * (1.0 + x) - 1.0));
    }
    return make_result("losses.hq-weight-inverse-identity", worst, 5e-16,
                       "exact up to one rounding of the final product");
}

PropertyResult check_g_monotone_concave(std::uint64_t, const Sizes&) {
    const double sigma = 5.0;
    double worst = 0.0;
    const int n = 400;
    for (int i = 0; i + 1 < n; ++i) {
        const double x1 = sigma * static_cast<double>(i) / (n - 1);
        const double x2 = sigma * static_cast<double>(i + 1) / (n - 1);
        worst = std::max(worst, g(x1, sigma) - g(x2, sigma));
        const double mid = g(0.5 * (x1 + x2), sigma);
        worst = std::max(worst, 0.5 * (g(x1, sigma) + g(x2, sigma)) - mid);
    }
    return make_result("losses.g-monotone-and-concave", worst, 1e-12);
}

PropertyResult check_truncated_equals_cauchy(std::uint64_t, const Sizes&) {
    const WeightFunction tc = WeightFunction::truncated_cauchy(1.5, kUnboundedSigma);
    const WeightFunction ca = WeightFunction::cauchy(1.5);
    double worst = 0.0;
    for (int i = -200; i <= 200; ++i) {
        const double e = 0.1 * static_cast<double>(i);
        worst = std::max(worst, std::abs(baseline_weight(e, tc) - baseline_weight(e, ca)));
    }
    return make_result("losses.truncated-unbounded-equals-cauchy", worst, 0.0);
}

PropertyResult check_weight_monotonicity(std::uint64_t, const Sizes&) {
    const WeightFunction kinds[] = {
        WeightFunction::l1(),          WeightFunction::l21(),
        WeightFunction::huber(2.0),    WeightFunction::cim(1.0),
        WeightFunction::cauchy(1.5),   WeightFunction::truncated_cauchy(1.5, 4.0),
    };
    double worst = 0.0;
    for (const auto& fn : kinds) {
        double prev = baseline_weight(0.0, fn);
        for (int i = 1; i <= 400; ++i) {
            const double e = 10.0 * static_cast<double>(i) / 400.0;
            const double w = baseline_weight(e, fn);
            worst = std::max(worst, w - prev);
            prev = w;
        }
    }
    return make_result("losses.weight-monotone-nonincreasing", worst, 0.0);
}

PropertyResult check_weight_range(std::uint64_t, const Sizes&) {
    const WeightFunction kinds[] = {
        WeightFunction::l2(),          WeightFunction::l1(),
        WeightFunction::l21(),         WeightFunction::huber(2.0),
        WeightFunction::cim(1.0),      WeightFunction::cauchy(1.5),
        WeightFunction::truncated_cauchy(1.5, 4.0),
    };
    double worst = 0.0;
    for (const auto& fn : kinds) {
        for (int i = -300; i <= 300; ++i) {
            const double w = baseline_weight(0.07 * static_cast<double>(i), fn);
            worst = std::max({worst, w - 1.0, -w});
        }
    }
    return make_result("losses.weight-in-unit-interval", worst, 0.0);
}

// ---- wnls ------------------------------------------------------------

struct WnlsInstance {
    DenseMatrix w;
    std::vector<double> d, v, h0;
};

WnlsInstance random_wnls(Rng& rng, std::size_t max_m, std::size_t max_r) {
    WnlsInstance inst;
    const std::size_t r = 1 + rng.below(max_r);
    const std::size_t m = std::max<std::size_t>(r, 2) + rng.below(max_m);
    inst.w = random_matrix(rng, m, r, 0.0, 1.0);
    inst.d.resize(m);
    inst.v.resize(m);
    inst.h0.resize(r);
    for (auto& x : inst.d) x = rng.uniform01() < 0.15 ? 0.0 : rng.uniform(0.05, 1.0);
    for (auto& x : inst.v) x = rng.uniform(0.0, 2.0);
    for (auto& x : inst.h0) x = rng.uniform(0.0, 1.0);
    return inst;
}

// Runs the solver to its fixed point by re-warm-starting; the relaxed
// stopping rule has a 1e-3 relative floor per call, so oracle-level
// accuracy needs the same warm-start reuse the outer driver performs.
std::vector<double> solve_polished(const WnlsInstance& inst, std::size_t max_rounds = 50) {
    std::vector<double> h = inst.h0;
    double prev = kInf;
    for (std::size_t round = 0; round < max_rounds; ++round) {
        auto [sol, trace] = solve_wnls({inst.w, inst.d, inst.v, h}, 1e-6, 2000);
        h = std::move(sol);
        const double f = wnls_objective_value(inst.w, inst.d, inst.v, h);
        if (trace.status == WnlsStatus::stationary_start ||
            trace.status == WnlsStatus::zero_lipschitz || prev - f <= 1e-16 * std::max(1.0, f)) {
            break;
        }
        prev = f;
    }
    return h;
}

PropertyResult check_wnls_monotone(std::uint64_t seed, const Sizes&) {
    Rng rng(seed);
    double worst = 0.0;
    for (int rep = 0; rep < 30; ++rep) {
        const WnlsInstance inst = random_wnls(rng, 10, 4);
        auto [h, trace] = solve_wnls({inst.w, inst.d, inst.v, inst.h0}, 1e-6, 500);
        const double f0 = wnls_objective_value(inst.w, inst.d, inst.v, inst.h0);
        const double f1 = wnls_objective_value(inst.w, inst.d, inst.v, h);
        worst = std::max(worst, (f1 - f0) / std::max(f0, 1e-300));
    }
    return make_result("wnls.objective-never-worse-than-warm-start", worst, 1e-10);
}

PropertyResult check_wnls_oracle(std::uint64_t seed, const Sizes&) {
    Rng rng(seed);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const WnlsInstance inst = random_wnls(rng, 4, 3);  // m <= 6, r <= 3
        const std::vector<double> h = solve_polished(inst);
        const double f = wnls_objective_value(inst.w, inst.d, inst.v, h);
        const double oracle = wnls_active_set_oracle(inst.w, inst.d, inst.v);
        worst = std::max(worst, std::abs(f - oracle));
    }
    return make_result("wnls.active-set-oracle-equivalence", worst, 1e-6);
}

PropertyResult check_wnls_gradient(std::uint64_t seed, const Sizes&) {
    Rng rng(seed);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const WnlsInstance inst = random_wnls(rng, 8, 4);
        std::vector<double> z(inst.h0);
        for (auto& x : z) x = rng.uniform(0.0, 2.0);
        const std::vector<double> grad = wnls_gradient({inst.w, inst.d, inst.v, inst.h0}, z);
        const double step = 1e-6;
        for (std::size_t i = 0; i < z.size(); ++i) {
            std::vector<double> zp = z, zm = z;
            zp[i] += step;
            zm[i] -= step;
            const double fp = wnls_objective_value(inst.w, inst.d, inst.v, zp);
            const double fm = wnls_objective_value(inst.w, inst.d, inst.v, zm);
            const double fd = (fp - fm) / (2.0 * step);
            worst = std::max(worst, std::abs(fd - grad[i]) / std::max(1.0, std::abs(grad[i])));
        }
    }
    return make_result("wnls.gradient-matches-central-differences", worst, 1e-5);
}

PropertyResult check_wnls_weight_scaling(std::uint64_t seed, const Sizes&) {
    Rng rng(seed);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const WnlsInstance inst = random_wnls(rng, 8, 4);
        WnlsInstance scaled = inst;
        for (auto& x : scaled.d) x *= 7.25;
        auto [h1, t1] = solve_wnls({inst.w, inst.d, inst.v, inst.h0}, 1e-6, 500);
        auto [h2, t2] = solve_wnls({scaled.w, scaled.d, scaled.v, scaled.h0}, 1e-6, 500);
        for (std::size_t i = 0; i < h1.size(); ++i) {
            worst = std::max(worst, std::abs(h1[i] - h2[i]));
        }
    }
    return make_result("wnls.weight-scaling-invariance", worst, 1e-8);
}

// ---- hq-cauchy -------------------------------------------------------

struct DescentStats {
    double worst_ascent = -kInf;
    double worst_weight_dev = 0.0;
};

DescentStats run_descent_instances(std::uint64_t seed, const Sizes& sz) {
    DescentStats stats;
    stats.worst_ascent = 0.0;
    for (std::size_t inst = 0; inst < sz.descent_instances; ++inst) {
        const std::uint64_t s = Rng::derive(seed, inst);
        PlantedFactors data = gen_lowrank(sz.descent_dim, sz.descent_dim, sz.descent_rank, s);
        double high = 0.0;
        for (double x : data.v.data()) high = std::max(high, x);
        CorruptionSpec spec{SaltPepper{0.2, 0.0, high}, s + 1};
        const DenseMatrix v = corrupt(data.v, spec).corrupted;

        SolverConfig cfg;
        cfg.rank = sz.descent_rank;
        cfg.seed = s;
        cfg.max_outer = 25;
        IterationObserver obs = [&](const IterationRecord& rec) {
            stats.worst_ascent = std::max(stats.worst_ascent,
                                          rec.objective_end - rec.objective_start);
            stats.worst_weight_dev =
                std::max(stats.worst_weight_dev,
                         weight_consistency_discrepancy(rec.residual_start, rec.gamma,
                                                        rec.outliers, rec.weights));
        };
        factorize(v, cfg, obs);
    }
    return stats;
}

PropertyResult check_hq_descent(std::uint64_t seed, const Sizes& sz) {
    const DescentStats stats = run_descent_instances(seed, sz);
    return make_result("hq.per-step-descent", stats.worst_ascent, 1e-8,
                       "objective change at fixed per-step scale and outlier set");
}

PropertyResult check_hq_weight_consistency(std::uint64_t seed, const Sizes& sz) {
    const DescentStats stats = run_descent_instances(seed + 1, sz);
    return make_result("hq.weight-consistency", stats.worst_weight_dev, 0.0);
}

PropertyResult check_hq_reduces_to_cauchy(std::uint64_t seed, const Sizes& sz) {
    PlantedFactors data = gen_lowrank(sz.mat, sz.mat, sz.rank, seed);
    SolverConfig cfg;
    cfg.rank = sz.rank;
    cfg.seed = seed;
    cfg.max_outer = 20;
    cfg.scale_mode = ScaleMode::fixed;
    cfg.fixed_gamma = 1.2;
    cfg.truncation_mode = TruncationMode::none;
    const HqState state = factorize(data.v, cfg);
    const WeightFunction fn = WeightFunction::cauchy(1.2);
    double worst = 0.0;
    bool positive = true;
    for (std::size_t i = 0; i < state.weights.rows(); ++i) {
        for (std::size_t j = 0; j < state.weights.cols(); ++j) {
            positive = positive && state.weights(i, j) > 0.0;
            worst = std::max(worst, std::abs(state.weights(i, j) -
                                             baseline_weight(state.residual(i, j), fn)));
        }
    }
    if (!positive) worst = std::max(worst, 1.0);
    return make_result("hq.untruncated-fixed-scale-is-cauchy", worst, 0.0);
}

PropertyResult check_hq_thread_determinism(std::uint64_t seed, const Sizes& sz) {
    PlantedFactors data = gen_lowrank(sz.mat, sz.mat, sz.rank, seed);
    double high = 0.0;
    for (double x : data.v.data()) high = std::max(high, x);
    const DenseMatrix v = corrupt(data.v, {SaltPepper{0.15, 0.0, high}, seed}).corrupted;
    SolverConfig cfg;
    cfg.rank = sz.rank;
    cfg.seed = seed;
    cfg.max_outer = 10;

    ThreadEnvGuard guard;
    ::setenv("RNMF_THREADS", "1", 1);
    const HqState one = factorize(v, cfg);
    ::setenv("RNMF_THREADS", "4", 1);
    const HqState four = factorize(v, cfg);

    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < one.w.size(); ++i) {
        if (one.w.data()[i] != four.w.data()[i]) ++mismatches;
    }
    for (std::size_t i = 0; i < one.h.size(); ++i) {
        if (one.h.data()[i] != four.h.data()[i]) ++mismatches;
    }
    return make_result("hq.thread-count-determinism", static_cast<double>(mismatches), 0.0);
}

PropertyResult check_hq_complexity(std::uint64_t seed, const Sizes& sz) {
    auto per_iter_seconds = [&](std::size_t dim) {
        PlantedFactors data = gen_lowrank(dim, dim, sz.timing_rank, seed);
        double high = 0.0;
        for (double x : data.v.data()) high = std::max(high, x);
        const DenseMatrix v = corrupt(data.v, {SaltPepper{0.1, 0.0, high}, seed}).corrupted;
        SolverConfig cfg;
        cfg.rank = sz.timing_rank;
        cfg.seed = seed;
        cfg.max_outer = 10;
        cfg.max_inner = 30;
        cfg.eps2 = 1e-14;
        double best = kInf;
        for (int rep = 0; rep < 3; ++rep) {
            const auto t0 = std::chrono::steady_clock::now();
            const HqState state = factorize(v, cfg);
            const auto t1 = std::chrono::steady_clock::now();
            const double dt = std::chrono::duration<double>(t1 - t0).count() /
                              static_cast<double>(std::max<std::size_t>(1, state.outer_iter));
            best = std::min(best, dt);
        }
        return best;
    };
    ThreadEnvGuard guard;
    ::setenv("RNMF_THREADS", "1", 1);
    const double small = per_iter_seconds(sz.timing_small);
    const double large = per_iter_seconds(sz.timing_large);
    const double area_ratio = static_cast<double>(sz.timing_large * sz.timing_large) /
                              static_cast<double>(sz.timing_small * sz.timing_small);
    std::ostringstream note;
    note << "per-iteration time ratio at ~" << area_ratio << "x entries";
    return make_result("hq.per-iteration-cost-scaling", large / std::max(small, 1e-12), 2.5,
                       note.str());
}

PropertyResult check_hq_coefficient_bound(std::uint64_t seed, const Sizes& sz) {
    double worst = -1.0;
    std::size_t checked = 0;
    for (std::size_t inst = 0; inst < sz.bound_instances; ++inst) {
        const std::uint64_t s = Rng::derive(seed, 555 + inst);
        Rng rng(s);
        const std::size_t m = 8 + rng.below(12);
        const std::size_t n = 8 + rng.below(12);
        const std::size_t r = 1 + rng.below(3);
        PlantedFactors data = gen_lowrank(m, n, r, s);

        SolverConfig cfg;
        cfg.rank = r;
        cfg.seed = s;
        cfg.max_outer = 15;
        cfg.truncation_mode = TruncationMode::explicit_sigma;
        cfg.sigma = 5.0;
        const HqState state = factorize(data.v, cfg);

        auto [wn, scales] = normalize_columns(state.w);
        const DenseMatrix hn = scale_rows(state.h, scales);
        double alpha = 0.0;
        for (std::size_t j = 0; j < data.v.cols(); ++j) {
            double norm = 0.0;
            for (std::size_t i = 0; i < data.v.rows(); ++i) norm += data.v(i, j) * data.v(i, j);
            alpha = std::max(alpha, std::sqrt(norm));
        }
        const double bound = 2.0 * alpha + cfg.sigma * alpha / (std::sqrt(2.0) * state.gamma);
        for (std::size_t j = 0; j < hn.cols(); ++j) {
            double norm = 0.0;
            for (std::size_t i = 0; i < hn.rows(); ++i) norm += hn(i, j) * hn(i, j);
            norm = std::sqrt(norm);
            worst = std::max(worst, (norm - bound) / bound);
            if (!coefficient_bound_check(wn, hn.column(j), cfg.sigma, state.gamma, alpha)) {
                worst = std::max(worst, 1.0);
            }
            ++checked;
        }
    }
    return make_result("hq.coefficient-norm-bound", worst, 0.0,
                       std::to_string(checked) + " columns checked; negative margin means slack");
}

// ---- baselines -------------------------------------------------------

PropertyResult check_l2_monotone(std::uint64_t seed, const Sizes& sz) {
    PlantedFactors data = gen_lowrank(sz.mat, sz.mat, sz.rank, seed);
    BaselineConfig cfg;
    cfg.method = BaselineMethod::l2;
    cfg.rank = sz.rank;
    cfg.seed = seed;
    cfg.max_outer = 30;
    const BaselineResult res = factorize_baseline(data.v, cfg);
    double worst = 0.0;
    for (std::size_t t = 1; t < res.objective_trace.size(); ++t) {
        worst = std::max(worst, res.objective_trace[t] - res.objective_trace[t - 1]);
    }
    return make_result("baselines.l2-objective-monotone", worst, 1e-8);
}

PropertyResult check_uniform_weights(std::uint64_t, const Sizes&) {
    // All-equal residuals: the data-driven parameters (huber cutoff =
    // median, cim width = rms) equal the common magnitude, so every entry
    // must get the same weight.
    const double e = 0.7;
    const WeightFunction kinds[] = {
        WeightFunction::huber(e),
        WeightFunction::cim(e),
        WeightFunction::cauchy(1.3),
    };
    double worst = 0.0;
    for (const auto& fn : kinds) {
        const double w0 = baseline_weight(e, fn);
        const double w1 = baseline_weight(-e, fn);
        worst = std::max(worst, std::abs(w0 - w1));
    }
    return make_result("baselines.uniform-weights-on-equal-residuals", worst, 0.0);
}

PropertyResult check_cauchy_matches_hq(std::uint64_t seed, const Sizes& sz) {
    PlantedFactors data = gen_lowrank(sz.mat, sz.mat / 2 + 2, sz.rank, seed);
    BaselineConfig bc;
    bc.method = BaselineMethod::cauchy;
    bc.rank = sz.rank;
    bc.seed = seed;
    bc.max_outer = 15;
    const BaselineResult base = factorize_baseline(data.v, bc);

    SolverConfig hc;
    hc.rank = sz.rank;
    hc.seed = seed;
    hc.max_outer = 15;
    hc.scale_mode = ScaleMode::fixed;
    hc.truncation_mode = TruncationMode::none;
    const HqState hq = factorize(data.v, hc);

    double worst = 0.0;
    if (base.objective_trace.size() != hq.objective_trace.size()) {
        worst = 1.0;
    } else {
        for (std::size_t t = 0; t < base.objective_trace.size(); ++t) {
            worst = std::max(worst,
                             std::abs(base.objective_trace[t] - hq.objective_trace[t]));
        }
    }
    for (std::size_t i = 0; i < base.w.size(); ++i) {
        worst = std::max(worst, std::abs(base.w.data()[i] - hq.w.data()[i]));
    }
    return make_result("baselines.cauchy-equals-hq-untruncated", worst, 1e-10);
}

// ---- datagen ---------------------------------------------------------

PropertyResult check_mask_exactness(std::uint64_t seed, const Sizes&) {
    Rng rng(seed);
    const DenseMatrix v = random_matrix(rng, 64, 9, 0.0, 255.0);
    std::size_t violations = 0;

    auto audit = [&](const CorruptionResult& res) {
        std::vector<char> masked(v.size(), 0);
        for (const auto& [i, j] : res.mask) masked[i * v.cols() + j] = 1;
        for (std::size_t idx = 0; idx < v.size(); ++idx) {
            if (!masked[idx] && res.corrupted.data()[idx] != v.data()[idx]) ++violations;
        }
    };
    audit(corrupt(v, {SaltPepper{0.37, 0.0, 255.0}, seed}));
    audit(corrupt(v, {BlockOcclusion{3, 550.0}, seed}, std::make_pair(8u, 8u)));
    return make_result("datagen.mask-covers-all-changes", static_cast<double>(violations), 0.0);
}

PropertyResult check_nonneg_outputs(std::uint64_t seed, const Sizes&) {
    std::size_t violations = 0;
    const LineData line = gen_line({180, 0.2, 80, OutlierAxis::both, seed, 10.0});
    if (!line.v.all_nonneg() || !line.clean.all_nonneg()) ++violations;
    const PlantedFactors planted = gen_lowrank(30, 20, 4, seed);
    if (!planted.v.all_nonneg()) ++violations;
    Rng rng(seed);
    const DenseMatrix v = random_matrix(rng, 64, 6, 0.0, 30.0);
    if (!corrupt(v, {LaplaceNoise{50.0}, seed}).corrupted.all_nonneg()) ++violations;
    if (!corrupt(v, {SaltPepper{0.4, 0.0, 255.0}, seed}).corrupted.all_nonneg()) ++violations;
    if (!corrupt(v, {BlockOcclusion{4, 550.0}, seed}, std::make_pair(8u, 8u))
             .corrupted.all_nonneg()) {
        ++violations;
    }
    return make_result("datagen.outputs-nonnegative", static_cast<double>(violations), 0.0);
}

PropertyResult check_seed_determinism(std::uint64_t seed, const Sizes&) {
    std::size_t mismatches = 0;
    auto same = [&](const DenseMatrix& a, const DenseMatrix& b) {
        if (a.data() != b.data()) ++mismatches;
    };
    const SyntheticLineSpec ls{120, 0.2, 40, OutlierAxis::both, seed, 10.0};
    same(gen_line(ls).v, gen_line(ls).v);
    same(gen_lowrank(20, 30, 3, seed).v, gen_lowrank(20, 30, 3, seed).v);
    Rng rng(seed);
    const DenseMatrix v = random_matrix(rng, 32, 5, 0.0, 100.0);
    const CorruptionSpec sp{SaltPepper{0.3, 0.0, 255.0}, seed};
    same(corrupt(v, sp).corrupted, corrupt(v, sp).corrupted);
    const CorruptionSpec lp{LaplaceNoise{20.0}, seed};
    same(corrupt(v, lp).corrupted, corrupt(v, lp).corrupted);
    return make_result("datagen.seed-determinism", static_cast<double>(mismatches), 0.0);
}

// ---- eval ------------------------------------------------------------

PropertyResult check_metric_permutation_invariance(std::uint64_t seed, const Sizes&) {
    Rng rng(seed);
    const std::size_t n = 500, k = 7;
    LabelVector a(n), b(n);
    for (auto& x : a) x = static_cast<long long>(rng.below(k));
    for (auto& x : b) x = static_cast<long long>(rng.below(k));
    std::vector<long long> perm(k);
    for (std::size_t i = 0; i < k; ++i) perm[i] = static_cast<long long>((i * 3 + 1) % k);
    LabelVector ap(n);
    for (std::size_t i = 0; i < n; ++i) ap[i] = perm[static_cast<std::size_t>(a[i])];

    double worst = std::abs(accuracy(a, b) - accuracy(ap, b));
    worst = std::max(worst, std::abs(nmi(a, b) - nmi(ap, b)));
    return make_result("eval.metrics-permutation-invariant", worst, 1e-12);
}

PropertyResult check_accuracy_symmetry(std::uint64_t seed, const Sizes&) {
    Rng rng(seed);
    const std::size_t n = 400, k = 5;
    LabelVector a(n), b(n);
    for (auto& x : a) x = static_cast<long long>(rng.below(k));
    for (auto& x : b) x = static_cast<long long>(rng.below(k));
    const double worst = std::abs(accuracy(a, b) - accuracy(b, a));
    return make_result("eval.accuracy-symmetric", worst, 0.0);
}

PropertyResult check_kmeans_inertia(std::uint64_t seed, const Sizes& sz) {
    Rng rng(seed);
    const std::size_t n = sz.kmeans_points;
    DenseMatrix pts(3, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double base = static_cast<double>(j % 4) * 8.0;
        for (std::size_t d = 0; d < 3; ++d) pts(d, j) = base + rng.uniform(0.0, 1.0);
    }
    const KmeansResult res = kmeans_full(pts, 4, 3, seed);
    double worst = 0.0;
    for (std::size_t i = 1; i < res.inertia_trace.size(); ++i) {
        worst = std::max(worst, res.inertia_trace[i] - res.inertia_trace[i - 1]);
    }
    return make_result("eval.kmeans-inertia-monotone", worst, 1e-10);
}

}  // namespace

double weight_consistency_discrepancy(const DenseMatrix& e, double gamma, const IndexSet& outliers,
                                      const DenseMatrix& weights) {
    std::vector<char> mask(e.size(), 0);
    for (const auto& [i, j] : outliers) mask[i * e.cols() + j] = 1;
    double worst = 0.0;
    for (std::size_t i = 0; i < e.rows(); ++i) {
        for (std::size_t j = 0; j < e.cols(); ++j) {
            const double x = (e(i, j) / gamma) * (e(i, j) / gamma);
            const double expected = mask[i * e.cols() + j] ? 0.0 : hq_weight(x, kUnboundedSigma);
            worst = std::max(worst, std::abs(weights(i, j) - expected));
        }
    }
    return worst;
}

double wnls_objective_value(const DenseMatrix& w, std::span<const double> d,
                            std::span<const double> v, std::span<const double> h) {
    double total = 0.0;
    for (std::size_t i = 0; i < w.rows(); ++i) {
        double fit = 0.0;
        for (std::size_t k = 0; k < w.cols(); ++k) fit += w(i, k) * h[k];
        total += d[i] * (v[i] - fit) * (v[i] - fit);
    }
    return 0.5 * total;
}

double wnls_active_set_oracle(const DenseMatrix& w, std::span<const double> d,
                              std::span<const double> v) {
    const std::size_t r = w.cols();
    const std::size_t m = w.rows();
    double best = kInf;
    for (std::size_t subset = 0; subset < (1ull << r); ++subset) {
        std::vector<std::size_t> active;
        for (std::size_t k = 0; k < r; ++k) {
            if (subset & (1ull << k)) active.push_back(k);
        }
        const std::size_t s = active.size();
        std::vector<double> h(r, 0.0);
        if (s > 0) {
            // Normal equations restricted to the active coordinates,
            // solved by Gaussian elimination with partial pivoting.
            std::vector<std::vector<double>> aug(s, std::vector<double>(s + 1, 0.0));
            for (std::size_t i = 0; i < m; ++i) {
                if (d[i] == 0.0) continue;
                for (std::size_t p = 0; p < s; ++p) {
                    const double dw = d[i] * w(i, active[p]);
                    aug[p][s] += dw * v[i];
                    for (std::size_t q = 0; q < s; ++q) aug[p][q] += dw * w(i, active[q]);
                }
            }
            bool singular = false;
            for (std::size_t col = 0; col < s && !singular; ++col) {
                std::size_t pivot = col;
                for (std::size_t row = col + 1; row < s; ++row) {
                    if (std::abs(aug[row][col]) > std::abs(aug[pivot][col])) pivot = row;
                }
                if (std::abs(aug[pivot][col]) < 1e-12) {
                    singular = true;
                    break;
                }
                std::swap(aug[col], aug[pivot]);
                for (std::size_t row = col + 1; row < s; ++row) {
                    const double f = aug[row][col] / aug[col][col];
                    for (std::size_t q = col; q <= s; ++q) aug[row][q] -= f * aug[col][q];
                }
            }
            if (singular) continue;
            for (std::size_t col = s; col-- > 0;) {
                double acc = aug[col][s];
                for (std::size_t q = col + 1; q < s; ++q) acc -= aug[col][q] * h[active[q]];
                h[active[col]] = acc / aug[col][col];
            }
            bool feasible = true;
            for (std::size_t p = 0; p < s; ++p) {
                if (h[active[p]] < -1e-10) feasible = false;
                if (h[active[p]] < 0.0) h[active[p]] = 0.0;
            }
            if (!feasible) continue;
        }
        best = std::min(best, wnls_objective_value(w, d, v, h));
    }
    return best;
}

SuiteReport run_suite(std::uint64_t seed, SuiteScale scale) {
    const Sizes sz = sizes_for(scale);
    SuiteReport report;
    report.seed = seed;
    report.scale = scale;

    using Check = PropertyResult (*)(std::uint64_t, const Sizes&);
    const Check checks[] = {
        check_matmul_associativity,
        check_project_idempotent,
        check_spectral_norm_dominates,
        check_rng_determinism,
        check_hq_weight_identity,
        check_g_monotone_concave,
        check_truncated_equals_cauchy,
        check_weight_monotonicity,
        check_weight_range,
        check_wnls_monotone,
        check_wnls_oracle,
        check_wnls_gradient,
        check_wnls_weight_scaling,
        check_hq_descent,
        check_hq_weight_consistency,
        check_hq_reduces_to_cauchy,
        check_hq_thread_determinism,
        check_hq_complexity,
        check_hq_coefficient_bound,
        check_l2_monotone,
        check_uniform_weights,
        check_cauchy_matches_hq,
        check_mask_exactness,
        check_nonneg_outputs,
        check_seed_determinism,
        check_metric_permutation_invariance,
        check_accuracy_symmetry,
        check_kmeans_inertia,
    };

    std::uint64_t idx = 0;
    for (const Check check : checks) {
        const std::uint64_t check_seed = Rng::derive(seed, idx++);
        try {
            report.results.push_back(check(check_seed, sz));
        } catch (const std::exception& ex) {
            PropertyResult r;
            r.name = "check#" + std::to_string(idx - 1);
            r.discrepancy = kInf;
            r.tolerance = 0.0;
            r.pass = false;
            r.note = std::string("exception: ") + ex.what();
            report.results.push_back(std::move(r));
        }
    }
    return report;
}

}  // namespace rnmf
