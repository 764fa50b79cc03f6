// Command-line front end: synthetic data generation, corruption,
// factorization, clustering evaluation, and grid benchmarks. Matrices
// travel between subcommands as header-less CSV; reports are JSON with
// stable key order.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rnmf/baselines.hpp"
#include "rnmf/datagen.hpp"
#include "rnmf/eval.hpp"
#include "rnmf/hq_cauchy.hpp"
#include "rnmf/io.hpp"
#include "rnmf/parallel.hpp"
#include "rnmf/property_suite.hpp"
#include "rnmf/rng.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void ensure_dir(const fs::path& dir) {
    if (dir.empty()) return;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::is_directory(dir)) {
        throw std::runtime_error("cannot create output directory " + dir.string() + ": " +
                                 ec.message());
    }
}

std::pair<std::size_t, std::size_t> parse_shape(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos) {
        throw CLI::ValidationError("--image-shape", "expected HEIGHTxWIDTH, e.g. 32x32");
    }
    return {std::stoull(text.substr(0, x)), std::stoull(text.substr(x + 1))};
}

std::string percent_display(double mean_value, double std_value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f(%.2f)", 100.0 * mean_value, 100.0 * std_value);
    return buf;
}

void write_json(const fs::path& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << doc.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

// ---- synth -----------------------------------------------------------

struct SynthLineOpts {
    std::size_t n = 180;
    double slope = 0.2;
    std::size_t outliers = 0;
    std::string axis = "both";
    double x_max = 10.0;
    std::uint64_t seed = 0;
    std::string out = ".";
};

void run_synth_line(const SynthLineOpts& o) {
    rnmf::SyntheticLineSpec spec;
    spec.n_points = o.n;
    spec.slope = o.slope;
    spec.n_outliers = o.outliers;
    spec.seed = o.seed;
    spec.x_max = o.x_max;
    spec.axis = o.axis == "x"   ? rnmf::OutlierAxis::x
                : o.axis == "y" ? rnmf::OutlierAxis::y
                                : rnmf::OutlierAxis::both;
    const rnmf::LineData data = rnmf::gen_line(spec);
    ensure_dir(o.out);
    rnmf::write_matrix_csv(fs::path(o.out) / "V.csv", data.v);
    rnmf::write_matrix_csv(fs::path(o.out) / "clean.csv", data.clean);
    std::ofstream out(fs::path(o.out) / "outliers.csv");
    if (!out) throw std::runtime_error("cannot write outliers.csv");
    for (std::size_t j : data.outlier_columns) out << j << '\n';
    std::cout << "wrote V.csv (2x" << o.n << "), clean.csv, outliers.csv under " << o.out << "\n";
}

struct SynthLowrankOpts {
    std::size_t m = 50, n = 80, rank = 5;
    std::uint64_t seed = 0;
    std::string out = ".";
};

void run_synth_lowrank(const SynthLowrankOpts& o) {
    const rnmf::PlantedFactors data = rnmf::gen_lowrank(o.m, o.n, o.rank, o.seed);
    ensure_dir(o.out);
    rnmf::write_matrix_csv(fs::path(o.out) / "V.csv", data.v);
    rnmf::write_matrix_csv(fs::path(o.out) / "clean.csv", data.v);
    rnmf::write_matrix_csv(fs::path(o.out) / "W_true.csv", data.w_true);
    rnmf::write_matrix_csv(fs::path(o.out) / "H_true.csv", data.h_true);
    // Planted cluster labels: the dominant coefficient of each column.
    rnmf::LabelVector labels(o.n, 0);
    for (std::size_t j = 0; j < o.n; ++j) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < o.rank; ++k) {
            if (data.h_true(k, j) > data.h_true(best, j)) best = k;
        }
        labels[j] = static_cast<long long>(best);
    }
    rnmf::write_labels_csv(fs::path(o.out) / "labels.csv", labels);
    std::cout << "wrote V.csv (" << o.m << "x" << o.n
              << "), clean.csv, W_true.csv, H_true.csv, labels.csv under " << o.out << "\n";
}

// ---- corrupt ---------------------------------------------------------

struct CorruptOpts {
    std::string input;
    std::string kind = "salt-pepper";
    double p = 0.1;
    double low = 0.0;
    double high = 255.0;
    double delta = 40.0;
    std::size_t b = 10;
    double fill = 550.0;
    std::string image_shape;
    std::uint64_t seed = 0;
    std::string out = ".";
};

void run_corrupt(const CorruptOpts& o) {
    const rnmf::DenseMatrix v = rnmf::load_matrix(o.input);
    rnmf::CorruptionSpec spec{rnmf::SaltPepper{o.p, o.low, o.high}, o.seed};
    std::optional<std::pair<std::size_t, std::size_t>> shape;
    if (o.kind == "laplace") {
        spec.kind = rnmf::LaplaceNoise{o.delta};
    } else if (o.kind == "block") {
        if (o.image_shape.empty()) {
            throw CLI::ValidationError("--image-shape", "required for --kind block");
        }
        spec.kind = rnmf::BlockOcclusion{o.b, o.fill};
        shape = parse_shape(o.image_shape);
    } else if (o.kind != "salt-pepper") {
        throw CLI::ValidationError("--kind", "must be laplace, salt-pepper, or block");
    }
    const rnmf::CorruptionResult res = rnmf::corrupt(v, spec, shape);
    ensure_dir(o.out);
    rnmf::write_matrix_csv(fs::path(o.out) / "corrupted.csv", res.corrupted);
    rnmf::write_index_csv(fs::path(o.out) / "mask.csv", res.mask);
    std::cout << "wrote corrupted.csv and mask.csv (" << res.mask.size() << " entries) under "
              << o.out << "\n";
}

// ---- factorize -------------------------------------------------------

struct FactorizeOpts {
    std::string input;
    std::string method = "truncated-cauchy";
    std::size_t rank = 2;
    double eps1 = 1e-6, eps2 = 1e-6;
    std::size_t max_outer = 500, max_inner = 500;
    std::string scale = "nagy";
    std::string truncation = "robust-stat";
    double gamma_min = 0.0;
    std::size_t burn_in = 1;
    double gamma = 0.0;  // fixed scale for the cauchy baseline
    std::uint64_t seed = 0;
    std::string out = ".";
};

rnmf::BaselineMethod baseline_from_name(const std::string& name) {
    if (name == "l2") return rnmf::BaselineMethod::l2;
    if (name == "l1") return rnmf::BaselineMethod::l1;
    if (name == "l21") return rnmf::BaselineMethod::l21;
    if (name == "huber") return rnmf::BaselineMethod::huber;
    if (name == "cim") return rnmf::BaselineMethod::cim;
    if (name == "cauchy") return rnmf::BaselineMethod::cauchy;
    throw CLI::ValidationError("--method",
                               "must be truncated-cauchy, cauchy, l2, l1, l21, huber, or cim");
}

void write_trace_csv(const fs::path& path, const std::vector<double>& objective,
                     const std::vector<double>& gamma,
                     const std::vector<std::size_t>& outliers) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "iteration,objective,gamma,n_outliers\n";
    char buf[64];
    for (std::size_t t = 0; t < objective.size(); ++t) {
        std::snprintf(buf, sizeof(buf), "%.17g", objective[t]);
        out << t << ',' << buf << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", t < gamma.size() ? gamma[t] : 0.0);
        out << buf << ',' << (t < outliers.size() ? outliers[t] : 0) << '\n';
    }
}

void run_factorize(const FactorizeOpts& o) {
    const rnmf::DenseMatrix v = rnmf::load_matrix(o.input);
    ensure_dir(o.out);
    const double t0 = now_seconds();

    json meta;
    meta["command"] = "factorize";
    meta["input"] = o.input;
    meta["rows"] = v.rows();
    meta["cols"] = v.cols();
    meta["method"] = o.method;
    meta["rank"] = o.rank;
    meta["eps1"] = o.eps1;
    meta["eps2"] = o.eps2;
    meta["max_outer"] = o.max_outer;
    meta["max_inner"] = o.max_inner;
    meta["seed"] = o.seed;
    meta["threads"] = rnmf::thread_count_from_env();

    if (o.method == "truncated-cauchy") {
        rnmf::SolverConfig cfg;
        cfg.rank = o.rank;
        cfg.eps1 = o.eps1;
        cfg.eps2 = o.eps2;
        cfg.max_outer = o.max_outer;
        cfg.max_inner = o.max_inner;
        cfg.seed = o.seed;
        cfg.gamma_min = o.gamma_min;
        cfg.burn_in = o.burn_in;
        if (o.scale == "nagy") {
            cfg.scale_mode = rnmf::ScaleMode::nagy;
        } else if (o.scale.rfind("fixed", 0) == 0) {
            cfg.scale_mode = rnmf::ScaleMode::fixed;
            const auto colon = o.scale.find(':');
            if (colon != std::string::npos) cfg.fixed_gamma = std::stod(o.scale.substr(colon + 1));
        } else {
            throw CLI::ValidationError("--scale", "must be nagy or fixed[:GAMMA]");
        }
        if (o.truncation == "robust-stat") {
            cfg.truncation_mode = rnmf::TruncationMode::robust_stat;
        } else if (o.truncation.rfind("explicit:", 0) == 0) {
            cfg.truncation_mode = rnmf::TruncationMode::explicit_sigma;
            cfg.sigma = std::stod(o.truncation.substr(9));
        } else if (o.truncation == "none") {
            cfg.truncation_mode = rnmf::TruncationMode::none;
        } else {
            throw CLI::ValidationError("--truncation", "must be robust-stat, explicit:SIGMA, or none");
        }

        const rnmf::HqState state = rnmf::factorize(v, cfg);
        rnmf::write_matrix_csv(fs::path(o.out) / "W.csv", state.w);
        rnmf::write_matrix_csv(fs::path(o.out) / "H.csv", state.h);
        write_trace_csv(fs::path(o.out) / "trace.csv", state.objective_trace, state.gamma_trace,
                        state.outlier_count_trace);

        meta["scale_mode"] = o.scale;
        meta["truncation_mode"] = o.truncation;
        meta["gamma_min"] = o.gamma_min;
        meta["burn_in"] = o.burn_in;
        meta["outer_iterations"] = state.outer_iter;
        meta["termination"] = rnmf::to_string(state.termination);
        meta["final_gamma"] = state.gamma;
        meta["final_outliers"] = state.outliers.size();
        meta["final_objective"] =
            state.objective_trace.empty() ? 0.0 : state.objective_trace.back();
    } else {
        rnmf::BaselineConfig cfg;
        cfg.method = baseline_from_name(o.method);
        cfg.rank = o.rank;
        cfg.eps1 = o.eps1;
        cfg.eps2 = o.eps2;
        cfg.max_outer = o.max_outer;
        cfg.max_inner = o.max_inner;
        cfg.seed = o.seed;
        cfg.cauchy_gamma = o.gamma;

        const rnmf::BaselineResult res = rnmf::factorize_baseline(v, cfg);
        rnmf::write_matrix_csv(fs::path(o.out) / "W.csv", res.w);
        rnmf::write_matrix_csv(fs::path(o.out) / "H.csv", res.h);
        write_trace_csv(fs::path(o.out) / "trace.csv", res.objective_trace, {}, {});

        meta["cauchy_gamma"] = o.gamma;
        meta["outer_iterations"] = res.outer_iter;
        meta["termination"] = rnmf::to_string(res.termination);
        meta["final_objective"] =
            res.objective_trace.empty() ? 0.0 : res.objective_trace.back();
    }
    meta["runtime_seconds"] = now_seconds() - t0;
    write_json(fs::path(o.out) / "meta.json", meta);
    std::cout << "wrote W.csv, H.csv, trace.csv, meta.json under " << o.out << "\n";
}

// ---- eval ------------------------------------------------------------

struct EvalOpts {
    std::string h_path;
    std::string truth_path;
    std::size_t k = 0;  // 0: number of distinct truth labels
    std::size_t trials = 10;
    std::size_t restarts = 10;
    std::uint64_t seed = 0;
    std::string clean_path;
    std::string w_path;
    std::string nmi_mode = "geometric";
    std::string out = "report.json";
};

void run_eval(const EvalOpts& o) {
    const rnmf::DenseMatrix h = rnmf::read_matrix_csv(o.h_path);
    const rnmf::LabelVector truth = rnmf::read_labels_csv(o.truth_path);
    if (truth.size() != h.cols()) {
        throw std::runtime_error("eval: " + std::to_string(truth.size()) + " labels for " +
                                 std::to_string(h.cols()) + " coefficient columns");
    }
    std::size_t k = o.k;
    if (k == 0) {
        rnmf::LabelVector sorted = truth;
        std::sort(sorted.begin(), sorted.end());
        k = static_cast<std::size_t>(
            std::unique(sorted.begin(), sorted.end()) - sorted.begin());
    }
    if (o.nmi_mode != "geometric" && o.nmi_mode != "arithmetic") {
        throw CLI::ValidationError("--nmi-mode", "must be geometric or arithmetic");
    }
    rnmf::ClusterReport report = rnmf::cluster_report(h, truth, k, o.trials, o.restarts, o.seed);
    if (o.nmi_mode == "arithmetic") {
        // Rescore the trials under the arithmetic-mean normalization.
        std::vector<double> nmis;
        for (std::size_t t = 0; t < report.trials; ++t) {
            const rnmf::LabelVector labels =
                rnmf::kmeans(h, k, o.restarts, rnmf::Rng::derive(o.seed, 1000 + t));
            report.per_trial[t].nmi = rnmf::nmi_arithmetic(labels, truth);
            nmis.push_back(report.per_trial[t].nmi);
        }
        double mean = 0.0;
        for (double x : nmis) mean += x;
        mean /= static_cast<double>(nmis.size());
        double var = 0.0;
        for (double x : nmis) var += (x - mean) * (x - mean);
        report.nmi_mean = mean;
        report.nmi_std = std::sqrt(var / static_cast<double>(nmis.size()));
    }
    if (!o.clean_path.empty() && !o.w_path.empty()) {
        const rnmf::DenseMatrix clean = rnmf::load_matrix(o.clean_path);
        const rnmf::DenseMatrix w = rnmf::read_matrix_csv(o.w_path);
        report.rel_error = rnmf::rel_error(clean, w, h);
        report.has_rel_error = true;
    }

    json doc;
    doc["trials"] = report.trials;
    doc["k"] = k;
    doc["nmi_mode"] = o.nmi_mode;
    doc["accuracy"] = {{"mean", report.accuracy_mean},
                       {"std", report.accuracy_std},
                       {"display", percent_display(report.accuracy_mean, report.accuracy_std)}};
    doc["nmi"] = {{"mean", report.nmi_mean},
                  {"std", report.nmi_std},
                  {"display", percent_display(report.nmi_mean, report.nmi_std)}};
    if (report.has_rel_error) {
        doc["rel_error"] = report.rel_error;
    } else {
        doc["rel_error"] = nullptr;
    }
    json trials = json::array();
    for (const auto& t : report.per_trial) {
        trials.push_back({{"accuracy", t.accuracy}, {"nmi", t.nmi}});
    }
    doc["per_trial"] = trials;
    write_json(o.out, doc);
    std::cout << "accuracy " << percent_display(report.accuracy_mean, report.accuracy_std)
              << "  nmi " << percent_display(report.nmi_mean, report.nmi_std) << "  -> " << o.out
              << "\n";
}

// ---- bench -----------------------------------------------------------

struct BenchOpts {
    bool suite = false;
    std::string scale = "quick";
    std::string methods = "l2,truncated-cauchy";
    std::string kind = "salt-pepper";
    std::string levels = "0.1,0.3,0.5";
    std::size_t m = 64, n = 48, rank = 4;
    std::size_t trials = 1;
    std::size_t k = 0;
    std::size_t restarts = 10;
    std::size_t max_outer = 100;
    double fill = 550.0;
    std::string image_shape;
    std::uint64_t seed = 0;
    std::string out = "bench.csv";
};

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) out.push_back(token);
    }
    return out;
}

void run_suite_report(const BenchOpts& o) {
    const rnmf::SuiteScale scale =
        o.scale == "full" ? rnmf::SuiteScale::full : rnmf::SuiteScale::quick;
    const rnmf::SuiteReport report = rnmf::run_suite(o.seed, scale);
    json doc;
    doc["seed"] = report.seed;
    doc["scale"] = o.scale;
    doc["all_pass"] = report.all_pass();
    json items = json::array();
    for (const auto& r : report.results) {
        items.push_back({{"name", r.name},
                         {"discrepancy", r.discrepancy},
                         {"tolerance", r.tolerance},
                         {"pass", r.pass},
                         {"note", r.note}});
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "  discrepancy=" << r.discrepancy
                  << " tolerance=" << r.tolerance << "\n";
    }
    doc["properties"] = items;
    write_json(o.out, doc);
    std::cout << (report.all_pass() ? "suite: all properties pass" : "suite: FAILURES present")
              << "  -> " << o.out << "\n";
}

void run_bench(const BenchOpts& o) {
    if (o.suite) {
        run_suite_report(o);
        return;
    }
    const std::vector<std::string> methods = split_commas(o.methods);
    const std::vector<std::string> levels = split_commas(o.levels);
    if (methods.empty() || levels.empty()) {
        throw CLI::ValidationError("--methods/--levels", "need at least one entry each");
    }
    std::optional<std::pair<std::size_t, std::size_t>> shape;
    if (o.kind == "block") {
        if (o.image_shape.empty()) {
            throw CLI::ValidationError("--image-shape", "required for --kind block");
        }
        shape = parse_shape(o.image_shape);
    }

    std::ofstream out(o.out);
    if (!out) throw std::runtime_error("cannot write " + o.out);
    out << "method,kind,level,trial,accuracy,nmi,rel_error,runtime_s,status\n";

    std::size_t cell = 0;
    for (const std::string& level_text : levels) {
        for (const std::string& method : methods) {
            for (std::size_t trial = 0; trial < o.trials; ++trial, ++cell) {
                const std::uint64_t cell_seed = rnmf::Rng::derive(o.seed, cell);
                const double t0 = now_seconds();
                std::string status = "ok";
                double acc = std::nan(""), mi = std::nan(""), err = std::nan("");
                try {
                    const double level = std::stod(level_text);
                    const rnmf::PlantedFactors data =
                        rnmf::gen_lowrank(o.m, o.n, o.rank, cell_seed);
                    double high = 0.0;
                    for (double x : data.v.data()) high = std::max(high, x);

                    rnmf::CorruptionSpec spec{rnmf::SaltPepper{level, 0.0, high}, cell_seed + 1};
                    if (o.kind == "laplace") {
                        spec.kind = rnmf::LaplaceNoise{level};
                    } else if (o.kind == "block") {
                        spec.kind =
                            rnmf::BlockOcclusion{static_cast<std::size_t>(level), o.fill};
                    } else if (o.kind != "salt-pepper") {
                        throw std::runtime_error("unknown corruption kind " + o.kind);
                    }
                    const rnmf::DenseMatrix v = rnmf::corrupt(data.v, spec, shape).corrupted;

                    rnmf::DenseMatrix w, h;
                    if (method == "truncated-cauchy") {
                        rnmf::SolverConfig cfg;
                        cfg.rank = o.rank;
                        cfg.seed = cell_seed;
                        cfg.max_outer = o.max_outer;
                        rnmf::HqState state = rnmf::factorize(v, cfg);
                        w = std::move(state.w);
                        h = std::move(state.h);
                    } else {
                        rnmf::BaselineConfig cfg;
                        cfg.method = baseline_from_name(method);
                        cfg.rank = o.rank;
                        cfg.seed = cell_seed;
                        cfg.max_outer = o.max_outer;
                        rnmf::BaselineResult res = rnmf::factorize_baseline(v, cfg);
                        w = std::move(res.w);
                        h = std::move(res.h);
                    }
                    err = rnmf::rel_error(data.v, w, h);

                    rnmf::LabelVector truth(o.n, 0);
                    for (std::size_t j = 0; j < o.n; ++j) {
                        std::size_t best = 0;
                        for (std::size_t r = 1; r < o.rank; ++r) {
                            if (data.h_true(r, j) > data.h_true(best, j)) best = r;
                        }
                        truth[j] = static_cast<long long>(best);
                    }
                    const std::size_t k = o.k == 0 ? o.rank : o.k;
                    const rnmf::LabelVector pred =
                        rnmf::kmeans(h, k, o.restarts, cell_seed + 2);
                    acc = rnmf::accuracy(pred, truth);
                    mi = rnmf::nmi(pred, truth);
                } catch (const std::exception& ex) {
                    std::string msg = ex.what();
                    for (char& c : msg) {
                        if (c == ',' || c == '\n') c = ';';
                    }
                    status = "error: " + msg;
                }
                char buf[256];
                std::snprintf(buf, sizeof(buf), "%s,%s,%s,%zu,%.6g,%.6g,%.6g,%.3f,%s\n",
                              method.c_str(), o.kind.c_str(), level_text.c_str(), trial, acc, mi,
                              err, now_seconds() - t0, status.c_str());
                out << buf;
            }
        }
    }
    if (!out) throw std::runtime_error("write failed: " + o.out);
    std::cout << "wrote " << levels.size() * methods.size() * o.trials << " rows -> " << o.out
              << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rnmf: robust non-negative matrix factorization experiments"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate synthetic datasets");
    synth->require_subcommand(1);
    SynthLineOpts line_opts;
    auto* line = synth->add_subcommand("line", "2-D points on a line with outliers");
    line->add_option("--n", line_opts.n, "number of points");
    line->add_option("--slope", line_opts.slope, "line slope");
    line->add_option("--outliers", line_opts.outliers, "number of contaminated points");
    line->add_option("--axis", line_opts.axis, "contaminated coordinate: x, y, or both");
    line->add_option("--x-max", line_opts.x_max, "inlier x range");
    line->add_option("--seed", line_opts.seed, "random seed");
    line->add_option("--out", line_opts.out, "output directory");
    line->callback([&] { run_synth_line(line_opts); });

    SynthLowrankOpts low_opts;
    auto* low = synth->add_subcommand("lowrank", "planted low-rank matrix");
    low->add_option("--m", low_opts.m, "rows");
    low->add_option("--n", low_opts.n, "columns");
    low->add_option("--rank", low_opts.rank, "planted rank");
    low->add_option("--seed", low_opts.seed, "random seed");
    low->add_option("--out", low_opts.out, "output directory");
    low->callback([&] { run_synth_lowrank(low_opts); });

    // corrupt
    CorruptOpts corrupt_opts;
    auto* corr = app.add_subcommand("corrupt", "apply seeded corruption to a matrix");
    corr->add_option("--input", corrupt_opts.input, "matrix CSV or PGM directory")->required();
    corr->add_option("--kind", corrupt_opts.kind, "laplace, salt-pepper, or block");
    corr->add_option("--p", corrupt_opts.p, "salt-pepper: fraction of entries per column");
    corr->add_option("--low", corrupt_opts.low, "salt-pepper: pepper value");
    corr->add_option("--high", corrupt_opts.high, "salt-pepper: salt value");
    corr->add_option("--delta", corrupt_opts.delta, "laplace: noise scale");
    corr->add_option("--b", corrupt_opts.b, "block: side length");
    corr->add_option("--fill", corrupt_opts.fill, "block: fill value");
    corr->add_option("--image-shape", corrupt_opts.image_shape, "block: HEIGHTxWIDTH per column");
    corr->add_option("--seed", corrupt_opts.seed, "random seed");
    corr->add_option("--out", corrupt_opts.out, "output directory");
    corr->callback([&] { run_corrupt(corrupt_opts); });

    // factorize
    FactorizeOpts fac_opts;
    auto* fac = app.add_subcommand("factorize", "factorize a matrix with a chosen method");
    fac->add_option("--input", fac_opts.input, "matrix CSV or PGM directory")->required();
    fac->add_option("--method", fac_opts.method,
                    "truncated-cauchy, cauchy, l2, l1, l21, huber, or cim");
    fac->add_option("--rank", fac_opts.rank, "factorization rank")->required();
    fac->add_option("--eps1", fac_opts.eps1, "inner tolerance");
    fac->add_option("--eps2", fac_opts.eps2, "outer tolerance");
    fac->add_option("--max-outer", fac_opts.max_outer, "outer iteration cap");
    fac->add_option("--max-inner", fac_opts.max_inner, "inner iteration cap");
    fac->add_option("--scale", fac_opts.scale, "nagy or fixed:GAMMA");
    fac->add_option("--truncation", fac_opts.truncation, "robust-stat, explicit:SIGMA, or none");
    fac->add_option("--gamma-min", fac_opts.gamma_min, "scale floor (0: auto)");
    fac->add_option("--burn-in", fac_opts.burn_in, "first outlier-rejection iteration");
    fac->add_option("--gamma", fac_opts.gamma, "cauchy baseline scale (0: median residual)");
    fac->add_option("--seed", fac_opts.seed, "random seed");
    fac->add_option("--out", fac_opts.out, "output directory");
    fac->callback([&] { run_factorize(fac_opts); });

    // eval
    EvalOpts eval_opts;
    auto* ev = app.add_subcommand("eval", "cluster coefficients and score against labels");
    ev->add_option("--coeffs", eval_opts.h_path, "coefficient matrix H.csv")->required();
    ev->add_option("--truth", eval_opts.truth_path, "ground-truth labels, one per line")
        ->required();
    ev->add_option("--k", eval_opts.k, "clusters (0: distinct truth labels)");
    ev->add_option("--trials", eval_opts.trials, "repeated clustering trials");
    ev->add_option("--restarts", eval_opts.restarts, "k-means restarts per trial");
    ev->add_option("--seed", eval_opts.seed, "random seed");
    ev->add_option("--clean", eval_opts.clean_path, "clean matrix for rel_error");
    ev->add_option("--w", eval_opts.w_path, "basis matrix for rel_error");
    ev->add_option("--nmi-mode", eval_opts.nmi_mode,
                   "entropy normalization: geometric or arithmetic");
    ev->add_option("--out", eval_opts.out, "report path");
    ev->callback([&] { run_eval(eval_opts); });

    // bench
    BenchOpts bench_opts;
    auto* bench = app.add_subcommand("bench", "corruption grids or the property suite");
    bench->add_flag("--suite", bench_opts.suite, "run the cross-module property suite");
    bench->add_option("--scale", bench_opts.scale, "suite scale: quick or full");
    bench->add_option("--methods", bench_opts.methods, "comma-separated method list");
    bench->add_option("--kind", bench_opts.kind, "corruption kind for the grid");
    bench->add_option("--levels", bench_opts.levels, "comma-separated corruption levels");
    bench->add_option("--m", bench_opts.m, "planted rows");
    bench->add_option("--n", bench_opts.n, "planted columns");
    bench->add_option("--rank", bench_opts.rank, "planted rank");
    bench->add_option("--trials", bench_opts.trials, "trials per grid cell");
    bench->add_option("--k", bench_opts.k, "clusters (0: rank)");
    bench->add_option("--restarts", bench_opts.restarts, "k-means restarts");
    bench->add_option("--max-outer", bench_opts.max_outer, "outer iteration cap");
    bench->add_option("--fill", bench_opts.fill, "block fill value");
    bench->add_option("--image-shape", bench_opts.image_shape, "block: HEIGHTxWIDTH");
    bench->add_option("--seed", bench_opts.seed, "random seed");
    bench->add_option("--out", bench_opts.out, "output CSV / JSON path");
    bench->callback([&] { run_bench(bench_opts); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
