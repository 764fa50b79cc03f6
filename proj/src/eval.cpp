#include "rnmf/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "rnmf/rng.hpp"

namespace rnmf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sq_dist(const DenseMatrix& h, std::size_t col, const std::vector<double>& center) {
    double s = 0.0;
    for (std::size_t d = 0; d < h.rows(); ++d) {
        const double diff = h(d, col) - center[d];
        s += diff * diff;
    }
    return s;
}

// One k-means run: k-means++ seeding then Lloyd sweeps until the
// assignment stabilizes.
KmeansResult kmeans_once(const DenseMatrix& h, std::size_t k, Rng rng) {
    const std::size_t n = h.cols();
    const std::size_t dim = h.rows();

    std::vector<std::vector<double>> centers;
    centers.reserve(k);
    std::vector<char> chosen(n, 0);
    {
        const std::size_t first = rng.below(n);
        centers.push_back(h.column(first));
        chosen[first] = 1;
    }
    std::vector<double> dist2(n, kInf);
    while (centers.size() < k) {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            dist2[j] = std::min(dist2[j], sq_dist(h, j, centers.back()));
            total += dist2[j];
        }
        std::size_t pick = n;
        if (total > 0.0) {
            const double target = rng.uniform01() * total;
            double cum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                cum += dist2[j];
                if (cum >= target) {
                    pick = j;
                    break;
                }
            }
            if (pick == n) pick = n - 1;
        } else {
            // All remaining mass is zero (duplicate points); take the first
            // unused index.
            for (std::size_t j = 0; j < n; ++j) {
                if (!chosen[j]) {
                    pick = j;
                    break;
                }
            }
            if (pick == n) pick = 0;
        }
        chosen[pick] = 1;
        centers.push_back(h.column(pick));
    }

    KmeansResult res;
    res.labels.assign(n, 0);
    std::vector<long long> prev(n, -1);
    for (std::size_t sweep = 0; sweep < 300; ++sweep) {
        double inertia = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double best = kInf;
            long long best_c = 0;
            for (std::size_t c = 0; c < k; ++c) {
                const double d = sq_dist(h, j, centers[c]);
                if (d < best) {
                    best = d;
                    best_c = static_cast<long long>(c);
                }
            }
            res.labels[j] = best_c;
            inertia += best;
        }
        res.inertia = inertia;
        res.inertia_trace.push_back(inertia);
        if (res.labels == prev) break;
        prev = res.labels;

        std::vector<std::size_t> counts(k, 0);
        for (auto& c : centers) std::fill(c.begin(), c.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const auto c = static_cast<std::size_t>(res.labels[j]);
            ++counts[c];
            for (std::size_t d = 0; d < dim; ++d) centers[c][d] += h(d, j);
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            for (double& x : centers[c]) x /= static_cast<double>(counts[c]);
        }
        // An emptied cluster is reseeded with the point currently farthest
        // from its own centroid (first such point on ties).
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] != 0) continue;
            double far = -1.0;
            std::size_t far_j = 0;
            for (std::size_t j = 0; j < n; ++j) {
                const double d = sq_dist(h, j, centers[static_cast<std::size_t>(res.labels[j])]);
                if (d > far) {
                    far = d;
                    far_j = j;
                }
            }
            centers[c] = h.column(far_j);
        }
    }
    return res;
}

std::vector<std::size_t> dense_ids(const LabelVector& labels, std::size_t& k_out) {
    std::map<long long, std::size_t> ids;
    std::vector<std::size_t> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = ids.emplace(labels[i], ids.size());
        out[i] = it->second;
    }
    k_out = ids.size();
    return out;
}

// Exact min-cost assignment on a square matrix (augmenting paths with
// potentials). Returns the column matched to each row.
std::vector<std::size_t> assignment_min(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = match[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n, 0);
    for (std::size_t j = 1; j <= n; ++j) {
        if (match[j] != 0) row_to_col[match[j] - 1] = j - 1;
    }
    return row_to_col;
}

std::vector<std::vector<double>> contingency(const std::vector<std::size_t>& a, std::size_t ka,
                                             const std::vector<std::size_t>& b, std::size_t kb) {
    std::vector<std::vector<double>> table(ka, std::vector<double>(kb, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i) table[a[i]][b[i]] += 1.0;
    return table;
}

void require_same_length(const LabelVector& pred, const LabelVector& truth, const char* op) {
    if (pred.size() != truth.size()) {
        throw std::invalid_argument(std::string(op) + ": label length mismatch, " +
                                    std::to_string(pred.size()) + " vs " +
                                    std::to_string(truth.size()));
    }
    if (pred.empty()) throw std::invalid_argument(std::string(op) + ": empty labelings");
}

double entropy(const std::vector<double>& counts, double n) {
    double h = 0.0;
    for (double c : counts) {
        if (c > 0.0) h -= (c / n) * std::log(c / n);
    }
    return h;
}

double nmi_impl(const LabelVector& pred, const LabelVector& truth, bool geometric) {
    require_same_length(pred, truth, "nmi");
    std::size_t kp = 0, kt = 0;
    const auto a = dense_ids(pred, kp);
    const auto b = dense_ids(truth, kt);
    const auto table = contingency(a, kp, b, kt);
    const double n = static_cast<double>(pred.size());

    std::vector<double> row(kp, 0.0), col(kt, 0.0);
    for (std::size_t i = 0; i < kp; ++i)
        for (std::size_t j = 0; j < kt; ++j) {
            row[i] += table[i][j];
            col[j] += table[i][j];
        }
    const double hp = entropy(row, n);
    const double ht = entropy(col, n);
    if (hp == 0.0 || ht == 0.0) {
        // A constant labeling carries no information; identical-up-to-
        // renaming still counts as full agreement.
        const bool identical = kp == kt && [&] {
            for (std::size_t i = 0; i < kp; ++i) {
                std::size_t nonzero = 0;
                for (std::size_t j = 0; j < kt; ++j) {
                    if (table[i][j] > 0.0) ++nonzero;
                }
                if (nonzero != 1) return false;
            }
            return true;
        }();
        return identical ? 1.0 : 0.0;
    }
    double info = 0.0;
    for (std::size_t i = 0; i < kp; ++i) {
        for (std::size_t j = 0; j < kt; ++j) {
            const double c = table[i][j];
            if (c > 0.0) info += (c / n) * std::log(c * n / (row[i] * col[j]));
        }
    }
    const double denom = geometric ? std::sqrt(hp * ht) : 0.5 * (hp + ht);
    return std::clamp(info / denom, 0.0, 1.0);
}

}  // namespace

KmeansResult kmeans_full(const DenseMatrix& h, std::size_t k, std::size_t restarts,
                         std::uint64_t seed) {
    if (k == 0 || k > h.cols()) {
        throw std::invalid_argument("kmeans: k = " + std::to_string(k) + " outside [1, " +
                                    std::to_string(h.cols()) + "]");
    }
    if (restarts == 0) restarts = 1;
    KmeansResult best;
    best.inertia = kInf;
    for (std::size_t r = 0; r < restarts; ++r) {
        KmeansResult cur = kmeans_once(h, k, Rng(Rng::derive(seed, r)));
        if (cur.inertia < best.inertia) best = std::move(cur);
    }
    return best;
}

LabelVector kmeans(const DenseMatrix& h, std::size_t k, std::size_t restarts, std::uint64_t seed) {
    return kmeans_full(h, k, restarts, seed).labels;
}

double accuracy(const LabelVector& pred, const LabelVector& truth) {
    require_same_length(pred, truth, "accuracy");
    std::size_t kp = 0, kt = 0;
    const auto a = dense_ids(pred, kp);
    const auto b = dense_ids(truth, kt);
    const auto table = contingency(a, kp, b, kt);

    const std::size_t s = std::max(kp, kt);
    std::vector<std::vector<double>> cost(s, std::vector<double>(s, 0.0));
    for (std::size_t i = 0; i < kp; ++i)
        for (std::size_t j = 0; j < kt; ++j) cost[i][j] = -table[i][j];
    const auto row_to_col = assignment_min(cost);

    double agree = 0.0;
    for (std::size_t i = 0; i < kp; ++i) {
        const std::size_t j = row_to_col[i];
        if (j < kt) agree += table[i][j];
    }
    return agree / static_cast<double>(pred.size());
}

double nmi(const LabelVector& pred, const LabelVector& truth) {
    return nmi_impl(pred, truth, /*geometric=*/true);
}

double nmi_arithmetic(const LabelVector& pred, const LabelVector& truth) {
    return nmi_impl(pred, truth, /*geometric=*/false);
}

double rel_error(const DenseMatrix& v_clean, const DenseMatrix& w, const DenseMatrix& h) {
    const DenseMatrix wh = matmul(w, h);
    if (wh.rows() != v_clean.rows() || wh.cols() != v_clean.cols()) {
        throw std::invalid_argument("rel_error: product shape " + std::to_string(wh.rows()) + "x" +
                                    std::to_string(wh.cols()) + " does not match clean matrix " +
                                    std::to_string(v_clean.rows()) + "x" +
                                    std::to_string(v_clean.cols()));
    }
    const double denom = frobenius_norm(v_clean);
    if (denom == 0.0) throw std::invalid_argument("rel_error: clean matrix is all-zero");
    return frobenius_norm(v_clean - wh) / denom;
}

ClusterReport cluster_report(const DenseMatrix& h, const LabelVector& truth, std::size_t k,
                             std::size_t trials, std::size_t restarts, std::uint64_t seed) {
    if (truth.size() != h.cols()) {
        throw std::invalid_argument("cluster_report: " + std::to_string(truth.size()) +
                                    " labels for " + std::to_string(h.cols()) + " columns");
    }
    if (trials == 0) trials = 1;
    ClusterReport report;
    report.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        const LabelVector labels = kmeans(h, k, restarts, Rng::derive(seed, 1000 + t));
        report.per_trial.push_back({accuracy(labels, truth), nmi(labels, truth)});
    }
    std::vector<double> accs, nmis;
    for (const auto& m : report.per_trial) {
        accs.push_back(m.accuracy);
        nmis.push_back(m.nmi);
    }
    report.accuracy_mean = mean(accs);
    report.accuracy_std = stddev(accs);
    report.nmi_mean = mean(nmis);
    report.nmi_std = stddev(nmis);
    return report;
}

}  // namespace rnmf
