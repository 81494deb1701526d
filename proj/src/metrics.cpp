#include "targetsearch/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace targetsearch {

namespace {

// Exact min-cost assignment by dynamic programming over subsets of the truth
// positions. Target counts here are small (tens at most), so the 2^n states
// are cheap and the result is obviously optimal.
double assign_min_cost(const std::vector<std::vector<double>>& cost, double penalty_cost,
                       std::vector<int>& out_assignment) {
    const std::size_t n_found = cost.size();
    const std::size_t n_truth = n_found == 0 ? 0 : cost[0].size();
    if (n_truth > 24) throw std::invalid_argument("assignment: too many truth targets");

    const std::size_t n_masks = static_cast<std::size_t>(1) << n_truth;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> best(n_found + 1, std::vector<double>(n_masks, inf));
    std::vector<std::vector<int>> choice(n_found + 1, std::vector<int>(n_masks, -2));
    best[0][0] = 0.0;

    for (std::size_t i = 0; i < n_found; ++i) {
        for (std::size_t mask = 0; mask < n_masks; ++mask) {
            const double base = best[i][mask];
            if (base == inf) continue;
            // Leave found i unmatched at the penalty cost.
            if (base + penalty_cost < best[i + 1][mask]) {
                best[i + 1][mask] = base + penalty_cost;
                choice[i + 1][mask] = -1;
            }
            for (std::size_t t = 0; t < n_truth; ++t) {
                if (mask & (1ULL << t)) continue;
                const std::size_t next = mask | (1ULL << t);
                const double c = base + cost[i][t];
                if (c < best[i + 1][next]) {
                    best[i + 1][next] = c;
                    choice[i + 1][next] = static_cast<int>(t);
                }
            }
        }
    }

    std::size_t best_mask = 0;
    for (std::size_t mask = 1; mask < n_masks; ++mask) {
        if (best[n_found][mask] < best[n_found][best_mask]) best_mask = mask;
    }

    out_assignment.assign(n_found, -1);
    std::size_t mask = best_mask;
    for (std::size_t i = n_found; i > 0; --i) {
        const int t = choice[i][mask];
        out_assignment[i - 1] = t;
        if (t >= 0) mask &= ~(1ULL << t);
    }
    return best[n_found][best_mask];
}

}  // namespace

MatchResult match_found_to_truth(std::span<const Vec3> found, std::span<const Vec3> truth,
                                 double penalty) {
    MatchResult result;
    if (found.empty()) return result;

    std::vector<std::vector<double>> cost(found.size(), std::vector<double>(truth.size()));
    for (std::size_t i = 0; i < found.size(); ++i) {
        for (std::size_t t = 0; t < truth.size(); ++t) {
            cost[i][t] = (found[i] - truth[t]).squaredNorm();
        }
    }
    assign_min_cost(cost, penalty * penalty, result.truth_index);

    double sum_sq = 0.0;
    result.distance.resize(found.size());
    for (std::size_t i = 0; i < found.size(); ++i) {
        const int t = result.truth_index[i];
        result.distance[i] = t >= 0 ? (found[i] - truth[t]).norm() : penalty;
        sum_sq += result.distance[i] * result.distance[i];
    }
    result.rmse = std::sqrt(sum_sq / static_cast<double>(found.size()));
    return result;
}

std::optional<double> rmse_found(std::span<const Vec3> found, std::span<const Vec3> truth,
                                 double penalty) {
    if (found.empty()) return std::nullopt;
    return match_found_to_truth(found, truth, penalty).rmse;
}

double student_t_975(int dof) {
    // Two-sided 95% quantiles; beyond the table the normal limit is close.
    static constexpr double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306,
                                       2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
                                       2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
                                       2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
    if (dof < 1) throw std::invalid_argument("student_t_975: dof must be >= 1");
    if (dof <= 30) return table[dof - 1];
    if (dof <= 40) return 2.021;
    if (dof <= 60) return 2.000;
    if (dof <= 120) return 1.980;
    return 1.960;
}

MeanCI mean_confidence(std::span<const double> samples) {
    if (samples.size() < 2) {
        throw std::invalid_argument("mean_confidence: need at least two samples");
    }
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    return MeanCI{mean, student_t_975(static_cast<int>(samples.size()) - 1) * sd / std::sqrt(n)};
}

namespace {

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw std::invalid_argument("spearman: need matched samples of size >= 2");
    }
    const std::vector<double> rx = average_ranks(xs);
    const std::vector<double> ry = average_ranks(ys);
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        cov += (rx[i] - mx) * (ry[i] - my);
        vx += (rx[i] - mx) * (rx[i] - mx);
        vy += (ry[i] - my) * (ry[i] - my);
    }
    if (vx == 0.0 || vy == 0.0) return 0.0;
    return cov / std::sqrt(vx * vy);
}

}  // namespace targetsearch
