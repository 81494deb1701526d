#pragma once

#include <optional>
#include <span>
#include <vector>

#include "targetsearch/geometry.hpp"

namespace targetsearch {

struct MatchResult {
    std::vector<int> truth_index;    // per found entry; -1 when unmatched
    std::vector<double> distance;    // matched distance, or the penalty
    double rmse = 0.0;
};

/// Minimum-cost one-to-one assignment of found positions to true positions
/// (squared-distance cost). Found entries left unmatched count as the penalty
/// distance. The RMSE is taken over all found entries.
MatchResult match_found_to_truth(std::span<const Vec3> found, std::span<const Vec3> truth,
                                 double penalty);

/// RMSE between found and true targets, or nullopt when nothing was found.
std::optional<double> rmse_found(std::span<const Vec3> found, std::span<const Vec3> truth,
                                 double penalty);

/// Two-sided 97.5% Student-t quantile (95% interval width multiplier).
double student_t_975(int dof);

struct MeanCI {
    double mean = 0.0;
    double half_width = 0.0;  // 95% confidence half-width on the mean
};

MeanCI mean_confidence(std::span<const double> samples);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> xs, std::span<const double> ys);

}  // namespace targetsearch
