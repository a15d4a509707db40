#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace sigclust::metrics {

struct KernelConfig {
    double bandwidth = 1.0;  // sigma > 0
};

// One point of the clustering metric space: a non-empty collection of
// equal-length flattened signature vectors drawn under one regime.
struct RegimePoint {
    std::vector<std::vector<double>> signatures;
};

// exp(-|x - y|^2 / (2 sigma^2)), in (0, 1].
double gaussian_kernel(std::span<const double> x, std::span<const double> y,
                       const KernelConfig& cfg);

// Empirical maximum mean discrepancy between the two collections under the
// Gaussian kernel. The bracketed kernel-sum expression is clamped at zero
// before the square root; negativity beyond rounding noise is reported as a
// numerical failure.
double mmd(const RegimePoint& X, const RegimePoint& Y, const KernelConfig& cfg);

// exp(-x / xi^2), the similarity used to weight distances.
double gaussian_similarity(double distance, double xi);

// Nearest-rank 1% quantile of the strictly positive distances in the upper
// triangle. At least one positive entry is required.
double xi_heuristic(const Eigen::MatrixXd& distances);

// Bandwidth as the median of pairwise Euclidean distances over the pooled
// vectors. Fails when the median is zero (all vectors identical).
KernelConfig median_bandwidth(const std::vector<std::vector<double>>& pooled);

// Symmetric zero-diagonal matrix of pairwise MMD values.
Eigen::MatrixXd distance_matrix(const std::vector<RegimePoint>& points, const KernelConfig& cfg);

// How the kernel bandwidth is chosen when building a distance matrix.
// median_pooled uses one bandwidth from all vectors of all points;
// median_per_pair rescales per pair from the union of the two collections,
// which keeps pairs comparable when feature magnitudes differ by orders of
// magnitude across regimes. scale multiplies the median-derived value.
enum class BandwidthMode { median_pooled, median_per_pair, explicit_value };

struct BandwidthPolicy {
    BandwidthMode mode = BandwidthMode::median_pooled;
    double value = 1.0;  // explicit_value only
    double scale = 1.0;  // median modes only
};

Eigen::MatrixXd distance_matrix(const std::vector<RegimePoint>& points,
                                const BandwidthPolicy& policy);

}  // namespace sigclust::metrics
