#include "sigclust/path_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sigclust/errors.hpp"

namespace sigclust::metrics {

namespace {

double squared_distance(std::span<const double> x, std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        acc += d * d;
    }
    return acc;
}

void require_point(const RegimePoint& p, const char* name) {
    if (p.signatures.empty())
        throw std::invalid_argument(std::string("mmd: collection ") + name + " is empty");
    const std::size_t len = p.signatures.front().size();
    for (const auto& v : p.signatures)
        if (v.size() != len)
            throw std::invalid_argument(std::string("mmd: ragged vectors in collection ") + name);
}

}  // namespace

double gaussian_kernel(std::span<const double> x, std::span<const double> y,
                       const KernelConfig& cfg) {
    if (x.size() != y.size()) throw std::invalid_argument("gaussian_kernel: length mismatch");
    if (!(cfg.bandwidth > 0.0))
        throw std::invalid_argument("gaussian_kernel: bandwidth must be positive");
    return std::exp(-squared_distance(x, y) / (2.0 * cfg.bandwidth * cfg.bandwidth));
}

double mmd(const RegimePoint& X, const RegimePoint& Y, const KernelConfig& cfg) {
    require_point(X, "X");
    require_point(Y, "Y");
    if (X.signatures.front().size() != Y.signatures.front().size())
        throw std::invalid_argument("mmd: collections carry vectors of different lengths");

    const double m = static_cast<double>(X.signatures.size());
    const double n = static_cast<double>(Y.signatures.size());

    // fixed row-major summation order keeps results bitwise reproducible
    double kxx = 0.0;
    for (const auto& a : X.signatures)
        for (const auto& b : X.signatures) kxx += gaussian_kernel(a, b, cfg);
    double kxy = 0.0;
    for (const auto& a : X.signatures)
        for (const auto& b : Y.signatures) kxy += gaussian_kernel(a, b, cfg);
    double kyy = 0.0;
    for (const auto& a : Y.signatures)
        for (const auto& b : Y.signatures) kyy += gaussian_kernel(a, b, cfg);

    const double bracket = kxx / (m * m) - 2.0 * kxy / (m * n) + kyy / (n * n);
    constexpr double kNegativityTol = 1e-10;
    if (bracket < -kNegativityTol)
        throw NumericalError("mmd: kernel sums produced " + std::to_string(bracket) +
                             ", below the rounding-noise tolerance");
    return std::sqrt(std::max(bracket, 0.0));
}

double gaussian_similarity(double distance, double xi) {
    if (distance < 0.0) throw std::invalid_argument("gaussian_similarity: negative distance");
    if (!(xi > 0.0)) throw std::invalid_argument("gaussian_similarity: xi must be positive");
    return std::exp(-distance / (xi * xi));
}

double xi_heuristic(const Eigen::MatrixXd& distances) {
    if (distances.rows() != distances.cols())
        throw std::invalid_argument("xi_heuristic: matrix must be square");
    std::vector<double> positive;
    for (Eigen::Index i = 0; i < distances.rows(); ++i)
        for (Eigen::Index j = i + 1; j < distances.cols(); ++j)
            if (distances(i, j) > 0.0) positive.push_back(distances(i, j));
    if (positive.empty())
        throw std::invalid_argument("xi_heuristic: no strictly positive distances");
    std::sort(positive.begin(), positive.end());
    const std::size_t rank = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(0.01 * static_cast<double>(positive.size()))));
    return positive[rank - 1];
}

KernelConfig median_bandwidth(const std::vector<std::vector<double>>& pooled) {
    if (pooled.size() < 2)
        throw std::invalid_argument("median_bandwidth: need at least 2 vectors");
    const std::size_t len = pooled.front().size();
    for (const auto& v : pooled)
        if (v.size() != len) throw std::invalid_argument("median_bandwidth: ragged vectors");

    std::vector<double> dists;
    dists.reserve(pooled.size() * (pooled.size() - 1) / 2);
    for (std::size_t i = 0; i < pooled.size(); ++i)
        for (std::size_t j = i + 1; j < pooled.size(); ++j)
            dists.push_back(std::sqrt(squared_distance(pooled[i], pooled[j])));

    std::sort(dists.begin(), dists.end());
    const std::size_t mid = dists.size() / 2;
    const double median =
        dists.size() % 2 == 1 ? dists[mid] : 0.5 * (dists[mid - 1] + dists[mid]);
    if (!(median > 0.0))
        throw std::invalid_argument("median_bandwidth: vectors are too concentrated (zero median)");
    return KernelConfig{median};
}

Eigen::MatrixXd distance_matrix(const std::vector<RegimePoint>& points, const KernelConfig& cfg) {
    if (points.size() < 2) throw std::invalid_argument("distance_matrix: need at least 2 points");
    const Eigen::Index n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d = mmd(points[static_cast<std::size_t>(i)],
                                 points[static_cast<std::size_t>(j)], cfg);
            out(i, j) = d;
            out(j, i) = d;
        }
    return out;
}

Eigen::MatrixXd distance_matrix(const std::vector<RegimePoint>& points,
                                const BandwidthPolicy& policy) {
    if (points.size() < 2) throw std::invalid_argument("distance_matrix: need at least 2 points");
    if (policy.mode == BandwidthMode::explicit_value)
        return distance_matrix(points, KernelConfig{policy.value});
    if (!(policy.scale > 0.0))
        throw std::invalid_argument("distance_matrix: bandwidth scale must be positive");

    if (policy.mode == BandwidthMode::median_pooled) {
        std::vector<std::vector<double>> pooled;
        for (const auto& p : points)
            pooled.insert(pooled.end(), p.signatures.begin(), p.signatures.end());
        KernelConfig cfg = median_bandwidth(pooled);
        cfg.bandwidth *= policy.scale;
        return distance_matrix(points, cfg);
    }

    const Eigen::Index n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const auto& a = points[static_cast<std::size_t>(i)];
            const auto& b = points[static_cast<std::size_t>(j)];
            std::vector<std::vector<double>> pooled;
            pooled.reserve(a.signatures.size() + b.signatures.size());
            pooled.insert(pooled.end(), a.signatures.begin(), a.signatures.end());
            pooled.insert(pooled.end(), b.signatures.begin(), b.signatures.end());
            KernelConfig cfg = median_bandwidth(pooled);
            cfg.bandwidth *= policy.scale;
            const double d = mmd(a, b, cfg);
            out(i, j) = d;
            out(j, i) = d;
        }
    return out;
}

}  // namespace sigclust::metrics
