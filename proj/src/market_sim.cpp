#include "sigclust/market_sim.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace sigclust::market {

SampledSeries gbm_path(const GbmParams& p, int steps, SeededRng& rng) {
    if (!(p.sigma > 0.0)) throw std::invalid_argument("gbm_path: sigma must be positive");
    if (steps < 2) throw std::invalid_argument("gbm_path: need at least 2 steps");
    const double dt = 1.0 / static_cast<double>(steps);
    const double drift = (p.mu - 0.5 * p.sigma * p.sigma) * dt;
    const double vol = p.sigma * std::sqrt(dt);
    SampledSeries out;
    out.values.resize(static_cast<std::size_t>(steps));
    double s = 1.0;
    for (int i = 0; i < steps; ++i) {
        s *= std::exp(drift + vol * rng.normal());
        out.values[static_cast<std::size_t>(i)] = s;
    }
    return out;
}

tensor::PiecewisePath time_augment(const SampledSeries& s, bool include_t0) {
    const std::size_t m = s.values.size();
    if (m < 2) throw std::invalid_argument("time_augment: need at least 2 values");
    const std::size_t n = m + (include_t0 ? 1 : 0);
    std::vector<double> times;
    std::vector<double> values;
    times.reserve(n);
    values.reserve(2 * n);
    if (include_t0) {
        times.push_back(0.0);
        values.push_back(0.0);
        values.push_back(1.0);
    }
    for (std::size_t i = 0; i < m; ++i) {
        const double t = static_cast<double>(i + 1) / static_cast<double>(m);
        times.push_back(t);
        values.push_back(t);
        values.push_back(s.values[i]);
    }
    return tensor::PiecewisePath(std::move(times), std::move(values), 2);
}

tensor::PiecewisePath linear_interpolate(std::vector<double> times, std::vector<double> values,
                                         int dimension) {
    return tensor::PiecewisePath(std::move(times), std::move(values), dimension);
}

StepPath::StepPath(std::vector<double> times, std::vector<double> values, int dimension)
    : dimension_(dimension), times_(std::move(times)), values_(std::move(values)) {
    if (dimension_ < 1) throw std::invalid_argument("StepPath: dimension must be positive");
    if (times_.size() < 2) throw std::invalid_argument("StepPath: need at least 2 knots");
    if (values_.size() != times_.size() * static_cast<std::size_t>(dimension_))
        throw std::invalid_argument("StepPath: values size does not match knots");
    for (std::size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1]))
            throw std::invalid_argument("StepPath: times must be strictly increasing");
}

std::span<const double> StepPath::value(std::size_t i) const {
    return {values_.data() + i * static_cast<std::size_t>(dimension_),
            static_cast<std::size_t>(dimension_)};
}

std::vector<double> StepPath::evaluate(double t) const {
    if (t < times_.front() || t > times_.back())
        throw std::out_of_range("StepPath: time outside [t_1, t_n]");
    std::size_t i;
    if (t == times_.back()) {
        i = times_.size() - 1;
    } else {
        const auto it = std::upper_bound(times_.begin(), times_.end(), t);
        i = static_cast<std::size_t>(it - times_.begin()) - 1;
    }
    const auto v = value(i);
    return {v.begin(), v.end()};
}

StepPath rectilinear_interpolate(std::vector<double> times, std::vector<double> values,
                                 int dimension) {
    return StepPath(std::move(times), std::move(values), dimension);
}

std::vector<SampledSeries> simulate_regime_series(const GbmParams& p, int n_paths, int steps,
                                                  std::uint64_t seed) {
    if (n_paths < 1) throw std::invalid_argument("simulate_regime_series: n_paths must be >= 1");
    std::vector<SampledSeries> out;
    out.reserve(static_cast<std::size_t>(n_paths));
    for (int j = 0; j < n_paths; ++j) {
        SeededRng rng(derive_seed(seed, static_cast<std::uint64_t>(j)));
        out.push_back(gbm_path(p, steps, rng));
    }
    return out;
}

metrics::RegimePoint signatures_from_series(const std::vector<SampledSeries>& series, int depth,
                                            bool factorial_scaling, bool include_t0) {
    if (depth < 1) throw std::invalid_argument("signatures_from_series: depth must be >= 1");
    metrics::RegimePoint point;
    point.signatures.reserve(series.size());
    for (const auto& s : series) {
        tensor::TensorSeries sig = tensor::path_signature(time_augment(s, include_t0), depth);
        if (factorial_scaling) sig = tensor::factorial_scale(sig);
        point.signatures.push_back(tensor::flatten(sig));
    }
    return point;
}

metrics::RegimePoint regime_point(const GbmParams& p, int n_paths, int depth, int steps,
                                  bool factorial_scaling, bool include_t0, std::uint64_t seed) {
    return signatures_from_series(simulate_regime_series(p, n_paths, steps, seed), depth,
                                  factorial_scaling, include_t0);
}

void write_paths_csv(std::ostream& out, const std::vector<SampledSeries>& series) {
    out << std::setprecision(17);
    out << "path_id,t,value\n";
    for (std::size_t id = 0; id < series.size(); ++id) {
        const auto& values = series[id].values;
        const std::size_t m = values.size();
        for (std::size_t i = 0; i < m; ++i) {
            const double t = static_cast<double>(i + 1) / static_cast<double>(m);
            out << id << ',' << t << ',' << values[i] << '\n';
        }
    }
}

}  // namespace sigclust::market
