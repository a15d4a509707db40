#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sigclust/path_metrics.hpp"
#include "sigclust/rng.hpp"
#include "sigclust/tensor_signature.hpp"

namespace sigclust::market {

// Drift and volatility per unit time of a geometric Brownian motion.
struct GbmParams {
    double mu = 0.0;
    double sigma = 0.0;  // must be positive
};

struct RegimeSpec {
    std::vector<GbmParams> regimes;
};

// Return path on the uniform grid t_i = i/m over [0, 1] with S_0 = 1 implicit;
// values[i-1] holds S at t_i.
struct SampledSeries {
    std::vector<double> values;
};

// Exact lognormal stepping of the closed-form solution on the uniform grid;
// no discretisation error.
SampledSeries gbm_path(const GbmParams& p, int steps, SeededRng& rng);

// Two-dimensional path {(i/m, S_i)}, time first. With include_t0 the implicit
// starting sample (0, 1) is prepended.
tensor::PiecewisePath time_augment(const SampledSeries& s, bool include_t0 = false);

// Knots read as a piecewise-linear path; evaluation is affine between knots
// and right-continuous.
tensor::PiecewisePath linear_interpolate(std::vector<double> times, std::vector<double> values,
                                         int dimension);

// Piecewise-constant interpolation: the value at t is the value of the last
// knot at or before t, with the final knot closing the interval.
class StepPath {
public:
    StepPath(std::vector<double> times, std::vector<double> values, int dimension);

    int dimension() const { return dimension_; }
    std::size_t size() const { return times_.size(); }
    double time(std::size_t i) const { return times_[i]; }
    std::span<const double> value(std::size_t i) const;
    std::vector<double> evaluate(double t) const;

private:
    int dimension_;
    std::vector<double> times_;
    std::vector<double> values_;
};

StepPath rectilinear_interpolate(std::vector<double> times, std::vector<double> values,
                                 int dimension);

// One return path per entry, each drawn from its own stream derived from
// `seed` and the path index.
std::vector<SampledSeries> simulate_regime_series(const GbmParams& p, int n_paths, int steps,
                                                  std::uint64_t seed);

// Time-augment, signature-transform to `depth`, optionally scale level k by
// k!, and flatten each series into one vector of the regime point.
metrics::RegimePoint signatures_from_series(const std::vector<SampledSeries>& series, int depth,
                                            bool factorial_scaling, bool include_t0);

// Full regime-point generation: simulate n_paths return paths under p and
// collect their (optionally scaled) flattened signatures.
metrics::RegimePoint regime_point(const GbmParams& p, int n_paths, int depth, int steps,
                                  bool factorial_scaling, bool include_t0, std::uint64_t seed);

// CSV export with header path_id,t,value and one row per knot.
void write_paths_csv(std::ostream& out, const std::vector<SampledSeries>& series);

}  // namespace sigclust::market
