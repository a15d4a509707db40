#pragma once

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sigclust/market_sim.hpp"
#include "sigclust/spectral_clustering.hpp"

namespace sigclust::experiment {

enum class ExperimentKind { clouds, regimes, generic };
enum class SimilarityKind { gaussian_eq, inverse, inverse_square };
enum class InputKind { distances, coordinates };

// Mirrors the JSON config document (snake_case keys, one per field). The seed
// has no entropy-source default; a config without one is rejected.
struct ExperimentConfig {
    std::uint64_t seed = 0;
    ExperimentKind experiment = ExperimentKind::generic;

    int t_max = 2000;
    int restarts = 10;

    // regimes experiment
    int depth = 3;
    int n_paths = 40;
    int m_steps = 100;
    int points_per_regime = 10;
    market::RegimeSpec regimes{{{0.05, 0.10}, {0.05, 0.20}, {0.02, 0.10}, {0.02, 0.20}}};
    // Regime mu/sigma are quoted per grid step; the simulation runs on the
    // [0,1] grid, so they scale by m and sqrt(m). Set false to read the
    // values per unit time instead.
    bool params_per_step = true;
    bool factorial_scaling = true;
    bool include_t0 = false;
    metrics::BandwidthPolicy bandwidth{metrics::BandwidthMode::median_per_pair, 1.0, 0.02};
    bool emit_paths = false;

    SimilarityKind similarity = SimilarityKind::gaussian_eq;

    // clouds experiment
    std::vector<std::array<double, 2>> cloud_centres{{2, 1}, {3, 8}, {8, 2}, {8, 8}};
    double cloud_sigma = 1.0;
    int cloud_size = 100;

    // generic experiment
    std::string input_csv;
    InputKind input_kind = InputKind::distances;
};

// Strict parse: unknown keys, a missing seed or a missing experiment kind are
// configuration errors.
ExperimentConfig parse_config(const nlohmann::json& j);

// Fully resolved echo; feeding it back through parse_config reproduces the run.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

struct ClusteringReport {
    std::vector<spectral::Suggestion> suggestions;  // sorted by separation, descending
    nlohmann::json metadata;                        // config echo, seed, run diagnostics
    spectral::EigengapProfile profile;              // eigengaps.csv payload
    std::vector<market::SampledSeries> series;      // paths.csv payload when requested
};

// Similarity function selected by the config; xi feeds the Gaussian variant.
spectral::SimilarityFn make_similarity(SimilarityKind kind, double xi);

ClusteringReport run_gaussian_clouds(const ExperimentConfig& cfg);
ClusteringReport run_synthetic_regimes(const ExperimentConfig& cfg);
ClusteringReport run_generic(const ExperimentConfig& cfg, const std::string& input_csv_path);

// report.json content: metadata and suggestions.
nlohmann::json report_to_json(const ClusteringReport& report);
ClusteringReport parse_report(const nlohmann::json& j);

// Writes report.json, eigengaps.csv (t,k,delta for k = 2..n), assignments.csv
// (point_id,k,label per suggestion) and, when series are present, paths.csv.
void emit_report(const ClusteringReport& report, const std::filesystem::path& out_dir);

// Numeric CSV table; a non-numeric first line is treated as a header.
Eigen::MatrixXd read_csv_matrix(std::istream& in);

// Euclidean distances between the rows of a coordinates table.
Eigen::MatrixXd distances_from_coordinates(const Eigen::MatrixXd& points);

}  // namespace sigclust::experiment
