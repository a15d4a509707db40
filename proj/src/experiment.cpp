#include "sigclust/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sigclust/errors.hpp"
#include "sigclust/path_metrics.hpp"

namespace sigclust::experiment {

namespace {

using nlohmann::json;

// stream tags for deriving independent substreams from the config seed
constexpr std::uint64_t kStreamClouds = 0x11;
constexpr std::uint64_t kStreamRegimes = 0x22;
constexpr std::uint64_t kStreamCluster = 0x33;

const std::set<std::string>& allowed_keys() {
    static const std::set<std::string> keys{
        "seed",          "experiment",      "t_max",           "restarts",
        "depth",         "n_paths",         "m_steps",         "points_per_regime",
        "regimes",       "params_per_step", "factorial_scaling", "include_t0",
        "kernel_bandwidth", "bandwidth_scale", "emit_paths",   "similarity",
        "cloud_centres", "cloud_sigma",     "cloud_size",      "input_csv",
        "input_kind"};
    return keys;
}

ExperimentKind parse_experiment_kind(const std::string& s) {
    if (s == "clouds") return ExperimentKind::clouds;
    if (s == "regimes") return ExperimentKind::regimes;
    if (s == "generic") return ExperimentKind::generic;
    throw std::invalid_argument("config: unknown experiment '" + s + "'");
}

std::string experiment_kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::clouds: return "clouds";
        case ExperimentKind::regimes: return "regimes";
        case ExperimentKind::generic: return "generic";
    }
    throw std::logic_error("unreachable");
}

SimilarityKind parse_similarity_kind(const std::string& s) {
    if (s == "gaussian_eq") return SimilarityKind::gaussian_eq;
    if (s == "inverse") return SimilarityKind::inverse;
    if (s == "inverse_square") return SimilarityKind::inverse_square;
    throw std::invalid_argument("config: unknown similarity '" + s + "'");
}

std::string similarity_kind_name(SimilarityKind k) {
    switch (k) {
        case SimilarityKind::gaussian_eq: return "gaussian_eq";
        case SimilarityKind::inverse: return "inverse";
        case SimilarityKind::inverse_square: return "inverse_square";
    }
    throw std::logic_error("unreachable");
}

InputKind parse_input_kind(const std::string& s) {
    if (s == "distances") return InputKind::distances;
    if (s == "coordinates") return InputKind::coordinates;
    throw std::invalid_argument("config: unknown input_kind '" + s + "'");
}

std::string input_kind_name(InputKind k) {
    return k == InputKind::distances ? "distances" : "coordinates";
}

int require_positive_int(const json& j, const std::string& key, int minimum) {
    const auto& v = j.at(key);
    if (!v.is_number_integer())
        throw std::invalid_argument("config: " + key + " must be an integer");
    const auto value = v.get<std::int64_t>();
    if (value < minimum)
        throw std::invalid_argument("config: " + key + " must be >= " + std::to_string(minimum));
    return static_cast<int>(value);
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: document must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (!allowed_keys().contains(key))
            throw std::invalid_argument("config: unknown key '" + key + "'");

    ExperimentConfig cfg;

    if (!j.contains("seed")) throw std::invalid_argument("config: seed is required");
    const auto& seed = j.at("seed");
    if (!seed.is_number_integer() || (seed.is_number_integer() && !seed.is_number_unsigned() &&
                                      seed.get<std::int64_t>() < 0))
        throw std::invalid_argument("config: seed must be a non-negative integer");
    cfg.seed = seed.get<std::uint64_t>();

    if (!j.contains("experiment"))
        throw std::invalid_argument("config: experiment kind is required");
    cfg.experiment = parse_experiment_kind(j.at("experiment").get<std::string>());

    if (j.contains("t_max")) cfg.t_max = require_positive_int(j, "t_max", 1);
    if (j.contains("restarts")) cfg.restarts = require_positive_int(j, "restarts", 1);
    if (j.contains("depth")) cfg.depth = require_positive_int(j, "depth", 1);
    if (j.contains("n_paths")) cfg.n_paths = require_positive_int(j, "n_paths", 1);
    if (j.contains("m_steps")) cfg.m_steps = require_positive_int(j, "m_steps", 2);
    if (j.contains("points_per_regime"))
        cfg.points_per_regime = require_positive_int(j, "points_per_regime", 1);

    if (j.contains("regimes")) {
        const auto& arr = j.at("regimes");
        if (!arr.is_array() || arr.empty())
            throw std::invalid_argument("config: regimes must be a non-empty array");
        cfg.regimes.regimes.clear();
        for (const auto& r : arr) {
            market::GbmParams p;
            p.mu = r.at("mu").get<double>();
            p.sigma = r.at("sigma").get<double>();
            if (!(p.sigma > 0.0))
                throw std::invalid_argument("config: regime sigma must be positive");
            cfg.regimes.regimes.push_back(p);
        }
    }

    if (j.contains("factorial_scaling")) cfg.factorial_scaling = j.at("factorial_scaling").get<bool>();
    if (j.contains("include_t0")) cfg.include_t0 = j.at("include_t0").get<bool>();
    if (j.contains("emit_paths")) cfg.emit_paths = j.at("emit_paths").get<bool>();

    if (j.contains("kernel_bandwidth")) {
        const auto& kb = j.at("kernel_bandwidth");
        if (kb.is_string()) {
            const std::string name = kb.get<std::string>();
            if (name == "median")
                cfg.bandwidth.mode = metrics::BandwidthMode::median_pooled;
            else if (name == "median_per_pair")
                cfg.bandwidth.mode = metrics::BandwidthMode::median_per_pair;
            else
                throw std::invalid_argument(
                    "config: kernel_bandwidth must be \"median\", \"median_per_pair\" or a "
                    "positive number");
        } else if (kb.is_number()) {
            const double value = kb.get<double>();
            if (!(value > 0.0))
                throw std::invalid_argument("config: kernel_bandwidth must be positive");
            cfg.bandwidth.mode = metrics::BandwidthMode::explicit_value;
            cfg.bandwidth.value = value;
        } else {
            throw std::invalid_argument(
                "config: kernel_bandwidth must be \"median\", \"median_per_pair\" or a "
                "positive number");
        }
    }
    if (j.contains("bandwidth_scale")) {
        cfg.bandwidth.scale = j.at("bandwidth_scale").get<double>();
        if (!(cfg.bandwidth.scale > 0.0))
            throw std::invalid_argument("config: bandwidth_scale must be positive");
    }
    if (j.contains("params_per_step")) cfg.params_per_step = j.at("params_per_step").get<bool>();

    if (j.contains("similarity"))
        cfg.similarity = parse_similarity_kind(j.at("similarity").get<std::string>());

    if (j.contains("cloud_centres")) {
        const auto& arr = j.at("cloud_centres");
        if (!arr.is_array() || arr.empty())
            throw std::invalid_argument("config: cloud_centres must be a non-empty array");
        cfg.cloud_centres.clear();
        for (const auto& c : arr) {
            if (!c.is_array() || c.size() != 2)
                throw std::invalid_argument("config: each cloud centre must be [x, y]");
            cfg.cloud_centres.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
        }
    }
    if (j.contains("cloud_sigma")) {
        cfg.cloud_sigma = j.at("cloud_sigma").get<double>();
        if (!(cfg.cloud_sigma > 0.0))
            throw std::invalid_argument("config: cloud_sigma must be positive");
    }
    if (j.contains("cloud_size")) cfg.cloud_size = require_positive_int(j, "cloud_size", 1);

    if (j.contains("input_csv")) cfg.input_csv = j.at("input_csv").get<std::string>();
    if (j.contains("input_kind"))
        cfg.input_kind = parse_input_kind(j.at("input_kind").get<std::string>());

    return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["seed"] = cfg.seed;
    j["experiment"] = experiment_kind_name(cfg.experiment);
    j["t_max"] = cfg.t_max;
    j["restarts"] = cfg.restarts;
    j["depth"] = cfg.depth;
    j["n_paths"] = cfg.n_paths;
    j["m_steps"] = cfg.m_steps;
    j["points_per_regime"] = cfg.points_per_regime;
    j["regimes"] = json::array();
    for (const auto& r : cfg.regimes.regimes)
        j["regimes"].push_back(json{{"mu", r.mu}, {"sigma", r.sigma}});
    j["factorial_scaling"] = cfg.factorial_scaling;
    j["include_t0"] = cfg.include_t0;
    switch (cfg.bandwidth.mode) {
        case metrics::BandwidthMode::median_pooled: j["kernel_bandwidth"] = "median"; break;
        case metrics::BandwidthMode::median_per_pair:
            j["kernel_bandwidth"] = "median_per_pair";
            break;
        case metrics::BandwidthMode::explicit_value:
            j["kernel_bandwidth"] = cfg.bandwidth.value;
            break;
    }
    j["bandwidth_scale"] = cfg.bandwidth.scale;
    j["params_per_step"] = cfg.params_per_step;
    j["emit_paths"] = cfg.emit_paths;
    j["similarity"] = similarity_kind_name(cfg.similarity);
    j["cloud_centres"] = json::array();
    for (const auto& c : cfg.cloud_centres) j["cloud_centres"].push_back(json::array({c[0], c[1]}));
    j["cloud_sigma"] = cfg.cloud_sigma;
    j["cloud_size"] = cfg.cloud_size;
    j["input_csv"] = cfg.input_csv;
    j["input_kind"] = input_kind_name(cfg.input_kind);
    return j;
}

spectral::SimilarityFn make_similarity(SimilarityKind kind, double xi) {
    switch (kind) {
        case SimilarityKind::gaussian_eq:
            return [xi](double x) { return metrics::gaussian_similarity(x, xi); };
        case SimilarityKind::inverse:
            return [](double x) { return 1.0 / x; };
        case SimilarityKind::inverse_square:
            return [](double x) { return 1.0 / (x * x); };
    }
    throw std::logic_error("unreachable");
}

namespace {

// Shared tail of every runner: xi heuristic, similarity weights, multiscale
// clustering, and the report skeleton.
ClusteringReport cluster_and_report(const ExperimentConfig& cfg, const Eigen::MatrixXd& distances) {
    const double xi = metrics::xi_heuristic(distances);
    const spectral::SimilarityFn similarity = make_similarity(cfg.similarity, xi);
    spectral::MultiscaleResult result = spectral::multiscale_cluster(
        distances, similarity, cfg.t_max, cfg.restarts, derive_seed(cfg.seed, kStreamCluster));

    ClusteringReport report;
    report.suggestions = std::move(result.suggestions);
    report.profile = std::move(result.profile);
    report.metadata["config"] = config_to_json(cfg);
    report.metadata["seed"] = cfg.seed;
    report.metadata["xi"] = xi;
    return report;
}

}  // namespace

ClusteringReport run_gaussian_clouds(const ExperimentConfig& cfg) {
    if (cfg.experiment != ExperimentKind::clouds)
        throw std::invalid_argument("run_gaussian_clouds: config is not a clouds experiment");

    const std::size_t n_clouds = cfg.cloud_centres.size();
    const std::size_t n = n_clouds * static_cast<std::size_t>(cfg.cloud_size);
    Eigen::MatrixXd points(static_cast<Eigen::Index>(n), 2);
    std::vector<int> labels(n);
    std::size_t row = 0;
    for (std::size_t c = 0; c < n_clouds; ++c) {
        SeededRng rng(derive_seed(cfg.seed, kStreamClouds, static_cast<std::uint64_t>(c)));
        for (int i = 0; i < cfg.cloud_size; ++i, ++row) {
            points(static_cast<Eigen::Index>(row), 0) =
                cfg.cloud_centres[c][0] + cfg.cloud_sigma * rng.normal();
            points(static_cast<Eigen::Index>(row), 1) =
                cfg.cloud_centres[c][1] + cfg.cloud_sigma * rng.normal();
            labels[row] = static_cast<int>(c) + 1;
        }
    }

    ClusteringReport report = cluster_and_report(cfg, distances_from_coordinates(points));
    report.metadata["generating_labels"] = labels;
    return report;
}

ClusteringReport run_synthetic_regimes(const ExperimentConfig& cfg) {
    if (cfg.experiment != ExperimentKind::regimes)
        throw std::invalid_argument("run_synthetic_regimes: config is not a regimes experiment");

    std::vector<metrics::RegimePoint> points;
    std::vector<int> labels;
    std::vector<market::SampledSeries> all_series;
    for (std::size_t r = 0; r < cfg.regimes.regimes.size(); ++r) {
        market::GbmParams params = cfg.regimes.regimes[r];
        if (cfg.params_per_step) {
            params.mu *= static_cast<double>(cfg.m_steps);
            params.sigma *= std::sqrt(static_cast<double>(cfg.m_steps));
        }
        for (int p = 0; p < cfg.points_per_regime; ++p) {
            const std::uint64_t point_seed = derive_seed(
                cfg.seed, kStreamRegimes, static_cast<std::uint64_t>(r),
                static_cast<std::uint64_t>(p));
            auto series = market::simulate_regime_series(params, cfg.n_paths, cfg.m_steps,
                                                         point_seed);
            points.push_back(market::signatures_from_series(series, cfg.depth,
                                                            cfg.factorial_scaling,
                                                            cfg.include_t0));
            labels.push_back(static_cast<int>(r) + 1);
            if (cfg.emit_paths)
                all_series.insert(all_series.end(), series.begin(), series.end());
        }
    }

    ClusteringReport report =
        cluster_and_report(cfg, metrics::distance_matrix(points, cfg.bandwidth));
    report.metadata["generating_labels"] = labels;
    report.series = std::move(all_series);
    return report;
}

ClusteringReport run_generic(const ExperimentConfig& cfg, const std::string& input_csv_path) {
    if (cfg.experiment != ExperimentKind::generic)
        throw std::invalid_argument("run_generic: config is not a generic experiment");
    std::ifstream in(input_csv_path);
    if (!in) throw std::invalid_argument("run_generic: cannot open '" + input_csv_path + "'");
    const Eigen::MatrixXd table = read_csv_matrix(in);

    Eigen::MatrixXd distances;
    if (cfg.input_kind == InputKind::coordinates) {
        distances = distances_from_coordinates(table);
    } else {
        if (table.rows() != table.cols())
            throw std::invalid_argument("run_generic: distance matrix must be square");
        distances = table;
    }
    // echo the input actually read, so the config echo reproduces the run
    ExperimentConfig resolved = cfg;
    resolved.input_csv = input_csv_path;
    return cluster_and_report(resolved, distances);
}

json report_to_json(const ClusteringReport& report) {
    json j;
    j["metadata"] = report.metadata;
    j["suggestions"] = json::array();
    for (const auto& s : report.suggestions) {
        j["suggestions"].push_back(json{{"k", s.k},
                                        {"t_revealing", s.t_revealing},
                                        {"separation", s.separation},
                                        {"trivial", s.trivial},
                                        {"assignment", s.assignment}});
    }
    return j;
}

ClusteringReport parse_report(const json& j) {
    ClusteringReport report;
    report.metadata = j.at("metadata");
    for (const auto& e : j.at("suggestions")) {
        spectral::Suggestion s;
        s.k = e.at("k").get<int>();
        s.t_revealing = e.at("t_revealing").get<int>();
        s.separation = e.at("separation").get<double>();
        s.trivial = e.at("trivial").get<bool>();
        s.assignment = e.at("assignment").get<std::vector<int>>();
        report.suggestions.push_back(std::move(s));
    }
    return report;
}

void emit_report(const ClusteringReport& report, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    {
        std::ofstream out(out_dir / "report.json");
        out << report_to_json(report).dump(2) << '\n';
        if (!out) throw std::runtime_error("emit_report: failed to write report.json");
    }
    {
        std::ofstream out(out_dir / "eigengaps.csv");
        out << std::setprecision(17);
        out << "t,k,delta\n";
        const auto& delta = report.profile.delta;
        for (Eigen::Index t = 0; t < delta.rows(); ++t)
            for (Eigen::Index k = 1; k < delta.cols(); ++k)
                out << (t + 1) << ',' << (k + 1) << ',' << delta(t, k) << '\n';
        if (!out) throw std::runtime_error("emit_report: failed to write eigengaps.csv");
    }
    {
        std::ofstream out(out_dir / "assignments.csv");
        out << "point_id,k,label\n";
        for (const auto& s : report.suggestions)
            for (std::size_t i = 0; i < s.assignment.size(); ++i)
                out << i << ',' << s.k << ',' << s.assignment[i] << '\n';
        if (!out) throw std::runtime_error("emit_report: failed to write assignments.csv");
    }
    if (!report.series.empty()) {
        std::ofstream out(out_dir / "paths.csv");
        market::write_paths_csv(out, report.series);
        if (!out) throw std::runtime_error("emit_report: failed to write paths.csv");
    }
}

Eigen::MatrixXd read_csv_matrix(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                    ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
                row.push_back(v);
            } catch (const std::exception&) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (first) {
                first = false;  // header line
                continue;
            }
            throw std::invalid_argument("csv: non-numeric cell in row " +
                                        std::to_string(rows.size() + 1));
        }
        first = false;
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::invalid_argument("csv: ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("csv: no data rows");
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < out.rows(); ++i)
        for (Eigen::Index j = 0; j < out.cols(); ++j)
            out(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return out;
}

Eigen::MatrixXd distances_from_coordinates(const Eigen::MatrixXd& points) {
    const Eigen::Index n = points.rows();
    if (n < 2) throw std::invalid_argument("distances_from_coordinates: need at least 2 points");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d = (points.row(i) - points.row(j)).norm();
            out(i, j) = d;
            out(j, i) = d;
        }
    return out;
}

}  // namespace sigclust::experiment
