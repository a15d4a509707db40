#include "sigclust/spectral_clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "sigclust/errors.hpp"

namespace sigclust::spectral {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_square(const Eigen::MatrixXd& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
}

// KL without input validation, for the inner clustering loops.
double kl_raw(const Eigen::RowVectorXd& p, const Eigen::RowVectorXd& q) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) {
            if (q[i] <= 0.0) return kInf;
            acc += p[i] * std::log(p[i] / q[i]);
        }
    }
    return acc;
}

// -sum_x p(x) log q(x); orders candidate prototypes identically to KL(p || q)
// since the entropy of p does not depend on q.
double cross_entropy(const Eigen::RowVectorXd& p, const Eigen::RowVectorXd& logq) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p[i] > 0.0) acc -= p[i] * logq[i];
    return acc;
}

Eigen::MatrixXd log_rows(const Eigen::MatrixXd& q) {
    Eigen::MatrixXd out(q.rows(), q.cols());
    for (Eigen::Index r = 0; r < q.rows(); ++r)
        for (Eigen::Index c = 0; c < q.cols(); ++c)
            out(r, c) = q(r, c) > 0.0 ? std::log(q(r, c)) : -kInf;
    return out;
}

// sum_x p(x) log p(x); the prototype-independent part of the divergence
double neg_entropy(const Eigen::RowVectorXd& p) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p[i] > 0.0) acc += p[i] * std::log(p[i]);
    return acc;
}

// Farthest-first scores: score[m] = min over chosen prototypes of
// KL(Pt_m || q). Updated incrementally, one prototype at a time.
void fold_in_prototype(const Eigen::MatrixXd& Pt, const Eigen::VectorXd& neg_entropies,
                       const Eigen::RowVectorXd& q, std::vector<double>& score) {
    Eigen::RowVectorXd logq(q.size());
    for (Eigen::Index i = 0; i < q.size(); ++i) logq[i] = q[i] > 0.0 ? std::log(q[i]) : -kInf;
    for (Eigen::Index m = 0; m < Pt.rows(); ++m) {
        const double kl = neg_entropies[m] + cross_entropy(Pt.row(m), logq);
        score[static_cast<std::size_t>(m)] = std::min(score[static_cast<std::size_t>(m)], kl);
    }
}

Eigen::Index best_scored_row(const std::vector<double>& score, const std::vector<bool>& excluded) {
    Eigen::Index best = -1;
    double best_score = -kInf;
    for (std::size_t m = 0; m < score.size(); ++m) {
        if (excluded[m]) continue;
        if (score[m] > best_score) {
            best_score = score[m];
            best = static_cast<Eigen::Index>(m);
        }
    }
    return best;
}

Eigen::VectorXd row_neg_entropies(const Eigen::MatrixXd& Pt) {
    Eigen::VectorXd out(Pt.rows());
    for (Eigen::Index m = 0; m < Pt.rows(); ++m) out[m] = neg_entropy(Pt.row(m));
    return out;
}

}  // namespace

Eigen::MatrixXd build_similarity(const Eigen::MatrixXd& distances,
                                 const SimilarityFn& similarity) {
    require_square(distances, "build_similarity");
    const Eigen::Index n = distances.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (distances(i, i) != 0.0)
            throw std::invalid_argument("build_similarity: diagonal must be zero");
        for (Eigen::Index j = 0; j < n; ++j) {
            if (distances(i, j) < 0.0)
                throw std::invalid_argument("build_similarity: negative distance");
            if (distances(i, j) != distances(j, i))
                throw std::invalid_argument("build_similarity: distances must be symmetric");
        }
    }
    Eigen::MatrixXd W(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double w = similarity(distances(i, j));
            if (!std::isfinite(w) || w < 0.0)
                throw std::invalid_argument(
                    "build_similarity: similarity function produced a non-finite or negative "
                    "weight at distance " +
                    std::to_string(distances(i, j)));
            W(i, j) = w;
            W(j, i) = w;
        }
    }
    return W;
}

TransitionMatrix transition_matrix(const Eigen::MatrixXd& W) {
    require_square(W, "transition_matrix");
    TransitionMatrix out;
    out.degrees = W.rowwise().sum();
    for (Eigen::Index i = 0; i < out.degrees.size(); ++i)
        if (!(out.degrees[i] > 0.0) || !std::isfinite(out.degrees[i]))
            throw std::invalid_argument("transition_matrix: row " + std::to_string(i) +
                                        " has non-positive or non-finite sum");
    out.P = out.degrees.cwiseInverse().asDiagonal() * W;
    return out;
}

TransitionSpectrum::TransitionSpectrum(const Eigen::MatrixXd& W) {
    const TransitionMatrix tm = transition_matrix(W);
    degrees_ = tm.degrees;
    const Eigen::VectorXd inv_sqrt = degrees_.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd sym = inv_sqrt.asDiagonal() * W * inv_sqrt.asDiagonal();
    sym = 0.5 * (sym + sym.transpose()).eval();  // clear rounding asymmetry

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success)
        throw NumericalError("spectrum: eigendecomposition failed");

    const Eigen::Index n = W.rows();
    eigenvalues_.resize(n);
    eigenvectors_.resize(n, n);
    // Eigen returns ascending order; flip to descending.
    for (Eigen::Index k = 0; k < n; ++k) {
        eigenvalues_[k] = solver.eigenvalues()[n - 1 - k];
        eigenvectors_.col(k) = inv_sqrt.asDiagonal() * solver.eigenvectors().col(n - 1 - k);
    }

    constexpr double kSlack = 1e-8;
    if (std::abs(eigenvalues_[0] - 1.0) > kSlack || eigenvalues_[n - 1] < -1.0 - kSlack)
        throw NumericalError("spectrum: eigenvalues outside the random-walk range");
}

TransitionSpectrum TransitionSpectrum::from_components(Eigen::VectorXd eigenvalues,
                                                       Eigen::MatrixXd eigenvectors,
                                                       Eigen::VectorXd degrees) {
    const Eigen::Index n = eigenvalues.size();
    if (eigenvectors.rows() != n || eigenvectors.cols() != n || degrees.size() != n)
        throw std::invalid_argument("TransitionSpectrum: component shapes disagree");
    for (Eigen::Index k = 1; k < n; ++k)
        if (eigenvalues[k] > eigenvalues[k - 1])
            throw std::invalid_argument("TransitionSpectrum: eigenvalues must be descending");
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(degrees[i] > 0.0))
            throw std::invalid_argument("TransitionSpectrum: degrees must be positive");
    TransitionSpectrum spec;
    spec.eigenvalues_ = std::move(eigenvalues);
    spec.eigenvectors_ = std::move(eigenvectors);
    spec.degrees_ = std::move(degrees);
    return spec;
}

Eigen::MatrixXd TransitionSpectrum::projector(Eigen::Index k) const {
    const Eigen::VectorXd v = eigenvectors_.col(k);
    const double norm = v.transpose() * degrees_.asDiagonal() * v;
    return (v * v.transpose() / norm) * degrees_.asDiagonal();
}

Eigen::MatrixXd power_rows(const TransitionSpectrum& spec, int t) {
    if (t < 1) throw std::invalid_argument("power_rows: t must be >= 1");
    const Eigen::Index n = spec.size();
    Eigen::VectorXd powered(n);
    for (Eigen::Index k = 0; k < n; ++k) powered[k] = std::pow(spec.eigenvalues()[k], t);
    const Eigen::MatrixXd& V = spec.eigenvectors();
    return (V * powered.asDiagonal() * V.transpose()) * spec.degrees().asDiagonal();
}

EigengapProfile eigengap_profile(const TransitionSpectrum& spec, int max_steps) {
    if (max_steps < 1) throw std::invalid_argument("eigengap_profile: max_steps must be >= 1");
    const Eigen::Index n = spec.size();
    if (n < 2) throw std::invalid_argument("eigengap_profile: need at least 2 points");
    EigengapProfile out;
    out.delta.resize(max_steps, n);
    out.best_k.resize(static_cast<std::size_t>(max_steps));
    out.delta_max.resize(static_cast<std::size_t>(max_steps));

    Eigen::VectorXd powered = spec.eigenvalues();
    for (int t = 1; t <= max_steps; ++t) {
        const Eigen::Index row = t - 1;
        int best = -1;
        double best_gap = -kInf;
        for (Eigen::Index k = 0; k < n; ++k) {
            const double next = (k + 1 < n) ? powered[k + 1] : 0.0;
            const double gap = powered[k] - next;
            out.delta(row, k) = gap;
            // k = 1 is not a clustering; the argmax runs over k >= 2
            if (k >= 1 && gap > best_gap) {
                best_gap = gap;
                best = static_cast<int>(k) + 1;
            }
        }
        out.best_k[static_cast<std::size_t>(row)] = best;
        out.delta_max[static_cast<std::size_t>(row)] = best_gap;
        powered.array() *= spec.eigenvalues().array();
    }

    // Local maxima of delta_max; a run of equal values counts once, at its
    // first step.
    const auto& dm = out.delta_max;
    std::size_t a = 0;
    while (a < dm.size()) {
        std::size_t b = a;
        while (b + 1 < dm.size() && dm[b + 1] == dm[a]) ++b;
        const bool rises_into = (a == 0) || (dm[a] > dm[a - 1]);
        const bool falls_after = (b + 1 == dm.size()) || (dm[b] > dm[b + 1]);
        if (rises_into && falls_after) out.local_maxima.push_back(static_cast<int>(a) + 1);
        a = b + 1;
    }
    return out;
}

double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
    if (p.size() != q.size()) throw std::invalid_argument("kl_divergence: size mismatch");
    constexpr double kSumTol = 1e-6;
    double sp = 0.0, sq = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p[i] < 0.0 || q[i] < 0.0)
            throw std::invalid_argument("kl_divergence: negative probability");
        sp += p[i];
        sq += q[i];
    }
    if (std::abs(sp - 1.0) > kSumTol || std::abs(sq - 1.0) > kSumTol)
        throw std::invalid_argument("kl_divergence: inputs must sum to 1");
    return kl_raw(p.transpose(), q.transpose());
}

PrototypeSet init_prototypes(const Eigen::MatrixXd& Pt, int k, SeededRng& rng) {
    require_square(Pt, "init_prototypes");
    const Eigen::Index n = Pt.rows();
    if (k < 1 || k > n) throw std::invalid_argument("init_prototypes: k must be in [1, n]");

    const Eigen::VectorXd neg_entropies = row_neg_entropies(Pt);
    std::vector<bool> chosen(static_cast<std::size_t>(n), false);
    std::vector<double> score(static_cast<std::size_t>(n), kInf);
    PrototypeSet q(k, n);

    Eigen::Index pick = static_cast<Eigen::Index>(rng.uniform_below(static_cast<std::size_t>(n)));
    for (int j = 0; j < k; ++j) {
        chosen[static_cast<std::size_t>(pick)] = true;
        q.row(j) = Pt.row(pick);
        if (j + 1 == k) break;
        fold_in_prototype(Pt, neg_entropies, q.row(j), score);
        pick = best_scored_row(score, chosen);
    }
    return q;
}

Partition k_prototypes(const Eigen::MatrixXd& Pt, int k, const PrototypeSet& q0, int max_iters) {
    require_square(Pt, "k_prototypes");
    const Eigen::Index n = Pt.rows();
    if (k < 1 || k > n) throw std::invalid_argument("k_prototypes: k must be in [1, n]");
    if (q0.rows() != k || q0.cols() != n)
        throw std::invalid_argument("k_prototypes: prototype matrix must be k x n");

    const Eigen::VectorXd neg_entropies = row_neg_entropies(Pt);
    Eigen::MatrixXd Q = q0;
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    std::vector<int> prev;
    Partition out;

    for (int iter = 0; iter < max_iters; ++iter) {
        const Eigen::MatrixXd logQ = log_rows(Q);
        double objective = 0.0;
        for (Eigen::Index m = 0; m < n; ++m) {
            int best = 0;
            double best_ce = kInf;
            for (int j = 0; j < k; ++j) {
                const double ce = cross_entropy(Pt.row(m), logQ.row(j));
                if (ce < best_ce) {
                    best_ce = ce;
                    best = j;
                }
            }
            labels[static_cast<std::size_t>(m)] = best + 1;
            objective += neg_entropies[m] + best_ce;
        }
        // at a fixed point the prototypes are already the assignment means, so
        // this records the objective of the returned configuration
        out.objective_history.push_back(objective);
        if (labels == prev) break;
        prev = labels;

        // prototype update: mean of the assigned rows
        std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
        Q.setZero();
        for (Eigen::Index m = 0; m < n; ++m) {
            const int j = labels[static_cast<std::size_t>(m)] - 1;
            Q.row(j) += Pt.row(m);
            ++counts[static_cast<std::size_t>(j)];
        }
        std::vector<double> score(static_cast<std::size_t>(n), kInf);
        std::vector<bool> none(static_cast<std::size_t>(n), false);
        bool have_scores = false;
        for (int j = 0; j < k; ++j)
            if (counts[static_cast<std::size_t>(j)] > 0)
                Q.row(j) /= static_cast<double>(counts[static_cast<std::size_t>(j)]);
        // reseed empty clusters so the space stays covered
        for (int j = 0; j < k; ++j) {
            if (counts[static_cast<std::size_t>(j)] > 0) continue;
            if (!have_scores) {
                for (int i = 0; i < k; ++i)
                    if (counts[static_cast<std::size_t>(i)] > 0)
                        fold_in_prototype(Pt, neg_entropies, Q.row(i), score);
                have_scores = true;
            }
            const Eigen::Index pick = best_scored_row(score, none);
            Q.row(j) = Pt.row(pick);
            fold_in_prototype(Pt, neg_entropies, Q.row(j), score);
        }
    }

    // Compact labels in case a cluster stayed empty (possible only when Pt has
    // fewer distinct rows than k); every returned label is then in use.
    std::vector<int> remap(static_cast<std::size_t>(k) + 1, 0);
    int next_label = 0;
    for (int label : labels)
        if (remap[static_cast<std::size_t>(label)] == 0)
            remap[static_cast<std::size_t>(label)] = ++next_label;
    for (int& label : labels) label = remap[static_cast<std::size_t>(label)];

    out.assignment = std::move(labels);
    out.k = next_label;
    out.objective = out.objective_history.empty() ? 0.0 : out.objective_history.back();
    return out;
}

namespace {

// Rows of a spectrally reconstructed power can carry tiny negative entries;
// clamp and renormalise so they are valid distributions for the KL machinery.
Eigen::MatrixXd row_distributions(Eigen::MatrixXd Pt) {
    for (Eigen::Index m = 0; m < Pt.rows(); ++m) {
        double sum = 0.0;
        for (Eigen::Index c = 0; c < Pt.cols(); ++c) {
            if (Pt(m, c) < 0.0) Pt(m, c) = 0.0;
            sum += Pt(m, c);
        }
        if (!(sum > 0.0)) throw NumericalError("multiscale_cluster: degenerate transition row");
        Pt.row(m) /= sum;
    }
    return Pt;
}

}  // namespace

MultiscaleResult multiscale_cluster(const Eigen::MatrixXd& distances,
                                    const SimilarityFn& similarity, int max_steps, int restarts,
                                    std::uint64_t seed) {
    if (distances.rows() < 2)
        throw std::invalid_argument("multiscale_cluster: need at least 2 points");
    if (restarts < 1) throw std::invalid_argument("multiscale_cluster: restarts must be >= 1");

    const Eigen::MatrixXd W = build_similarity(distances, similarity);
    const TransitionSpectrum spec(W);

    MultiscaleResult out;
    out.profile = eigengap_profile(spec, max_steps);

    for (const int t : out.profile.local_maxima) {
        const int k = out.profile.best_k[static_cast<std::size_t>(t - 1)];
        const Eigen::MatrixXd Pt = row_distributions(power_rows(spec, t));

        Partition best;
        bool have_best = false;
        for (int r = 0; r < restarts; ++r) {
            SeededRng rng(derive_seed(seed, static_cast<std::uint64_t>(t),
                                      static_cast<std::uint64_t>(r)));
            const PrototypeSet q0 = init_prototypes(Pt, k, rng);
            Partition candidate = k_prototypes(Pt, k, q0);
            if (!have_best || candidate.objective < best.objective) {
                best = std::move(candidate);
                have_best = true;
            }
        }

        Suggestion s;
        s.k = best.k;
        s.t_revealing = t;
        s.separation = out.profile.delta_max[static_cast<std::size_t>(t - 1)];
        s.trivial = (k == 1);
        s.assignment = std::move(best.assignment);
        out.suggestions.push_back(std::move(s));
    }

    std::stable_sort(out.suggestions.begin(), out.suggestions.end(),
                     [](const Suggestion& a, const Suggestion& b) {
                         if (a.separation != b.separation) return a.separation > b.separation;
                         if (a.k != b.k) return a.k < b.k;
                         return a.t_revealing < b.t_revealing;
                     });
    return out;
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("adjusted_rand_index: labelings must match and be non-empty");
    std::map<std::pair<int, int>, std::uint64_t> joint;
    std::map<int, std::uint64_t> ca, cb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++joint[{a[i], b[i]}];
        ++ca[a[i]];
        ++cb[b[i]];
    }
    const auto pairs = [](std::uint64_t n) { return static_cast<double>(n) * (n - 1) / 2.0; };
    double sum_joint = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& [key, count] : joint) sum_joint += pairs(count);
    for (const auto& [key, count] : ca) sum_a += pairs(count);
    for (const auto& [key, count] : cb) sum_b += pairs(count);
    const double total = pairs(static_cast<std::uint64_t>(a.size()));
    const double expected = sum_a * sum_b / total;
    const double max_index = 0.5 * (sum_a + sum_b);
    if (max_index == expected) return 1.0;  // both labelings degenerate
    return (sum_joint - expected) / (max_index - expected);
}

bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    std::map<int, int> fwd, bwd;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto [fit, fnew] = fwd.emplace(a[i], b[i]);
        if (!fnew && fit->second != b[i]) return false;
        const auto [bit, bnew] = bwd.emplace(b[i], a[i]);
        if (!bnew && bit->second != a[i]) return false;
    }
    return true;
}

}  // namespace sigclust::spectral
