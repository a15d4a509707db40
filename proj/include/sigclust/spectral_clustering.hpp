#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

#include "sigclust/rng.hpp"

namespace sigclust::spectral {

// Monotonically decreasing map from distance to similarity weight.
using SimilarityFn = std::function<double(double)>;

// W_ij = similarity(d_ij). Distances must be square, symmetric, non-negative
// with a zero diagonal; produced weights must be finite and positive.
Eigen::MatrixXd build_similarity(const Eigen::MatrixXd& distances, const SimilarityFn& similarity);

struct TransitionMatrix {
    Eigen::MatrixXd P;       // row-stochastic random-walk matrix D^{-1} W
    Eigen::VectorXd degrees;  // D_ii = row sums of W
};

TransitionMatrix transition_matrix(const Eigen::MatrixXd& W);

// Spectrum of the random-walk matrix of W. The eigenproblem is solved on the
// symmetric conjugate D^{-1/2} W D^{-1/2}, which shares eigenvalues with P and
// keeps the spectrum real; eigenvectors of P are recovered as D^{-1/2} u and
// come out with unit D-weighted norm.
class TransitionSpectrum {
public:
    explicit TransitionSpectrum(const Eigen::MatrixXd& W);

    // Assemble from prearranged components (descending eigenvalues, matching
    // eigenvector columns, positive degrees); useful for synthetic spectra.
    static TransitionSpectrum from_components(Eigen::VectorXd eigenvalues,
                                              Eigen::MatrixXd eigenvectors,
                                              Eigen::VectorXd degrees);

    Eigen::Index size() const { return eigenvalues_.size(); }

    // Sorted descending; the leading one equals 1 up to solver accuracy.
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

    // Column k is the eigenvector of P for eigenvalues()[k].
    const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }

    const Eigen::VectorXd& degrees() const { return degrees_; }

    // A_k = v_k v_k^T D / (v_k^T D v_k); idempotent and mutually orthogonal.
    Eigen::MatrixXd projector(Eigen::Index k) const;

private:
    TransitionSpectrum() = default;

    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenvectors_;
    Eigen::VectorXd degrees_;
};

inline TransitionSpectrum spectrum(const Eigen::MatrixXd& W) { return TransitionSpectrum(W); }

// P^t through the spectral expansion: sum of lambda_k^t A_k. Rows are the
// particle distributions after t steps.
Eigen::MatrixXd power_rows(const TransitionSpectrum& spec, int t);

// Eigengap table. delta(t-1, k-1) holds lambda_k^t - lambda_{k+1}^t for
// k = 1..n with the convention lambda_{n+1} = 0, so the k = n entry measures
// the all-singletons gap. best_k is the argmax over k >= 2 (k = 1 is not a
// clustering; its gap is still tabulated), smallest index on ties; delta_max
// is the corresponding value and local_maxima the steps where it attains a
// local maximum (plateaus collapse to their first step).
struct EigengapProfile {
    Eigen::MatrixXd delta;          // max_steps x n
    std::vector<int> best_k;        // per step, 1-based k
    std::vector<double> delta_max;  // per step
    std::vector<int> local_maxima;  // ascending step numbers, 1-based
};

EigengapProfile eigengap_profile(const TransitionSpectrum& spec, int max_steps);

// sum_x p(x) log(p(x)/q(x)) with 0 log 0 = 0; +infinity when p charges a
// point with q(x) = 0. Inputs must be distributions.
double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

// k x n row-stochastic matrix of cluster prototypes.
using PrototypeSet = Eigen::MatrixXd;

// Farthest-first seeding: a uniformly random row of Pt first, then rows
// maximising the minimum KL divergence to everything already chosen.
PrototypeSet init_prototypes(const Eigen::MatrixXd& Pt, int k, SeededRng& rng);

struct Partition {
    std::vector<int> assignment;            // labels in {1..k}, every label used
    int k = 0;
    double objective = 0.0;                  // sum of KL(row || its prototype)
    std::vector<double> objective_history;   // value after each update step
};

// Lloyd-style alternation between KL assignment and prototype averaging.
// Empty clusters are reseeded with the row farthest (in min-KL) from the
// defined prototypes. Stops at an assignment fixed point or max_iters.
Partition k_prototypes(const Eigen::MatrixXd& Pt, int k, const PrototypeSet& q0,
                       int max_iters = 300);

struct Suggestion {
    int k = 0;
    int t_revealing = 0;
    double separation = 0.0;
    bool trivial = false;  // k = 1 carries no cluster structure
    std::vector<int> assignment;
};

struct MultiscaleResult {
    std::vector<Suggestion> suggestions;  // sorted by separation, descending
    EigengapProfile profile;
};

// The full multiscale pipeline: similarity, spectrum, eigengap scan, then one
// k-prototypes run (best of `restarts` seeded initialisations) per local
// maximum of the separation curve. Restart streams derive from `seed`, so
// results do not depend on evaluation order.
MultiscaleResult multiscale_cluster(const Eigen::MatrixXd& distances,
                                    const SimilarityFn& similarity, int max_steps, int restarts,
                                    std::uint64_t seed);

// Chance-corrected agreement between two labelings of the same points.
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

// True when the two labelings induce the same partition up to renaming.
bool same_partition(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace sigclust::spectral
