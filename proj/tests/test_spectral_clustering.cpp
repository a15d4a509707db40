#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sigclust/errors.hpp"
#include "sigclust/rng.hpp"
#include "sigclust/spectral_clustering.hpp"

using namespace sigclust;
using namespace sigclust::spectral;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd random_distances(SeededRng& rng, Eigen::Index n) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            d(i, j) = 0.1 + 2.0 * rng.uniform01();
            d(j, i) = d(i, j);
        }
    return d;
}

SimilarityFn gaussian(double xi) {
    return [xi](double x) { return std::exp(-x / (xi * xi)); };
}

// Two internally uniform groups with zero cross-similarity.
Eigen::MatrixXd perfect_blocks(Eigen::Index a, Eigen::Index b) {
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(a + b, a + b);
    W.topLeftCorner(a, a).setOnes();
    W.bottomRightCorner(b, b).setOnes();
    return W;
}

// Block-constant distribution rows matching two perfect blocks.
Eigen::MatrixXd block_rows(Eigen::Index a, Eigen::Index b) {
    Eigen::MatrixXd Pt = Eigen::MatrixXd::Zero(a + b, a + b);
    Pt.topLeftCorner(a, a).setConstant(1.0 / static_cast<double>(a));
    Pt.bottomRightCorner(b, b).setConstant(1.0 / static_cast<double>(b));
    return Pt;
}

Eigen::MatrixXd naive_power(const Eigen::MatrixXd& P, int t) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(P.rows(), P.cols());
    for (int i = 0; i < t; ++i) out = out * P;
    return out;
}

TransitionSpectrum synthetic_spectrum(const std::vector<double>& eigenvalues) {
    const Eigen::Index n = static_cast<Eigen::Index>(eigenvalues.size());
    Eigen::VectorXd lambda(n);
    for (Eigen::Index i = 0; i < n; ++i) lambda[i] = eigenvalues[static_cast<std::size_t>(i)];
    return TransitionSpectrum::from_components(lambda, Eigen::MatrixXd::Identity(n, n),
                                               Eigen::VectorXd::Ones(n));
}

}  // namespace

TEST_CASE("similarity matrix construction") {
    Eigen::MatrixXd d(3, 3);
    d << 0, 1, 2, 1, 0, 1, 2, 1, 0;

    SUBCASE("gaussian weights, unit xi") {
        const Eigen::MatrixXd W = build_similarity(d, gaussian(1.0));
        CHECK(W(0, 0) == 1.0);
        CHECK(W(1, 1) == 1.0);
        CHECK(W(0, 1) == doctest::Approx(std::exp(-1.0)));
        CHECK(W(0, 2) == doctest::Approx(std::exp(-2.0)));
        CHECK(W(1, 0) == W(0, 1));
    }
    SUBCASE("monotone distances give monotone weights") {
        SeededRng rng(5);
        const Eigen::MatrixXd dist = random_distances(rng, 8);
        const Eigen::MatrixXd W = build_similarity(dist, gaussian(0.7));
        for (Eigen::Index i = 0; i < 8; ++i)
            for (Eigen::Index j = 0; j < 8; ++j)
                for (Eigen::Index k = 0; k < 8; ++k)
                    for (Eigen::Index l = 0; l < 8; ++l)
                        if (dist(i, j) < dist(k, l)) CHECK(W(i, j) >= W(k, l));
    }
    SUBCASE("invalid inputs are rejected") {
        Eigen::MatrixXd asym = d;
        asym(0, 1) = 5.0;
        CHECK_THROWS_AS(build_similarity(asym, gaussian(1.0)), std::invalid_argument);
        Eigen::MatrixXd neg = d;
        neg(0, 1) = neg(1, 0) = -1.0;
        CHECK_THROWS_AS(build_similarity(neg, gaussian(1.0)), std::invalid_argument);
        Eigen::MatrixXd diag = d;
        diag(1, 1) = 0.5;
        CHECK_THROWS_AS(build_similarity(diag, gaussian(1.0)), std::invalid_argument);
        // 1/x blows up on the zero diagonal
        CHECK_THROWS_AS(build_similarity(d, [](double x) { return 1.0 / x; }),
                        std::invalid_argument);
    }
}

TEST_CASE("transition matrix") {
    SUBCASE("identity weights stay put") {
        const TransitionMatrix tm = transition_matrix(Eigen::MatrixXd::Identity(3, 3));
        CHECK(tm.P.isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-15));
    }
    SUBCASE("uniform weights spread uniformly") {
        const TransitionMatrix tm = transition_matrix(Eigen::MatrixXd::Ones(4, 4));
        for (Eigen::Index i = 0; i < 4; ++i)
            for (Eigen::Index j = 0; j < 4; ++j) CHECK(tm.P(i, j) == doctest::Approx(0.25));
    }
    SUBCASE("row normalisation") {
        Eigen::MatrixXd W(2, 2);
        W << 1, 3, 3, 1;
        const TransitionMatrix tm = transition_matrix(W);
        CHECK(tm.P(0, 0) == doctest::Approx(0.25));
        CHECK(tm.P(0, 1) == doctest::Approx(0.75));
        CHECK(tm.P(1, 0) == doctest::Approx(0.75));
        CHECK(tm.P(1, 1) == doctest::Approx(0.25));
        CHECK(tm.degrees[0] == doctest::Approx(4.0));
    }
    SUBCASE("rows sum to one") {
        SeededRng rng(9);
        const Eigen::MatrixXd W = build_similarity(random_distances(rng, 10), gaussian(0.9));
        const TransitionMatrix tm = transition_matrix(W);
        for (Eigen::Index i = 0; i < 10; ++i)
            CHECK(std::abs(tm.P.row(i).sum() - 1.0) <= 1e-12);
    }
    SUBCASE("zero row sum is rejected") {
        CHECK_THROWS_AS(transition_matrix(Eigen::MatrixXd::Zero(3, 3)), std::invalid_argument);
    }
}

TEST_CASE("spectrum of the random walk") {
    SUBCASE("disconnected uniform blocks carry eigenvalue 1 per block") {
        const TransitionSpectrum spec(perfect_blocks(3, 4));
        CHECK(spec.eigenvalues()[0] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(spec.eigenvalues()[1] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(spec.eigenvalues()[2]) <= 1e-10);
    }
    SUBCASE("two points in closed form") {
        const double a = 0.37;
        Eigen::MatrixXd W(2, 2);
        W << 1, a, a, 1;
        const TransitionSpectrum spec(W);
        CHECK(spec.eigenvalues()[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(spec.eigenvalues()[1] == doctest::Approx((1 - a) / (1 + a)).epsilon(1e-12));
    }
    SUBCASE("identity weights give a flat spectrum") {
        const TransitionSpectrum spec(Eigen::MatrixXd::Identity(5, 5));
        for (Eigen::Index k = 0; k < 5; ++k)
            CHECK(spec.eigenvalues()[k] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("random similarities: bounds, ordering, projectors") {
        SeededRng rng(21);
        for (int rep = 0; rep < 8; ++rep) {
            const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng.uniform_below(10));
            const Eigen::MatrixXd W = build_similarity(random_distances(rng, n), gaussian(0.8));
            const TransitionSpectrum spec(W);
            CHECK(std::abs(spec.eigenvalues()[0] - 1.0) <= 1e-10);
            for (Eigen::Index k = 0; k < n; ++k) {
                CHECK(spec.eigenvalues()[k] <= 1.0 + 1e-10);
                CHECK(spec.eigenvalues()[k] >= -1.0 - 1e-10);
                if (k > 0) CHECK(spec.eigenvalues()[k] <= spec.eigenvalues()[k - 1]);
            }
            for (Eigen::Index k = 0; k < n; ++k) {
                const Eigen::MatrixXd Ak = spec.projector(k);
                CHECK((Ak * Ak - Ak).cwiseAbs().maxCoeff() <= 1e-8);
                for (Eigen::Index j = 0; j < n; ++j) {
                    if (j == k) continue;
                    CHECK((Ak * spec.projector(j)).cwiseAbs().maxCoeff() <= 1e-8);
                }
            }
        }
    }
}

TEST_CASE("powered transition rows") {
    SUBCASE("first power reproduces the transition matrix") {
        SeededRng rng(33);
        const Eigen::MatrixXd W = build_similarity(random_distances(rng, 7), gaussian(0.8));
        const TransitionSpectrum spec(W);
        CHECK((power_rows(spec, 1) - transition_matrix(W).P).cwiseAbs().maxCoeff() <= 1e-10);
    }
    SUBCASE("uniform pair is already stationary") {
        const TransitionSpectrum spec(Eigen::MatrixXd::Ones(2, 2));
        for (int t : {1, 2, 5, 50}) {
            const Eigen::MatrixXd Pt = power_rows(spec, t);
            CHECK(Pt(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(Pt(1, 0) == doctest::Approx(0.5).epsilon(1e-12));
        }
    }
    SUBCASE("perfect blocks equalise rows within each block") {
        const TransitionSpectrum spec(perfect_blocks(4, 3));
        const Eigen::MatrixXd Pt = power_rows(spec, 64);
        CHECK((Pt.row(0) - Pt.row(3)).cwiseAbs().maxCoeff() <= 1e-8);
        CHECK((Pt.row(4) - Pt.row(6)).cwiseAbs().maxCoeff() <= 1e-8);
    }
    SUBCASE("agrees with repeated multiplication") {
        SeededRng rng(41);
        for (int rep = 0; rep < 6; ++rep) {
            const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform_below(11));
            const Eigen::MatrixXd W = build_similarity(random_distances(rng, n), gaussian(0.8));
            const TransitionSpectrum spec(W);
            const Eigen::MatrixXd P = transition_matrix(W).P;
            for (int t : {1, 2, 3, 8, 17, 32}) {
                const Eigen::MatrixXd fast = power_rows(spec, t);
                CHECK((fast - naive_power(P, t)).cwiseAbs().maxCoeff() <= 1e-8);
                for (Eigen::Index i = 0; i < n; ++i)
                    CHECK(std::abs(fast.row(i).sum() - 1.0) <= 1e-8);
            }
        }
    }
    SUBCASE("t below one is rejected") {
        const TransitionSpectrum spec(Eigen::MatrixXd::Ones(2, 2));
        CHECK_THROWS_AS(power_rows(spec, 0), std::invalid_argument);
    }
}

TEST_CASE("eigengap profile") {
    SUBCASE("two stable groups: the pair gap rules at every step") {
        const EigengapProfile prof = eigengap_profile(synthetic_spectrum({1.0, 1.0, 0.3}), 60);
        double prev = 0.0;
        for (int t = 1; t <= 60; ++t) {
            CHECK(prof.best_k[static_cast<std::size_t>(t - 1)] == 2);
            const double d2 = prof.delta(t - 1, 1);
            CHECK(d2 == doctest::Approx(1.0 - std::pow(0.3, t)).epsilon(1e-12));
            // strictly increasing until 0.3^t drops below double resolution
            if (t <= 30)
                CHECK(d2 > prev);
            else
                CHECK(d2 >= prev);
            prev = d2;
        }
    }
    SUBCASE("slow pair decay: revealed count falls from 3 to 2 to 1") {
        const std::vector<double> lambda{1.0, 0.99, 0.5};
        const EigengapProfile prof = eigengap_profile(synthetic_spectrum(lambda), 1000);
        for (int t = 1; t <= 1000; ++t) {
            // direct evaluation of the defining formula over k = 2..n
            const double gaps[3] = {1.0 - std::pow(0.99, t),
                                    std::pow(0.99, t) - std::pow(0.5, t), std::pow(0.5, t)};
            int expect = 1;
            for (int k = 2; k < 3; ++k)
                if (gaps[k] > gaps[expect]) expect = k;
            CHECK(prof.best_k[static_cast<std::size_t>(t - 1)] == expect + 1);
            // the k = 1 gap is still tabulated even though it never competes
            CHECK(prof.delta(t - 1, 0) == doctest::Approx(gaps[0]).epsilon(1e-12));
        }
        CHECK(prof.best_k[0] == 3);  // at t = 1 the singleton gap still wins
        CHECK(prof.best_k[1] == 2);  // the pair gap overtakes immediately after
        CHECK(prof.best_k[999] == 2);
    }
    SUBCASE("flat spectrum has no gaps below the top level") {
        const EigengapProfile prof = eigengap_profile(synthetic_spectrum({1.0, 1.0, 1.0}), 10);
        for (int t = 1; t <= 10; ++t) {
            CHECK(prof.delta(t - 1, 0) == 0.0);
            CHECK(prof.delta(t - 1, 1) == 0.0);
            // the all-singletons gap stays pinned at 1 for fully disconnected points
            CHECK(prof.delta(t - 1, 2) == 1.0);
        }
        CHECK(prof.local_maxima == std::vector<int>{1});
    }
    SUBCASE("envelope dominates every gap and stays within 1 on gaussian weights") {
        SeededRng rng(55);
        const Eigen::MatrixXd W = build_similarity(random_distances(rng, 9), gaussian(0.8));
        const EigengapProfile prof = eigengap_profile(TransitionSpectrum(W), 200);
        for (int t = 1; t <= 200; ++t) {
            for (Eigen::Index k = 1; k < 9; ++k)
                CHECK(prof.delta_max[static_cast<std::size_t>(t - 1)] >= prof.delta(t - 1, k));
            CHECK(prof.delta_max[static_cast<std::size_t>(t - 1)] <= 1.0 + 1e-12);
        }
    }
    SUBCASE("plateaus collapse to their first step") {
        const EigengapProfile prof = eigengap_profile(synthetic_spectrum({1.0, 1.0, 0.0}), 25);
        // the pair gap is exactly 1 from the first step on
        CHECK(prof.local_maxima == std::vector<int>{1});
        CHECK(prof.best_k[0] == 2);
    }
}

TEST_CASE("kl divergence") {
    Eigen::VectorXd p(2), q(2);
    SUBCASE("zero on identical distributions") {
        p << 0.3, 0.7;
        CHECK(kl_divergence(p, p) == 0.0);
    }
    SUBCASE("single surviving term") {
        p << 1.0, 0.0;
        q << 0.5, 0.5;
        CHECK(kl_divergence(p, q) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    }
    SUBCASE("support violation returns the infinity marker") {
        p << 0.5, 0.5;
        q << 1.0, 0.0;
        CHECK(kl_divergence(p, q) == kInf);
    }
    SUBCASE("unnormalised or negative inputs are rejected") {
        p << 0.5, 0.6;
        q << 0.5, 0.5;
        CHECK_THROWS_AS(kl_divergence(p, q), std::invalid_argument);
        p << 1.5, -0.5;
        CHECK_THROWS_AS(kl_divergence(p, q), std::invalid_argument);
    }
    SUBCASE("non-negative on random distribution pairs") {
        SeededRng rng(61);
        for (int rep = 0; rep < 50; ++rep) {
            Eigen::VectorXd a(5), b(5);
            for (int i = 0; i < 5; ++i) {
                a[i] = rng.uniform01();
                b[i] = rng.uniform01();
            }
            a /= a.sum();
            b /= b.sum();
            CHECK(kl_divergence(a, b) >= 0.0);
        }
    }
}

TEST_CASE("prototype seeding") {
    SUBCASE("one prototype is some row") {
        const Eigen::MatrixXd Pt = block_rows(2, 2);
        SeededRng rng(71);
        const PrototypeSet q = init_prototypes(Pt, 1, rng);
        bool is_row = false;
        for (Eigen::Index m = 0; m < 4; ++m)
            if ((q.row(0) - Pt.row(m)).cwiseAbs().maxCoeff() == 0.0) is_row = true;
        CHECK(is_row);
    }
    SUBCASE("two prototypes land in different blocks") {
        const Eigen::MatrixXd Pt = block_rows(3, 3);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            SeededRng rng(seed);
            const PrototypeSet q = init_prototypes(Pt, 2, rng);
            // block membership shows in the first coordinate
            CHECK(((q(0, 0) > 0.0) != (q(1, 0) > 0.0)));
        }
    }
    SUBCASE("k equal to n selects every row") {
        SeededRng rng(77);
        Eigen::MatrixXd Pt(3, 3);
        Pt << 0.6, 0.2, 0.2, 0.1, 0.8, 0.1, 0.25, 0.25, 0.5;
        const PrototypeSet q = init_prototypes(Pt, 3, rng);
        for (Eigen::Index m = 0; m < 3; ++m) {
            bool found = false;
            for (Eigen::Index j = 0; j < 3; ++j)
                if ((q.row(j) - Pt.row(m)).cwiseAbs().maxCoeff() == 0.0) found = true;
            CHECK(found);
        }
    }
    SUBCASE("k out of range") {
        SeededRng rng(1);
        CHECK_THROWS_AS(init_prototypes(block_rows(2, 2), 5, rng), std::invalid_argument);
        CHECK_THROWS_AS(init_prototypes(block_rows(2, 2), 0, rng), std::invalid_argument);
    }
}

TEST_CASE("k-prototypes clustering") {
    SUBCASE("perfect blocks are recovered from any start") {
        const Eigen::MatrixXd Pt = block_rows(3, 4);
        SeededRng rng(83);
        for (int rep = 0; rep < 10; ++rep) {
            PrototypeSet q0(2, 7);
            for (Eigen::Index j = 0; j < 2; ++j) {
                for (Eigen::Index c = 0; c < 7; ++c) q0(j, c) = 0.05 + rng.uniform01();
                q0.row(j) /= q0.row(j).sum();
            }
            const Partition part = k_prototypes(Pt, 2, q0);
            CHECK(part.k == 2);
            CHECK(same_partition(part.assignment, {1, 1, 1, 2, 2, 2, 2}));
            CHECK(part.objective <= 1e-12);
        }
    }
    SUBCASE("single cluster swallows everything") {
        const Eigen::MatrixXd Pt = block_rows(2, 3);
        const Partition part = k_prototypes(Pt, 1, PrototypeSet::Ones(1, 5) / 5.0);
        CHECK(part.k == 1);
        CHECK(part.assignment == std::vector<int>{1, 1, 1, 1, 1});
    }
    SUBCASE("k equal to n gives singletons on distinct rows") {
        Eigen::MatrixXd Pt(3, 3);
        Pt << 0.6, 0.2, 0.2, 0.1, 0.8, 0.1, 0.25, 0.25, 0.5;
        SeededRng rng(87);
        const Partition part = k_prototypes(Pt, 3, init_prototypes(Pt, 3, rng));
        CHECK(part.k == 3);
        CHECK(same_partition(part.assignment, {1, 2, 3}));
    }
    SUBCASE("objective never increases") {
        SeededRng rng(91);
        for (int rep = 0; rep < 10; ++rep) {
            const Eigen::Index n = 8;
            Eigen::MatrixXd Pt(n, n);
            for (Eigen::Index m = 0; m < n; ++m) {
                for (Eigen::Index c = 0; c < n; ++c) Pt(m, c) = 0.01 + rng.uniform01();
                Pt.row(m) /= Pt.row(m).sum();
            }
            const Partition part = k_prototypes(Pt, 3, init_prototypes(Pt, 3, rng));
            for (std::size_t i = 1; i < part.objective_history.size(); ++i)
                CHECK(part.objective_history[i] <= part.objective_history[i - 1] + 1e-12);
        }
    }
    SUBCASE("a fixed point stays fixed") {
        const Eigen::MatrixXd Pt = block_rows(3, 4);
        SeededRng rng(97);
        const Partition part = k_prototypes(Pt, 2, init_prototypes(Pt, 2, rng));
        // rebuild prototypes from the returned assignment and run again
        PrototypeSet q = PrototypeSet::Zero(2, 7);
        Eigen::VectorXd counts = Eigen::VectorXd::Zero(2);
        for (Eigen::Index m = 0; m < 7; ++m) {
            q.row(part.assignment[static_cast<std::size_t>(m)] - 1) += Pt.row(m);
            counts[part.assignment[static_cast<std::size_t>(m)] - 1] += 1.0;
        }
        for (Eigen::Index j = 0; j < 2; ++j) q.row(j) /= counts[j];
        const Partition again = k_prototypes(Pt, 2, q);
        CHECK(again.assignment == part.assignment);
    }
}

TEST_CASE("multiscale clustering") {
    SUBCASE("two well-separated groups yield a single pair suggestion") {
        // distances: tiny within the groups, huge across
        const Eigen::Index n = 8;
        Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const bool same = (i < 4) == (j < 4);
                dist(i, j) = dist(j, i) = same ? 0.1 : 50.0;
            }
        const MultiscaleResult res = multiscale_cluster(dist, gaussian(1.0), 400, 4, 123);
        REQUIRE(!res.suggestions.empty());
        const Suggestion& top = res.suggestions.front();
        CHECK(top.k == 2);
        CHECK(top.separation >= 0.999);
        CHECK(same_partition(top.assignment, {1, 1, 1, 1, 2, 2, 2, 2}));
    }
    SUBCASE("two mutually distant points split apart") {
        Eigen::MatrixXd dist(2, 2);
        dist << 0.0, 10.0, 10.0, 0.0;
        const MultiscaleResult res = multiscale_cluster(dist, gaussian(0.5), 100, 2, 7);
        bool found_pair = false;
        for (const auto& s : res.suggestions)
            if (s.k == 2) {
                found_pair = true;
                CHECK(same_partition(s.assignment, {1, 2}));
            }
        CHECK(found_pair);
    }
    SUBCASE("suggestions are sorted by separation and flagged when trivial") {
        SeededRng rng(103);
        const Eigen::MatrixXd dist = random_distances(rng, 9);
        const MultiscaleResult res = multiscale_cluster(dist, gaussian(0.6), 300, 3, 11);
        for (std::size_t i = 1; i < res.suggestions.size(); ++i)
            CHECK(res.suggestions[i - 1].separation >= res.suggestions[i].separation);
        for (const auto& s : res.suggestions) {
            CHECK(s.trivial == (s.k == 1));
            CHECK(s.separation <= 1.0 + 1e-12);
            CHECK(s.separation > -1.0);
        }
    }
    SUBCASE("three constructed clusters are reproduced exactly") {
        // within-group similarity strictly above every cross-group similarity
        const Eigen::Index n = 9;
        Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const bool same = (i / 3) == (j / 3);
                dist(i, j) = dist(j, i) = same ? 0.2 : 30.0;
            }
        const MultiscaleResult res = multiscale_cluster(dist, gaussian(1.0), 500, 5, 29);
        bool found = false;
        for (const auto& s : res.suggestions)
            if (s.k == 3 && !found) {
                found = true;
                CHECK(same_partition(s.assignment, {1, 1, 1, 2, 2, 2, 3, 3, 3}));
            }
        CHECK(found);
    }
    SUBCASE("permuting the points permutes every partition") {
        // three separated groups on a line, sizes 3 / 3 / 2
        std::vector<double> coords{0.0, 0.1, 0.2, 10.0, 10.1, 10.2, 20.0, 20.1};
        const Eigen::Index n = static_cast<Eigen::Index>(coords.size());
        std::vector<Eigen::Index> perm{5, 2, 7, 0, 3, 6, 1, 4};

        const auto dist_of = [&](const std::vector<double>& c) {
            Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = i + 1; j < n; ++j)
                    d(i, j) = d(j, i) = std::abs(c[static_cast<std::size_t>(i)] -
                                                 c[static_cast<std::size_t>(j)]);
            return d;
        };
        std::vector<double> permuted(coords.size());
        for (Eigen::Index i = 0; i < n; ++i)
            permuted[static_cast<std::size_t>(i)] = coords[static_cast<std::size_t>(perm[i])];

        const MultiscaleResult base = multiscale_cluster(dist_of(coords), gaussian(1.0), 300, 5, 17);
        const MultiscaleResult moved =
            multiscale_cluster(dist_of(permuted), gaussian(1.0), 300, 5, 17);
        REQUIRE(base.suggestions.size() == moved.suggestions.size());
        for (std::size_t s = 0; s < base.suggestions.size(); ++s) {
            const auto& b = base.suggestions[s];
            const auto& m = moved.suggestions[s];
            CHECK(b.k == m.k);
            CHECK(b.t_revealing == m.t_revealing);
            std::vector<int> unpermuted(static_cast<std::size_t>(n));
            for (Eigen::Index i = 0; i < n; ++i)
                unpermuted[static_cast<std::size_t>(perm[i])] =
                    m.assignment[static_cast<std::size_t>(i)];
            CHECK(same_partition(b.assignment, unpermuted));
        }
    }
}

TEST_CASE("partition agreement measures") {
    CHECK(adjusted_rand_index({1, 1, 2, 2}, {2, 2, 1, 1}) == doctest::Approx(1.0));
    CHECK(adjusted_rand_index({1, 1, 1, 2, 2, 2}, {1, 1, 2, 2, 3, 3}) ==
          doctest::Approx(8.0 / 33.0).epsilon(1e-12));
    CHECK(same_partition({1, 1, 2}, {5, 5, 9}));
    CHECK(!same_partition({1, 1, 2}, {1, 2, 2}));
    CHECK(!same_partition({1, 2, 3}, {1, 1, 1}));
}
