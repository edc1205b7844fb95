#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "../support/oracles.hpp"
#include "streamlabel/gp.hpp"

using namespace streamlabel;

namespace {

Point random_point(std::mt19937_64& rng, std::size_t d) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Point p(d);
    for (auto& v : p) v = u(rng);
    return p;
}

}  // namespace

TEST(GpPosterior, EmptyIsPrior) {
    GpPosterior gp({KernelFamily::SquaredExponential, 0.3, 2}, 0.1);
    const Point x{0.2, 0.9};
    const auto p = gp.predict(x);
    EXPECT_EQ(p.mean, 0.0);
    EXPECT_EQ(p.stddev, 1.0);
}

TEST(GpPosterior, SingleObservationClosedForm) {
    GpPosterior gp({KernelFamily::SquaredExponential, 0.3, 1}, 1.0);
    const Point x{0.4};
    gp.update(x, 1.0);
    const auto p = gp.predict(x);
    EXPECT_NEAR(p.mean, 0.5, 1e-15);
    EXPECT_NEAR(p.stddev, std::sqrt(0.5), 1e-15);
}

TEST(GpPosterior, FarFieldReturnsToPrior) {
    std::mt19937_64 rng(4);
    const double l = 0.05;
    GpPosterior gp({KernelFamily::SquaredExponential, l, 2}, 0.01);
    double y1 = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double y = std::sin(double(i));
        gp.update(random_point(rng, 2), y);
        y1 += std::abs(y);
    }
    const Point far{1.0 + 20 * l * std::sqrt(2.0) + 0.01, 1.0 + 20 * l};
    const auto p = gp.predict(far);
    EXPECT_LE(std::abs(p.mean), 1e-6 * y1);
    EXPECT_GE(p.stddev, 1.0 - 1e-6);
    EXPECT_LE(p.stddev, 1.0);
}

TEST(GpPosterior, NearInterpolationAtTinyNoise) {
    GpPosterior gp({KernelFamily::Matern52, 0.2, 2}, 1e-8);
    const Point a{0.1, 0.1}, b{0.8, 0.3};
    gp.update(a, 2.0);
    gp.update(b, -1.5);
    EXPECT_NEAR(gp.predict(a).mean, 2.0, 1e-3);
    EXPECT_NEAR(gp.predict(b).mean, -1.5, 1e-3);
}

TEST(GpPosterior, IncrementalMatchesDenseSolve) {
    std::mt19937_64 rng(30);
    GpPosterior gp({KernelFamily::SquaredExponential, 0.4, 3}, 0.05);
    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 30; ++i) {
        xs.push_back(random_point(rng, 3));
        ys.push_back(n(rng));
        gp.update(xs.back(), ys.back());
    }
    for (int p = 0; p < 10; ++p) {
        const Point probe = random_point(rng, 3);
        const auto ref = oracle::dense_posterior(0, 0.4, 0.05, xs, ys, probe);
        const auto got = gp.predict(probe);
        EXPECT_NEAR(got.mean, ref.mean, 1e-8);
        EXPECT_NEAR(got.stddev, std::sqrt(ref.variance), 1e-8);
    }
}

TEST(GpPosterior, FactorReconstructsGram) {
    std::mt19937_64 rng(31);
    GpPosterior gp({KernelFamily::Matern32, 0.3, 2}, 0.02);
    for (int i = 0; i < 40; ++i) gp.update(random_point(rng, 2), 0.1 * i);
    const Eigen::MatrixXd l = gp.factor();
    EXPECT_LE((l * l.transpose() - gp.regularized_gram()).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_TRUE(l.isLowerTriangular());
}

TEST(GpPosterior, FromDataMatchesIncremental) {
    std::mt19937_64 rng(32);
    std::vector<Point> xs;
    std::vector<double> ys;
    for (int i = 0; i < 25; ++i) {
        xs.push_back(random_point(rng, 2));
        ys.push_back(std::cos(3.0 * i));
    }
    const KernelSpec k{KernelFamily::Matern12, 0.25, 2};
    GpPosterior inc(k, 0.1);
    for (std::size_t i = 0; i < xs.size(); ++i) inc.update(xs[i], ys[i]);
    const auto batch = GpPosterior::from_data(k, 0.1, xs, ys);
    for (int p = 0; p < 10; ++p) {
        const Point probe = random_point(rng, 2);
        EXPECT_NEAR(inc.predict(probe).mean, batch.predict(probe).mean, 1e-10);
        EXPECT_NEAR(inc.predict(probe).stddev, batch.predict(probe).stddev, 1e-10);
    }
}

TEST(GpPosterior, DuplicatePointFallsBackToJitter) {
    GpPosterior gp({KernelFamily::SquaredExponential, 0.3, 1}, 1e-14);
    const Point x{0.5};
    gp.update(x, 1.0);
    EXPECT_EQ(gp.jitter(), 0.0);
    gp.update(x, 1.0);
    EXPECT_EQ(gp.jitter(), kCholeskyJitter);
    EXPECT_EQ(gp.size(), 2u);
    EXPECT_NEAR(gp.predict(x).mean, 1.0, 1e-6);
}

TEST(GpPosterior, RejectsBadInputs) {
    EXPECT_THROW(GpPosterior({KernelFamily::SquaredExponential, 0.3, 1}, 0.0), std::invalid_argument);
    GpPosterior gp({KernelFamily::SquaredExponential, 0.3, 2}, 0.1);
    const Point wrong{0.5};
    EXPECT_THROW(gp.predict(wrong), std::invalid_argument);
    EXPECT_THROW(gp.update(wrong, 0.0), std::invalid_argument);
}

// Properties: variance monotonicity and permutation invariance.
TEST(GpProperty, StddevNeverIncreasesAfterUpdate) {
    std::mt19937_64 rng(33);
    GpPosterior gp({KernelFamily::Matern52, 0.2, 2}, 0.01);
    std::vector<Point> probes;
    for (int i = 0; i < 10; ++i) probes.push_back(random_point(rng, 2));
    std::vector<double> prev(10, 1.0);
    for (int step = 0; step < 80; ++step) {
        gp.update(random_point(rng, 2), std::sin(double(step)));
        for (int i = 0; i < 10; ++i) {
            const double s = gp.predict(probes[i]).stddev;
            ASSERT_LE(s, prev[i] + 1e-10);
            ASSERT_GT(s, 0.0);
            prev[i] = s;
        }
    }
}

TEST(GpProperty, PermutationInvariant) {
    std::mt19937_64 rng(34);
    std::vector<Point> xs;
    std::vector<double> ys;
    for (int i = 0; i < 30; ++i) {
        xs.push_back(random_point(rng, 3));
        ys.push_back(double(i % 7) - 3.0);
    }
    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    const KernelSpec k{KernelFamily::SquaredExponential, 0.3, 3};
    GpPosterior a(k, 0.05), b(k, 0.05);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        a.update(xs[i], ys[i]);
        b.update(xs[order[i]], ys[order[i]]);
    }
    for (int p = 0; p < 10; ++p) {
        const Point probe = random_point(rng, 3);
        EXPECT_NEAR(a.predict(probe).mean, b.predict(probe).mean, 1e-8);
        EXPECT_NEAR(a.predict(probe).stddev, b.predict(probe).stddev, 1e-8);
    }
}

TEST(LogMarginalLikelihood, EmptyIsZero) {
    EXPECT_EQ(log_marginal_likelihood({}, {}, {KernelFamily::SquaredExponential, 1.0, 1}, 1.0), 0.0);
}

TEST(LogMarginalLikelihood, ScalarValue) {
    const std::vector<Point> xs{{0.3}};
    const std::vector<double> ys{0.0};
    const double expected = -0.5 * std::log(2.0) - 0.5 * std::log(2.0 * std::numbers::pi);
    EXPECT_NEAR(log_marginal_likelihood(xs, ys, {KernelFamily::SquaredExponential, 1.0, 1}, 1.0), expected, 1e-12);
    EXPECT_NEAR(expected, -1.265512, 1e-6);
}

TEST(LogMarginalLikelihood, ScalingLabelsUpDecreasesIt) {
    std::mt19937_64 rng(35);
    std::vector<Point> xs;
    std::vector<double> ys, ys2;
    for (int i = 0; i < 15; ++i) {
        xs.push_back(random_point(rng, 2));
        ys.push_back(std::sin(5.0 * i));
        ys2.push_back(2.0 * ys.back());
    }
    const KernelSpec k{KernelFamily::Matern32, 0.3, 2};
    EXPECT_LT(log_marginal_likelihood(xs, ys2, k, 0.1), log_marginal_likelihood(xs, ys, k, 0.1));
}

TEST(LogMarginalLikelihood, MatchesDenseOracle) {
    std::mt19937_64 rng(36);
    std::vector<Point> xs;
    std::vector<double> ys;
    for (int i = 0; i < 20; ++i) {
        xs.push_back(random_point(rng, 2));
        ys.push_back(std::cos(2.0 * i));
    }
    const int n = 20;
    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        y(i) = ys[i];
        for (int j = 0; j < n; ++j) a(i, j) = oracle::kernel(0, 0.3, xs[i], xs[j]) + (i == j ? 0.1 : 0.0);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    const double expected = -0.5 * y.dot(lu.solve(y)) - 0.5 * std::log(lu.determinant()) -
                            0.5 * n * std::log(2.0 * std::numbers::pi);
    EXPECT_NEAR(log_marginal_likelihood(xs, ys, {KernelFamily::SquaredExponential, 0.3, 2}, 0.1), expected, 1e-9);
}

TEST(TuneHyperparams, SingleEntryGrid) {
    const std::vector<Point> xs{{0.1}, {0.7}};
    const std::vector<double> ys{1.0, -1.0};
    const std::vector<double> grid{0.42};
    EXPECT_EQ(tune_hyperparams(xs, ys, 0.1, grid, {KernelFamily::SquaredExponential, 1.0, 1}).lengthscale, 0.42);
}

TEST(TuneHyperparams, EmptyGridThrows) {
    EXPECT_THROW(tune_hyperparams({}, {}, 0.1, {}, {KernelFamily::SquaredExponential, 1.0, 1}), std::invalid_argument);
}

TEST(TuneHyperparams, EqualsExhaustiveArgmax) {
    std::mt19937_64 rng(37);
    const std::vector<double> grid = {0.05, 0.1, 0.2, 0.3, 0.5, 1.0};
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<Point> xs;
        std::vector<double> zeros;
        for (int i = 0; i < 12; ++i) {
            xs.push_back(random_point(rng, 2));
            zeros.push_back(0.0);
        }
        const KernelSpec base{KernelFamily::SquaredExponential, 1.0, 2};
        double best = -1e300, best_l = 0.0;
        for (double l : grid) {
            const double v = log_marginal_likelihood(xs, zeros, {KernelFamily::SquaredExponential, l, 2}, 0.1);
            if (v > best) {
                best = v;
                best_l = l;
            }
        }
        EXPECT_EQ(tune_hyperparams(xs, zeros, 0.1, grid, base).lengthscale, best_l);
    }
}

// Draw labels from a GP with l* = 0.3 and check the grid search recovers it.
TEST(TuneHyperparams, RecoversGenerativeLengthscale) {
    const std::vector<double> grid = {0.05, 0.1, 0.2, 0.3, 0.5, 1.0};
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::mt19937_64 rng(100 + seed);
        std::vector<Point> xs;
        for (int i = 0; i < 40; ++i) xs.push_back(random_point(rng, 2));
        const Eigen::MatrixXd g = regularized_gram({KernelFamily::SquaredExponential, 0.3, 2}, 0.01, xs);
        const Eigen::MatrixXd l = g.llt().matrixL();
        Eigen::VectorXd z(40);
        std::normal_distribution<double> n(0.0, 1.0);
        for (int i = 0; i < 40; ++i) z(i) = n(rng);
        const Eigen::VectorXd f = l * z;
        std::vector<double> ys(f.data(), f.data() + f.size());
        const double got = tune_hyperparams(xs, ys, 0.01, grid, {KernelFamily::SquaredExponential, 1.0, 2}).lengthscale;
        if (got >= 0.2 && got <= 0.5) ++hits;
    }
    EXPECT_GE(hits, 8);
}

TEST(VarianceBound, AllPointsAtProbe) {
    const Point x{0.4, 0.6};
    for (std::size_t s : {1u, 3u, 10u}) {
        GpPosterior gp({KernelFamily::SquaredExponential, 0.2, 2}, 0.3);
        for (std::size_t i = 0; i < s; ++i) gp.update(x, 1.0);
        EXPECT_TRUE(variance_bound_check(gp, 0.0, s, x));
        EXPECT_NEAR(posterior_variance_bound(gp.kernel(), 0.3, 0.0, s), 0.3 / double(s), 1e-15);
    }
}

TEST(VarianceBound, FormulasAndEmptyCell) {
    const KernelSpec se{KernelFamily::SquaredExponential, 0.5, 2};
    EXPECT_NEAR(posterior_variance_bound(se, 0.2, 0.1, 4), 0.01 / 0.25 + 0.05, 1e-15);
    const KernelSpec m{KernelFamily::Matern12, 0.5, 2};
    EXPECT_NEAR(posterior_variance_bound(m, 0.2, 0.1, 4), 2.0 * 2.0 * 0.1 + 0.05, 1e-15);
    EXPECT_TRUE(std::isinf(posterior_variance_bound(se, 0.2, 0.1, 0)));
}

TEST(VarianceBound, RandomCellsHold) {
    std::mt19937_64 rng(38);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto fam : {KernelFamily::SquaredExponential, KernelFamily::Matern52}) {
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t d = 1 + rng() % 3;
            const double side = 0.02 + 0.2 * u(rng);
            GpPosterior gp({fam, 0.1 + 0.5 * u(rng), d}, 0.001 + 0.5 * u(rng));
            Point corner = random_point(rng, d);
            for (auto& c : corner) c *= 1.0 - side;
            auto inside = [&] {
                Point p(d);
                for (std::size_t i = 0; i < d; ++i) p[i] = corner[i] + side * u(rng);
                return p;
            };
            const std::size_t s = 1 + rng() % 8;
            for (std::size_t i = 0; i < s; ++i) gp.update(inside(), u(rng));
            ASSERT_TRUE(variance_bound_check(gp, side * std::sqrt(double(d)), s, inside()));
        }
    }
}
