#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "streamlabel/harness.hpp"
#include "streamlabel/outputs.hpp"
#include "streamlabel/random.hpp"

using namespace streamlabel;

namespace {

ExperimentConfig single_type(double cost, std::size_t horizon) {
    ExperimentConfig c;
    c.task.num_types = 1;
    c.sigma = 0.0;
    c.cost_B = cost;
    c.horizon_T = horizon;
    c.trial_seeds = {1};
    return c;
}

}  // namespace

TEST(RunExperiment, SingleTypeZeroNoiseLabelsOnce) {
    const auto results = run_experiment(single_type(7.0, 100));
    ASSERT_EQ(results.size(), 1u);
    const auto& r = results[0];
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.final_labels, 1u);
    EXPECT_EQ(r.rounds.back().record.cumulative_loss, 7.0);
    for (const auto& round : r.rounds) EXPECT_EQ(round.record.prediction_error, 0.0);
}

TEST(RunExperiment, CurveLengthsAndMonotoneLoss) {
    ExperimentConfig c;
    c.task.num_types = 10;
    c.horizon_T = 500;
    c.trial_seeds = {1, 2, 3};
    for (const auto& r : run_experiment(c)) {
        ASSERT_EQ(r.rounds.size(), 500u);
        for (std::size_t i = 1; i < r.rounds.size(); ++i) {
            ASSERT_GE(r.rounds[i].record.cumulative_loss, r.rounds[i - 1].record.cumulative_loss);
        }
        EXPECT_EQ(r.label_counts().back(), double(r.final_labels));
    }
}

TEST(RunExperiment, ResultsIndependentOfThreadCount) {
    ExperimentConfig c;
    c.task.kind = TaskKind::Branin;
    c.policy.kind = PolicyKind::Algorithm2;
    c.sigma = 5.0;
    c.horizon_T = 60;
    c.trial_seeds = {1, 2, 3, 4};
    setenv("STREAMLABEL_THREADS", "1", 1);
    const std::string a = rounds_csv(run_experiment(c));
    setenv("STREAMLABEL_THREADS", "3", 1);
    const std::string b = rounds_csv(run_experiment(c));
    unsetenv("STREAMLABEL_THREADS");
    EXPECT_EQ(a, b);
}

TEST(WorkerCount, HonorsEnvironmentCap) {
    setenv("STREAMLABEL_THREADS", "2", 1);
    EXPECT_EQ(worker_count(10), 2u);
    EXPECT_EQ(worker_count(1), 1u);
    setenv("STREAMLABEL_THREADS", "0", 1);
    EXPECT_GE(worker_count(10), 1u);
    unsetenv("STREAMLABEL_THREADS");
}

TEST(Aggregate, IdenticalCurvesHaveZeroBand) {
    const std::vector<double> c{1.0, 2.0, 3.0};
    const Band b = aggregate({c, c, c});
    EXPECT_EQ(b.mean, c);
    for (double h : b.half_width) EXPECT_EQ(h, 0.0);
}

TEST(Aggregate, TwoConstantCurves) {
    const Band b = aggregate({{0.0, 0.0}, {2.0, 2.0}});
    EXPECT_EQ(b.mean[0], 1.0);
    EXPECT_NEAR(b.half_width[0], 1.96, 1e-15);
}

TEST(Aggregate, SingleTrialZeroWidthAndErrors) {
    const Band b = aggregate({{4.0, 5.0}});
    EXPECT_EQ(b.half_width, (std::vector<double>{0.0, 0.0}));
    EXPECT_THROW(aggregate({}), std::invalid_argument);
    EXPECT_THROW(aggregate({{1.0}, {1.0, 2.0}}), std::invalid_argument);
}

TEST(Aggregate, PermutationInvariant) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> curves(6, std::vector<double>(20));
    for (auto& c : curves) for (auto& v : c) v = u(rng);
    const Band a = aggregate(curves);
    std::reverse(curves.begin(), curves.end());
    const Band b = aggregate(curves);
    for (std::size_t i = 0; i < 20; ++i) {
        EXPECT_NEAR(a.mean[i], b.mean[i], 1e-15);
        EXPECT_NEAR(a.half_width[i], b.half_width[i], 1e-15);
    }
}

TEST(LogLogSlope, RecoversPowerLaw) {
    std::vector<double> y(1000);
    for (std::size_t t = 1; t <= y.size(); ++t) y[t - 1] = 3.0 * std::pow(double(t), 0.7);
    EXPECT_NEAR(loglog_slope(y, 10, 1000), 0.7, 1e-12);
}

// Taint test: swapping the ground truth for a shifted copy while holding the
// label stream fixed must not change any decision or prediction.
TEST(PolicyIsolation, DecisionsIgnoreTrueValue) {
    for (auto kind : {PolicyKind::Algorithm2, PolicyKind::VarUncertainty, PolicyKind::RandomSelect}) {
        PolicySettings s;
        s.kind = kind;
        s.cost = 10.0;
        s.sigma = 0.3;
        s.dimension = 2;
        s.gp.kernel = {KernelFamily::SquaredExponential, 0.3, 2};
        s.gp.noise_sigma = 0.3;
        s.coin_seed = 5;

        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<Arrival> arrivals;
        for (std::size_t i = 0; i < 150; ++i) arrivals.push_back({i, {u(rng), u(rng)}});
        auto f = [](const Arrival& a) { return std::sin(4.0 * a.point[0]) + a.point[1]; };

        auto run = [&](double shift) {
            auto policy = make_policy(s);
            std::mt19937_64 noise(11);
            std::normal_distribution<double> n(0.0, 0.3);
            StreamHooks hooks;
            hooks.label = [&](const Arrival& a) { return f(a) + n(noise); };
            hooks.truth = [&](const Arrival& a) { return f(a) + shift; };
            return run_policy_on_stream(*policy, arrivals, 10.0, hooks);
        };
        const TrialResult a = run(0.0), b = run(100.0);
        ASSERT_TRUE(a.ok());
        ASSERT_EQ(a.rounds.size(), b.rounds.size());
        for (std::size_t i = 0; i < a.rounds.size(); ++i) {
            ASSERT_EQ(a.rounds[i].record.labeled, b.rounds[i].record.labeled);
            ASSERT_EQ(a.rounds[i].record.prediction, b.rounds[i].record.prediction);
            ASSERT_EQ(a.rounds[i].uncertainty, b.rounds[i].uncertainty);
        }
    }
}

TEST(PolicyIsolation, PolicyFailureBecomesDiagnostic) {
    PolicySettings s;
    s.kind = PolicyKind::Algorithm1;
    s.num_types = 2;
    auto policy = make_policy(s);
    const std::vector<Arrival> arrivals{{0, {}}, {5, {}}, {1, {}}};
    StreamHooks hooks;
    hooks.label = [](const Arrival&) { return 0.0; };
    hooks.truth = [](const Arrival&) { return 0.0; };
    const auto r = run_policy_on_stream(*policy, arrivals, 1.0, hooks);
    EXPECT_FALSE(r.ok());
    EXPECT_EQ(r.rounds.size(), 1u);
    EXPECT_NE(r.error->find("round 2"), std::string::npos);
}

TEST(Substreams, NamedStreamsDiffer) {
    EXPECT_NE(substream_seed(1, "task"), substream_seed(1, "noise"));
    EXPECT_NE(substream_seed(1, "task"), substream_seed(2, "task"));
    EXPECT_EQ(substream_seed(9, "arrivals"), substream_seed(9, "arrivals"));
}
