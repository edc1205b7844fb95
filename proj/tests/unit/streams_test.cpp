#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "../support/oracles.hpp"
#include "streamlabel/streams.hpp"

using namespace streamlabel;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& contents) {
    const auto path = std::filesystem::temp_directory_path() / ("streamlabel_test_" + name);
    std::ofstream(path) << contents;
    return path;
}

std::vector<double> frequencies(ArrivalPattern pattern, std::size_t k, int draws, std::uint64_t seed) {
    ArrivalStream stream(std::move(pattern));
    std::mt19937_64 rng(seed);
    std::vector<double> f(k, 0.0);
    for (int i = 0; i < draws; ++i) f[stream.next(rng)->index] += 1.0 / draws;
    return f;
}

}  // namespace

TEST(Arrivals, CustomPointMass) {
    ArrivalStream s(CustomDiscrete{{0, 0, 0, 1, 0}});
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(s.next(rng)->index, 3u);
}

TEST(Arrivals, UniformDiscreteFrequencies) {
    for (double f : frequencies(UniformDiscrete{10}, 10, 100000, 2)) EXPECT_NEAR(f, 0.1, 0.01);
}

TEST(Arrivals, LopsidedHeavyGroupMass) {
    const auto f = frequencies(LopsidedDiscrete{10, 0.2, 0.8}, 10, 100000, 3);
    EXPECT_NEAR(f[0] + f[1], 0.8, 0.01);
    for (std::size_t k = 2; k < 10; ++k) EXPECT_NEAR(f[k], 0.2 / 8, 0.01);
}

TEST(Arrivals, LopsidedHeavyCountRoundsUp) {
    EXPECT_EQ((LopsidedDiscrete{10, 0.2, 0.8}.heavy_count()), 2u);
    EXPECT_EQ((LopsidedDiscrete{100, 0.2, 0.8}.heavy_count()), 20u);
    EXPECT_EQ((LopsidedDiscrete{7, 0.2, 0.8}.heavy_count()), 2u);
}

TEST(Arrivals, LopsidedBoxRegionMass) {
    const Box bounds = Box::unit(6);
    Box heavy = bounds;
    heavy.upper[0] = 0.2;
    ArrivalStream s(LopsidedBox{bounds, heavy, 0.8});
    std::mt19937_64 rng(4);
    int in = 0;
    for (int i = 0; i < 100000; ++i) {
        const auto a = s.next(rng);
        ASSERT_TRUE(bounds.contains(a->point));
        in += heavy.contains(a->point);
    }
    EXPECT_NEAR(in / 1e5, 0.8, 0.01);
}

TEST(Arrivals, ReplayEndsWithNullopt) {
    ArrivalStream s(Replay{{{1.0}, {2.0}}});
    std::mt19937_64 rng(5);
    EXPECT_EQ(s.next(rng)->point[0], 1.0);
    EXPECT_EQ(s.next(rng)->index, 1u);
    EXPECT_FALSE(s.next(rng).has_value());
}

TEST(Arrivals, InvalidPatterns) {
    EXPECT_THROW(validate(CustomDiscrete{{0.5, 0.4}}), std::invalid_argument);
    EXPECT_THROW(validate(CustomDiscrete{{1.5, -0.5}}), std::invalid_argument);
    Box outside = Box::unit(2);
    outside.upper[0] = 1.5;
    EXPECT_THROW(validate(LopsidedBox{Box::unit(2), outside, 0.8}), std::invalid_argument);
    EXPECT_THROW(validate(UniformDiscrete{0}), std::invalid_argument);
}

TEST(Arrivals, StreamIsPureFunctionOfSeed) {
    auto draw = [](std::uint64_t seed) {
        ArrivalStream s(LopsidedBox{Box{{-5, 0}, {10, 15}}, Box{{-5, 0}, {-2, 15}}, 0.8});
        std::mt19937_64 rng(seed);
        std::vector<Point> pts;
        for (int i = 0; i < 200; ++i) pts.push_back(s.next(rng)->point);
        return pts;
    };
    EXPECT_EQ(draw(9), draw(9));
    EXPECT_NE(draw(9), draw(10));
}

TEST(Tasks, DiscreteGaussianNoiseFreeLabelIsMean) {
    std::mt19937_64 rng(6);
    const auto task = make_discrete_gaussian(5, 0.0, rng);
    for (double m : task.means) {
        EXPECT_GE(m, 0.0);
        EXPECT_LE(m, 1.0);
    }
    const GroundTruthTask g = task;
    for (std::size_t k = 0; k < 5; ++k) {
        Arrival a{k, {}};
        EXPECT_EQ(query_label(g, a, rng), task.means[k]);
        EXPECT_EQ(true_value(g, a), task.means[k]);
    }
}

TEST(Tasks, BraninAtKnownMinimum) {
    const GroundTruthTask g = make_branin_task(0.0);
    std::mt19937_64 rng(7);
    const Arrival a{0, {std::numbers::pi, 2.275}};
    EXPECT_NEAR(query_label(g, a, rng), 0.397887, 1e-4);
    EXPECT_NEAR(true_value(g, a), oracle::branin(std::numbers::pi, 2.275), 1e-12);
    for (const auto& p : std::vector<Point>{{-std::numbers::pi, 12.275}, {9.42478, 2.475}}) {
        EXPECT_NEAR(branin(p), 0.397887, 1e-4);
    }
}

TEST(Tasks, BraninMatchesTextbookForm) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const Point x{-5.0 + 15.0 * u(rng), 15.0 * u(rng)};
        EXPECT_NEAR(branin(x), oracle::branin(x[0], x[1]), 1e-10);
    }
}

TEST(Tasks, HartmannAtKnownMinimum) {
    const GroundTruthTask g = make_hartmann6_task(0.0);
    std::mt19937_64 rng(9);
    const Arrival a{0, {0.20169, 0.150011, 0.476874, 0.275332, 0.311652, 0.6573}};
    EXPECT_NEAR(query_label(g, a, rng), -3.32237, 1e-4);
}

TEST(Tasks, TrueValueIsMeanOfNoisyLabels) {
    const GroundTruthTask g = make_branin_task(5.0);
    std::mt19937_64 rng(10);
    const Arrival a{0, {1.0, 7.0}};
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += query_label(g, a, rng);
    EXPECT_NEAR(sum / n, true_value(g, a), 3.0 * 5.0 / std::sqrt(double(n)));
}

TEST(Tasks, DimensionsAndBounds) {
    EXPECT_EQ(task_dimension(make_branin_task(1.0)), 2u);
    EXPECT_EQ(task_dimension(make_hartmann6_task(1.0)), 6u);
    const Box b = task_bounds(make_branin_task(1.0));
    EXPECT_EQ(b.lower, (std::vector<double>{-5.0, 0.0}));
    EXPECT_EQ(b.upper, (std::vector<double>{10.0, 15.0}));
    const auto n = normalize_to_unit(b, std::vector<double>{2.5, 15.0});
    EXPECT_EQ(n, (std::vector<double>{0.5, 1.0}));
}

TEST(CsvStream, IdentityParse) {
    const auto path = write_temp("identity.csv", "a,b,y\n1,2,3\n4.5,-6,7e1\n0,0,-1\n");
    CsvStreamOptions o;
    o.feature_columns = {"a", "b"};
    o.label_column = "y";
    o.normalize_to_unit_box = false;
    o.shuffle = false;
    const auto s = load_csv_stream(path, o);
    EXPECT_EQ(s.task.points, (std::vector<Point>{{1, 2}, {4.5, -6}, {0, 0}}));
    EXPECT_EQ(s.task.labels, (std::vector<double>{3, 70, -1}));
    EXPECT_EQ(s.pattern.points, s.task.points);
    std::mt19937_64 rng(1);
    const GroundTruthTask g = s.task;
    EXPECT_EQ(true_value(g, Arrival{1, s.task.points[1]}), 70.0);
    std::filesystem::remove(path);
}

TEST(CsvStream, MinMaxNormalization) {
    const auto path = write_temp("norm.csv", "y,a,b\n1,10,-1\n2,20,-3\n3,15,5\n4,12,0\n");
    CsvStreamOptions o;
    o.feature_columns = {"a", "b"};
    o.label_column = "y";
    o.shuffle = false;
    const auto s = load_csv_stream(path, o);
    for (std::size_t j = 0; j < 2; ++j) {
        double lo = 1e9, hi = -1e9;
        for (const auto& p : s.task.points) {
            lo = std::min(lo, p[j]);
            hi = std::max(hi, p[j]);
        }
        EXPECT_NEAR(lo, 0.0, 1e-12);
        EXPECT_NEAR(hi, 1.0, 1e-12);
    }
    std::filesystem::remove(path);
}

TEST(CsvStream, ShuffleIsSeeded) {
    std::string text = "x,y\n";
    for (int i = 0; i < 20; ++i) text += std::to_string(i) + "," + std::to_string(2 * i) + "\n";
    const auto path = write_temp("shuffle.csv", text);
    CsvStreamOptions o;
    o.feature_columns = {"x"};
    o.label_column = "y";
    o.normalize_to_unit_box = false;
    o.shuffle_seed = 3;
    const auto a = load_csv_stream(path, o), b = load_csv_stream(path, o);
    o.shuffle_seed = 4;
    const auto c = load_csv_stream(path, o);
    EXPECT_EQ(a.task.points, b.task.points);
    EXPECT_NE(a.task.points, c.task.points);
    for (std::size_t i = 0; i < a.task.points.size(); ++i) {
        EXPECT_EQ(a.task.labels[i], 2.0 * a.task.points[i][0]);
    }
    std::filesystem::remove(path);
}

TEST(CsvStream, ErrorsNameRowAndColumn) {
    const auto path = write_temp("bad.csv", "a,y\n1,2\n3,oops\n");
    CsvStreamOptions o;
    o.feature_columns = {"a"};
    o.label_column = "y";
    try {
        load_csv_stream(path, o);
        FAIL() << "expected a parse error";
    } catch (const CsvParseError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("row 3"), std::string::npos) << msg;
        EXPECT_NE(msg.find("'y'"), std::string::npos) << msg;
    }
    o.label_column = "missing";
    EXPECT_THROW(load_csv_stream(path, o), CsvParseError);
    std::filesystem::remove(path);

    const auto empty = write_temp("empty.csv", "");
    o.label_column = "y";
    EXPECT_THROW(load_csv_stream(empty, o), std::invalid_argument);
    std::filesystem::remove(empty);
    EXPECT_THROW(load_csv_stream("/nonexistent/file.csv", o), std::exception);
}
