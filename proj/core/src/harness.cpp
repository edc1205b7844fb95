#include "streamlabel/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <thread>

#include "streamlabel/outputs.hpp"
#include "streamlabel/random.hpp"

namespace streamlabel {

std::vector<double> TrialResult::cumulative_loss() const {
    std::vector<double> out;
    out.reserve(rounds.size());
    for (const auto& r : rounds) out.push_back(r.record.cumulative_loss);
    return out;
}

std::vector<double> TrialResult::average_loss() const {
    std::vector<double> out;
    out.reserve(rounds.size());
    for (const auto& r : rounds) out.push_back(r.record.cumulative_loss / static_cast<double>(r.record.t));
    return out;
}

std::vector<double> TrialResult::average_error() const {
    std::vector<double> out;
    out.reserve(rounds.size());
    double sum = 0.0;
    for (const auto& r : rounds) {
        sum += r.record.prediction_error;
        out.push_back(sum / static_cast<double>(r.record.t));
    }
    return out;
}

std::vector<double> TrialResult::label_counts() const {
    std::vector<double> out;
    out.reserve(rounds.size());
    double n = 0.0;
    for (const auto& r : rounds) {
        if (r.record.labeled) n += 1.0;
        out.push_back(n);
    }
    return out;
}

TrialResult run_policy_on_stream(Policy& policy, const std::vector<Arrival>& arrivals,
                                 double labeling_cost, const StreamHooks& hooks) {
    TrialResult result;
    LossLedger ledger(labeling_cost);
    result.rounds.reserve(arrivals.size());
    try {
        for (std::size_t i = 0; i < arrivals.size(); ++i) {
            const Arrival& raw = arrivals[i];
            const Arrival seen = hooks.to_policy ? hooks.to_policy(raw) : raw;
            std::optional<double> observed;
            const LabelOracle oracle = [&] {
                if (observed) throw std::logic_error("policy requested two labels in one round");
                observed = hooks.label(raw);
                return *observed;
            };
            const PolicyStep step = policy.step(seen, oracle);
            if (step.labeled != observed.has_value()) {
                throw std::logic_error("policy label decision disagrees with oracle use");
            }
            RoundLog log;
            log.record = record_round(ledger, i + 1, step.labeled, step.prediction, hooks.truth(raw), observed);
            log.x_repr = hooks.describe ? hooks.describe(raw) : std::to_string(raw.index);
            log.uncertainty = step.uncertainty;
            log.threshold = step.threshold;
            result.rounds.push_back(std::move(log));
        }
    } catch (const std::exception& e) {
        result.error = "round " + std::to_string(result.rounds.size() + 1) + ": " + e.what();
    }
    result.final_labels = ledger.label_count();
    return result;
}

namespace {

struct TrialSetup {
    GroundTruthTask task;
    ArrivalPattern pattern;
    std::size_t dimension = 0;
};

Box default_heavy_region(const Box& bounds) {
    Box heavy = bounds;
    heavy.upper[0] = bounds.lower[0] + 0.2 * (bounds.upper[0] - bounds.lower[0]);
    return heavy;
}

TrialSetup build_setup(const ExperimentConfig& c, std::uint64_t seed) {
    TrialSetup s;
    const double noise = c.task_noise_sigma();
    auto task_rng = make_substream(seed, "task");
    switch (c.task.kind) {
        case TaskKind::DiscreteGaussian:
            s.task = make_discrete_gaussian(c.task.num_types, noise, task_rng);
            break;
        case TaskKind::Branin:
            s.task = make_branin_task(noise);
            break;
        case TaskKind::Hartmann6:
            s.task = make_hartmann6_task(noise);
            break;
        case TaskKind::Csv: {
            CsvStreamOptions opts;
            opts.feature_columns = c.task.feature_columns;
            opts.label_column = c.task.label_column;
            opts.normalize_to_unit_box = c.task.normalize;
            opts.noise_sigma = noise;
            opts.shuffle_seed = c.task.shuffle_seed.value_or(substream_seed(seed, "task"));
            CsvStream csv = load_csv_stream(c.task.csv_path, opts);
            s.task = std::move(csv.task);
            s.pattern = std::move(csv.pattern);
            s.dimension = task_dimension(s.task);
            return s;
        }
    }
    s.dimension = task_dimension(s.task);
    const bool discrete = c.discrete_task();
    switch (c.arrival.kind) {
        case ArrivalKind::Uniform:
            if (discrete) {
                s.pattern = UniformDiscrete{c.task.num_types};
            } else {
                s.pattern = UniformBox{task_bounds(s.task)};
            }
            break;
        case ArrivalKind::Lopsided:
            if (discrete) {
                s.pattern = LopsidedDiscrete{c.task.num_types, c.arrival.heavy_fraction, c.arrival.heavy_mass};
            } else {
                const Box bounds = task_bounds(s.task);
                s.pattern = LopsidedBox{bounds, c.arrival.heavy_region.value_or(default_heavy_region(bounds)),
                                        c.arrival.heavy_mass};
            }
            break;
        case ArrivalKind::Custom:
            s.pattern = CustomDiscrete{c.arrival.weights};
            break;
        case ArrivalKind::Replay:
            throw ConfigError("replay arrivals are only available for csv tasks");
    }
    return s;
}

PolicySettings policy_settings(const ExperimentConfig& c, std::size_t dimension, std::uint64_t seed) {
    PolicySettings p;
    p.kind = c.policy.kind;
    p.cost = c.cost_B;
    p.lambda = c.lambda;
    p.sigma = c.sigma;
    p.delta = c.delta;
    p.label_probability = c.policy.label_probability;
    p.coin_seed = substream_seed(seed, "policy");
    if (c.discrete_task()) {
        p.num_types = c.task.num_types;
    } else {
        p.dimension = dimension;
        p.gp.kernel = KernelSpec{c.policy.kernel, c.policy.initial_lengthscale, dimension};
        p.gp.noise_sigma = c.sigma;
        p.gp.init_label_count = c.policy.init_label_count;
        p.gp.lengthscale_grid = c.policy.lengthscale_grid;
        p.gp.standardize_labels = c.policy.standardize_labels;
    }
    return p;
}

}  // namespace

TrialResult run_trial(const ExperimentConfig& config, std::uint64_t seed) {
    config.validate();
    TrialSetup setup = build_setup(config, seed);

    ArrivalStream stream(setup.pattern);
    auto arrival_rng = make_substream(seed, "arrivals");
    std::vector<Arrival> arrivals;
    arrivals.reserve(config.horizon_T);
    while (arrivals.size() < config.horizon_T) {
        auto a = stream.next(arrival_rng);
        if (!a) break;
        arrivals.push_back(std::move(*a));
    }

    auto policy = make_policy(policy_settings(config, setup.dimension, seed));
    auto noise_rng = make_substream(seed, "noise");
    const bool discrete = config.discrete_task();
    const Box bounds = discrete ? Box{} : task_bounds(setup.task);

    StreamHooks hooks;
    hooks.label = [&](const Arrival& a) { return query_label(setup.task, a, noise_rng); };
    hooks.truth = [&](const Arrival& a) { return true_value(setup.task, a); };
    hooks.to_policy = [&](const Arrival& a) {
        if (discrete) return Arrival{a.index, {}};
        return Arrival{a.index, normalize_to_unit(bounds, a.point)};
    };
    hooks.describe = [&](const Arrival& a) {
        if (discrete) return std::to_string(a.index);
        std::string s;
        for (std::size_t i = 0; i < a.point.size(); ++i) {
            if (i) s += ';';
            s += format_real(a.point[i]);
        }
        return s;
    };

    TrialResult result = run_policy_on_stream(*policy, arrivals, config.cost_B, hooks);
    result.seed = seed;
    return result;
}

std::size_t worker_count(std::size_t jobs) {
    std::size_t cap = 0;
    if (const char* env = std::getenv("STREAMLABEL_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0') cap = static_cast<std::size_t>(v);
    }
    if (cap == 0) cap = std::max(1u, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(cap, jobs));
}

std::vector<TrialResult> run_experiment(const ExperimentConfig& config) {
    config.validate();
    const std::size_t n = config.trial_seeds.size();
    std::vector<TrialResult> results(n);
    std::vector<std::exception_ptr> failures(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                results[i] = run_trial(config, config.trial_seeds[i]);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    const std::size_t workers = worker_count(n);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
    return results;
}

Band aggregate(const std::vector<std::vector<double>>& curves) {
    if (curves.empty()) throw std::invalid_argument("aggregate needs at least one curve");
    const std::size_t len = curves.front().size();
    for (const auto& c : curves) {
        if (c.size() != len) throw std::invalid_argument("aggregate: curve lengths differ");
    }
    const double n = static_cast<double>(curves.size());
    Band band;
    band.mean.assign(len, 0.0);
    band.half_width.assign(len, 0.0);
    for (std::size_t t = 0; t < len; ++t) {
        double sum = 0.0;
        for (const auto& c : curves) sum += c[t];
        const double mean = sum / n;
        band.mean[t] = mean;
        if (curves.size() > 1) {
            double ss = 0.0;
            for (const auto& c : curves) ss += (c[t] - mean) * (c[t] - mean);
            band.half_width[t] = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
        }
    }
    return band;
}

Summary summarize(const std::vector<TrialResult>& trials) {
    std::vector<std::vector<double>> loss, error, labels;
    for (const auto& t : trials) {
        if (!t.ok()) continue;
        loss.push_back(t.average_loss());
        error.push_back(t.average_error());
        labels.push_back(t.label_counts());
    }
    if (loss.empty()) throw std::invalid_argument("no successful trials to summarize");
    Summary s;
    s.avg_loss = aggregate(loss);
    s.avg_error = aggregate(error);
    s.mean_labels = aggregate(labels).mean;
    s.trials = loss.size();
    return s;
}

double loglog_slope(const std::vector<double>& y, std::size_t lo, std::size_t hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = 0;
    for (std::size_t t = std::max<std::size_t>(lo, 1); t <= hi && t <= y.size(); ++t) {
        if (!(y[t - 1] > 0.0)) continue;
        const double lx = std::log(static_cast<double>(t));
        const double ly = std::log(y[t - 1]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        n += 1;
    }
    if (n < 2) throw std::invalid_argument("loglog_slope needs two positive points");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace streamlabel
