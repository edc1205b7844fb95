#include "streamlabel/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace streamlabel {

using nlohmann::json;

std::string_view to_string(TaskKind kind) noexcept {
    switch (kind) {
        case TaskKind::DiscreteGaussian: return "discrete_gaussian";
        case TaskKind::Branin: return "branin";
        case TaskKind::Hartmann6: return "hartmann6";
        case TaskKind::Csv: return "csv";
    }
    return "unknown";
}

std::string_view to_string(ArrivalKind kind) noexcept {
    switch (kind) {
        case ArrivalKind::Uniform: return "uniform";
        case ArrivalKind::Lopsided: return "lopsided";
        case ArrivalKind::Custom: return "custom";
        case ArrivalKind::Replay: return "replay";
    }
    return "unknown";
}

namespace {

TaskKind parse_task_kind(const std::string& s) {
    for (auto k : {TaskKind::DiscreteGaussian, TaskKind::Branin, TaskKind::Hartmann6, TaskKind::Csv}) {
        if (to_string(k) == s) return k;
    }
    throw ConfigError("unknown task kind '" + s + "'");
}

ArrivalKind parse_arrival_kind(const std::string& s) {
    for (auto k : {ArrivalKind::Uniform, ArrivalKind::Lopsided, ArrivalKind::Custom, ArrivalKind::Replay}) {
        if (to_string(k) == s) return k;
    }
    throw ConfigError("unknown arrival kind '" + s + "'");
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end() && !it->is_null()) out = it->get<T>();
}

template <typename T>
void read(const json& j, const char* key, std::optional<T>& out) {
    if (auto it = j.find(key); it != j.end() && !it->is_null()) out = it->get<T>();
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> keys, const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (auto k : keys) known = known || it.key() == k;
        if (!known) throw ConfigError(std::string("unknown key '") + it.key() + "' in " + where);
    }
}

}  // namespace

std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t n) {
    std::vector<std::uint64_t> seeds(n);
    for (std::size_t i = 0; i < n; ++i) seeds[i] = base + i;
    return seeds;
}

void ExperimentConfig::validate() const {
    if (horizon_T == 0) throw ConfigError("horizon_T must be >= 1");
    if (trial_seeds.empty()) throw ConfigError("at least one trial seed is required");
    if (!(cost_B > 0.0)) throw ConfigError("cost_B must be positive");
    if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
    if (!(sigma >= 0.0)) throw ConfigError("sigma must be >= 0");
    if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]");
    if (!(task_noise_sigma() >= 0.0)) throw ConfigError("task noise_sigma must be >= 0");

    const bool discrete = discrete_task();
    if (discrete && task.num_types == 0) throw ConfigError("task.num_types must be >= 1");
    if (discrete && (policy.kind == PolicyKind::Algorithm2 || policy.kind == PolicyKind::NaiveDiscretized)) {
        throw ConfigError(std::string(to_string(policy.kind)) + " needs a continuous task");
    }
    if (!discrete && policy.kind == PolicyKind::Algorithm1) {
        throw ConfigError("algorithm1 needs a discrete task (use naive_discretized)");
    }
    if (!discrete && !(sigma > 0.0)) {
        throw ConfigError("sigma must be positive for GP-based policies");
    }
    if (task.kind == TaskKind::Csv) {
        if (task.csv_path.empty()) throw ConfigError("task.path is required for csv tasks");
        if (task.feature_columns.empty()) throw ConfigError("task.features must be non-empty");
        if (task.label_column.empty()) throw ConfigError("task.label is required for csv tasks");
        if (arrival.kind != ArrivalKind::Replay) throw ConfigError("csv tasks use replay arrivals");
    } else if (arrival.kind == ArrivalKind::Replay) {
        throw ConfigError("replay arrivals are only available for csv tasks");
    }
    if (arrival.kind == ArrivalKind::Custom) {
        if (!discrete) throw ConfigError("custom arrival weights need a discrete task");
        if (arrival.weights.size() != task.num_types) {
            throw ConfigError("arrival.weights must have num_types entries");
        }
    }
    if (!(arrival.heavy_fraction >= 0.0 && arrival.heavy_fraction <= 1.0) ||
        !(arrival.heavy_mass >= 0.0 && arrival.heavy_mass <= 1.0)) {
        throw ConfigError("arrival heavy_fraction/heavy_mass must lie in [0, 1]");
    }
    if (!(policy.label_probability >= 0.0 && policy.label_probability <= 1.0)) {
        throw ConfigError("policy.label_probability must lie in [0, 1]");
    }
    if (!(policy.initial_lengthscale > 0.0)) throw ConfigError("policy.lengthscale must be positive");
    for (double l : policy.lengthscale_grid) {
        if (!(l > 0.0)) throw ConfigError("policy.lengthscale_grid entries must be positive");
    }
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig c;
    try {
        const json j = json::parse(text);
        if (!j.is_object()) throw ConfigError("config root must be an object");
        reject_unknown(j, {"name", "task", "arrival", "policy", "cost_B", "lambda", "sigma", "delta",
                           "horizon_T", "trial_seeds", "output_dir"},
                       "config");
        read(j, "name", c.name);
        read(j, "cost_B", c.cost_B);
        read(j, "lambda", c.lambda);
        read(j, "sigma", c.sigma);
        read(j, "delta", c.delta);
        read(j, "horizon_T", c.horizon_T);
        read(j, "trial_seeds", c.trial_seeds);
        if (auto it = j.find("output_dir"); it != j.end()) c.output_dir = it->get<std::string>();

        if (auto it = j.find("task"); it != j.end()) {
            const json& t = *it;
            reject_unknown(t, {"kind", "num_types", "noise_sigma", "path", "features", "label",
                               "normalize", "shuffle_seed"},
                           "task");
            c.task.kind = parse_task_kind(t.value("kind", std::string("discrete_gaussian")));
            read(t, "num_types", c.task.num_types);
            read(t, "noise_sigma", c.task.noise_sigma);
            if (auto p = t.find("path"); p != t.end()) c.task.csv_path = p->get<std::string>();
            read(t, "features", c.task.feature_columns);
            read(t, "label", c.task.label_column);
            read(t, "normalize", c.task.normalize);
            read(t, "shuffle_seed", c.task.shuffle_seed);
        }
        if (auto it = j.find("arrival"); it != j.end()) {
            const json& a = *it;
            reject_unknown(a, {"kind", "heavy_fraction", "heavy_mass", "heavy_region", "weights"},
                           "arrival");
            c.arrival.kind = parse_arrival_kind(a.value("kind", std::string("uniform")));
            read(a, "heavy_fraction", c.arrival.heavy_fraction);
            read(a, "heavy_mass", c.arrival.heavy_mass);
            read(a, "weights", c.arrival.weights);
            if (auto r = a.find("heavy_region"); r != a.end() && !r->is_null()) {
                Box b;
                b.lower = r->at("lower").get<std::vector<double>>();
                b.upper = r->at("upper").get<std::vector<double>>();
                c.arrival.heavy_region = b;
            }
        }
        if (auto it = j.find("policy"); it != j.end()) {
            const json& p = *it;
            reject_unknown(p, {"kind", "label_probability", "kernel", "lengthscale", "init_label_count",
                               "lengthscale_grid", "standardize_labels"},
                           "policy");
            c.policy.kind = parse_policy_kind(p.value("kind", std::string("algorithm1")));
            read(p, "label_probability", c.policy.label_probability);
            if (auto k = p.find("kernel"); k != p.end()) {
                c.policy.kernel = parse_kernel_family(k->get<std::string>());
            }
            read(p, "lengthscale", c.policy.initial_lengthscale);
            read(p, "init_label_count", c.policy.init_label_count);
            read(p, "lengthscale_grid", c.policy.lengthscale_grid);
            read(p, "standardize_labels", c.policy.standardize_labels);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string to_json(const ExperimentConfig& c) {
    json task = {{"kind", to_string(c.task.kind)}};
    if (c.task.kind == TaskKind::DiscreteGaussian) task["num_types"] = c.task.num_types;
    if (c.task.noise_sigma) task["noise_sigma"] = *c.task.noise_sigma;
    if (c.task.kind == TaskKind::Csv) {
        task["path"] = c.task.csv_path.string();
        task["features"] = c.task.feature_columns;
        task["label"] = c.task.label_column;
        task["normalize"] = c.task.normalize;
        if (c.task.shuffle_seed) task["shuffle_seed"] = *c.task.shuffle_seed;
    }
    json arrival = {{"kind", to_string(c.arrival.kind)}};
    if (c.arrival.kind == ArrivalKind::Lopsided) {
        arrival["heavy_fraction"] = c.arrival.heavy_fraction;
        arrival["heavy_mass"] = c.arrival.heavy_mass;
        if (c.arrival.heavy_region) {
            arrival["heavy_region"] = {{"lower", c.arrival.heavy_region->lower},
                                       {"upper", c.arrival.heavy_region->upper}};
        }
    }
    if (c.arrival.kind == ArrivalKind::Custom) arrival["weights"] = c.arrival.weights;
    json policy = {{"kind", to_string(c.policy.kind)}};
    if (c.policy.kind == PolicyKind::RandomSelect) policy["label_probability"] = c.policy.label_probability;
    if (!c.discrete_task()) {
        policy["kernel"] = to_string(c.policy.kernel);
        policy["lengthscale"] = c.policy.initial_lengthscale;
        if (c.policy.init_label_count) policy["init_label_count"] = *c.policy.init_label_count;
        policy["lengthscale_grid"] = c.policy.lengthscale_grid;
        policy["standardize_labels"] = c.policy.standardize_labels;
    }
    json j = {{"name", c.name},
              {"task", task},
              {"arrival", arrival},
              {"policy", policy},
              {"cost_B", c.cost_B},
              {"lambda", c.lambda},
              {"sigma", c.sigma},
              {"delta", c.delta},
              {"horizon_T", c.horizon_T},
              {"trial_seeds", c.trial_seeds},
              {"output_dir", c.output_dir.string()}};
    return j.dump(2) + "\n";
}

}  // namespace streamlabel
