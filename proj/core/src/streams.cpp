#include "streamlabel/streams.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace streamlabel {

// ---- boxes ------------------------------------------------------------------

bool Box::contains(std::span<const double> x) const noexcept {
    if (x.size() != dimension()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lower[i] || x[i] > upper[i]) return false;
    }
    return true;
}

bool Box::contains(const Box& inner) const noexcept {
    if (inner.dimension() != dimension()) return false;
    for (std::size_t i = 0; i < dimension(); ++i) {
        if (inner.lower[i] < lower[i] || inner.upper[i] > upper[i]) return false;
    }
    return true;
}

void Box::validate() const {
    if (lower.empty() || lower.size() != upper.size()) {
        throw std::invalid_argument("box bounds must be non-empty and of equal length");
    }
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!(lower[i] < upper[i])) throw std::invalid_argument("box lower bound must be < upper bound");
    }
}

Box Box::unit(std::size_t dimension) {
    return Box{std::vector<double>(dimension, 0.0), std::vector<double>(dimension, 1.0)};
}

Point normalize_to_unit(const Box& box, std::span<const double> x) {
    if (x.size() != box.dimension()) throw std::invalid_argument("point/box dimension mismatch");
    Point out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = (x[i] - box.lower[i]) / (box.upper[i] - box.lower[i]);
    }
    return out;
}

// ---- arrival patterns -------------------------------------------------------

std::size_t LopsidedDiscrete::heavy_count() const noexcept {
    const double raw = heavy_fraction * static_cast<double>(num_types);
    // Absorb representation error such as 0.2 * 100 = 20.000000000000004.
    const auto h = static_cast<std::size_t>(std::ceil(raw - 1e-9));
    return std::min(h, num_types);
}

namespace {

struct PatternValidator {
    void operator()(const UniformDiscrete& p) const {
        if (p.num_types == 0) throw std::invalid_argument("uniform arrivals need num_types >= 1");
    }
    void operator()(const LopsidedDiscrete& p) const {
        if (p.num_types == 0) throw std::invalid_argument("lopsided arrivals need num_types >= 1");
        if (!(p.heavy_fraction >= 0.0 && p.heavy_fraction <= 1.0) ||
            !(p.heavy_mass >= 0.0 && p.heavy_mass <= 1.0)) {
            throw std::invalid_argument("lopsided heavy_fraction and heavy_mass must lie in [0, 1]");
        }
    }
    void operator()(const CustomDiscrete& p) const {
        if (p.weights.empty()) throw std::invalid_argument("custom arrival weights are empty");
        double total = 0.0;
        for (double w : p.weights) {
            if (!(w >= 0.0)) throw std::invalid_argument("custom arrival weights must be >= 0");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw std::invalid_argument("custom arrival weights must sum to 1");
        }
    }
    void operator()(const UniformBox& p) const { p.bounds.validate(); }
    void operator()(const LopsidedBox& p) const {
        p.bounds.validate();
        p.heavy_region.validate();
        if (!p.bounds.contains(p.heavy_region)) {
            throw std::invalid_argument("lopsided heavy region must lie inside the bounds");
        }
        if (!(p.heavy_mass >= 0.0 && p.heavy_mass <= 1.0)) {
            throw std::invalid_argument("lopsided heavy_mass must lie in [0, 1]");
        }
    }
    void operator()(const Replay& p) const {
        if (p.points.empty()) throw std::invalid_argument("replay stream is empty");
    }
};

Point sample_box(const Box& box, std::mt19937_64& rng) {
    Point x(box.dimension());
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::uniform_real_distribution<double> u(box.lower[i], box.upper[i]);
        x[i] = u(rng);
    }
    return x;
}

std::size_t uniform_index(std::size_t lo, std::size_t hi_exclusive, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(lo, hi_exclusive - 1);
    return pick(rng);
}

}  // namespace

void validate(const ArrivalPattern& pattern) { std::visit(PatternValidator{}, pattern); }

bool is_discrete(const ArrivalPattern& pattern) noexcept {
    return std::holds_alternative<UniformDiscrete>(pattern) ||
           std::holds_alternative<LopsidedDiscrete>(pattern) ||
           std::holds_alternative<CustomDiscrete>(pattern);
}

ArrivalStream::ArrivalStream(ArrivalPattern pattern) : pattern_(std::move(pattern)) {
    validate(pattern_);
    if (const auto* c = std::get_if<CustomDiscrete>(&pattern_)) {
        custom_.emplace(c->weights.begin(), c->weights.end());
    }
}

std::optional<Arrival> ArrivalStream::next(std::mt19937_64& rng) {
    Arrival a;
    if (const auto* p = std::get_if<UniformDiscrete>(&pattern_)) {
        a.index = uniform_index(0, p->num_types, rng);
    } else if (const auto* p = std::get_if<LopsidedDiscrete>(&pattern_)) {
        const std::size_t heavy = p->heavy_count();
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const bool pick_heavy = unit(rng) < p->heavy_mass;
        if (heavy == p->num_types || (pick_heavy && heavy > 0)) {
            a.index = uniform_index(0, heavy, rng);
        } else {
            a.index = uniform_index(heavy, p->num_types, rng);
        }
    } else if (std::holds_alternative<CustomDiscrete>(pattern_)) {
        a.index = (*custom_)(rng);
    } else if (const auto* p = std::get_if<UniformBox>(&pattern_)) {
        a.point = sample_box(p->bounds, rng);
    } else if (const auto* p = std::get_if<LopsidedBox>(&pattern_)) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        if (unit(rng) < p->heavy_mass) {
            a.point = sample_box(p->heavy_region, rng);
        } else {
            constexpr int kMaxTries = 100000;
            for (int i = 0; i < kMaxTries; ++i) {
                a.point = sample_box(p->bounds, rng);
                if (!p->heavy_region.contains(a.point)) break;
                if (i + 1 == kMaxTries) {
                    throw std::runtime_error("lopsided box: heavy region covers the bounds");
                }
            }
        }
    } else if (const auto* p = std::get_if<Replay>(&pattern_)) {
        if (cursor_ >= p->points.size()) return std::nullopt;
        a.index = cursor_;
        a.point = p->points[cursor_];
        ++cursor_;
    }
    return a;
}

// ---- tasks ------------------------------------------------------------------

DiscreteGaussian make_discrete_gaussian(std::size_t num_types, double noise_sigma,
                                        std::mt19937_64& rng) {
    if (num_types == 0) throw std::invalid_argument("num_types must be >= 1");
    if (!(noise_sigma >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
    DiscreteGaussian task;
    task.noise_sigma = noise_sigma;
    task.means.resize(num_types);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& m : task.means) m = unit(rng);
    return task;
}

double branin(std::span<const double> x) {
    if (x.size() != 2) throw std::invalid_argument("branin expects a 2-d point");
    constexpr double pi = std::numbers::pi;
    constexpr double a = 1.0;
    constexpr double b = 5.1 / (4.0 * pi * pi);
    constexpr double c = 5.0 / pi;
    constexpr double r = 6.0;
    constexpr double s = 10.0;
    constexpr double t = 1.0 / (8.0 * pi);
    const double inner = x[1] - b * x[0] * x[0] + c * x[0] - r;
    return a * inner * inner + s * (1.0 - t) * std::cos(x[0]) + s;
}

double hartmann6(std::span<const double> x) {
    if (x.size() != 6) throw std::invalid_argument("hartmann6 expects a 6-d point");
    static constexpr double alpha[4] = {1.0, 1.2, 3.0, 3.2};
    static constexpr double A[4][6] = {
        {10.0, 3.0, 17.0, 3.5, 1.7, 8.0},
        {0.05, 10.0, 17.0, 0.1, 8.0, 14.0},
        {3.0, 3.5, 1.7, 10.0, 17.0, 8.0},
        {17.0, 8.0, 0.05, 10.0, 0.1, 14.0},
    };
    static constexpr double P[4][6] = {
        {0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
        {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
        {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
        {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381},
    };
    double total = 0.0;
    for (int i = 0; i < 4; ++i) {
        double e = 0.0;
        for (int j = 0; j < 6; ++j) {
            const double diff = x[j] - P[i][j];
            e += A[i][j] * diff * diff;
        }
        total += alpha[i] * std::exp(-e);
    }
    return -total;
}

ContinuousFunction make_branin_task(double noise_sigma) {
    return ContinuousFunction{"branin", &branin, noise_sigma, Box{{-5.0, 0.0}, {10.0, 15.0}}};
}

ContinuousFunction make_hartmann6_task(double noise_sigma) {
    return ContinuousFunction{"hartmann6", &hartmann6, noise_sigma, Box::unit(6)};
}

namespace {

double noise_sigma_of(const GroundTruthTask& task) {
    return std::visit([](const auto& t) { return t.noise_sigma; }, task);
}

}  // namespace

double true_value(const GroundTruthTask& task, const Arrival& x) {
    if (const auto* t = std::get_if<DiscreteGaussian>(&task)) {
        if (x.index >= t->means.size()) throw std::invalid_argument("type index out of range");
        return t->means[x.index];
    }
    if (const auto* t = std::get_if<ContinuousFunction>(&task)) {
        return t->f(x.point);
    }
    const auto& t = std::get<CsvReplay>(task);
    if (x.index >= t.labels.size()) throw std::invalid_argument("replay index out of range");
    return t.labels[x.index];
}

double query_label(const GroundTruthTask& task, const Arrival& x, std::mt19937_64& rng) {
    const double f = true_value(task, x);
    const double sigma = noise_sigma_of(task);
    if (sigma == 0.0) return f;
    std::normal_distribution<double> noise(0.0, sigma);
    return f + noise(rng);
}

std::size_t task_dimension(const GroundTruthTask& task) noexcept {
    if (const auto* t = std::get_if<ContinuousFunction>(&task)) return t->bounds.dimension();
    if (const auto* t = std::get_if<CsvReplay>(&task)) {
        return t->points.empty() ? 0 : t->points.front().size();
    }
    return 0;
}

Box task_bounds(const GroundTruthTask& task) {
    if (const auto* t = std::get_if<ContinuousFunction>(&task)) return t->bounds;
    if (const auto* t = std::get_if<CsvReplay>(&task)) {
        const std::size_t d = task_dimension(task);
        Box box{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
        if (t->points.empty()) return box;
        box.lower = t->points.front();
        box.upper = t->points.front();
        for (const auto& p : t->points) {
            for (std::size_t i = 0; i < d; ++i) {
                box.lower[i] = std::min(box.lower[i], p[i]);
                box.upper[i] = std::max(box.upper[i], p[i]);
            }
        }
        // Constant columns would divide by zero.
        for (std::size_t i = 0; i < d; ++i) {
            if (!(box.upper[i] > box.lower[i])) box.upper[i] = box.lower[i] + 1.0;
        }
        return box;
    }
    throw std::invalid_argument("discrete tasks have no input box");
}

// ---- CSV --------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    std::string out(s.substr(b, e - b + 1));
    if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
    return out;
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
            cell.push_back(c);
        } else if (c == ',' && !quoted) {
            cells.push_back(trim(cell));
            cell.clear();
        } else {
            cell.push_back(c);
        }
    }
    cells.push_back(trim(cell));
    return cells;
}

double parse_number(const std::string& cell, std::size_t row, const std::string& column) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
        throw CsvParseError("row " + std::to_string(row) + ", column '" + column +
                            "': non-numeric value '" + cell + "'");
    }
    return value;
}

}  // namespace

CsvStream load_csv_stream(const std::filesystem::path& path, const CsvStreamOptions& options) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file " + path.string());
    if (options.feature_columns.empty()) throw std::invalid_argument("no feature columns given");
    if (!(options.noise_sigma >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");

    std::string line;
    if (!std::getline(in, line) || trim(line).empty()) {
        throw std::invalid_argument("CSV file " + path.string() + " is empty");
    }
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    const auto header = split_row(line);

    auto column_index = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw CsvParseError("column '" + name + "' not found in header of " + path.string());
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    std::vector<std::size_t> feature_idx;
    for (const auto& name : options.feature_columns) feature_idx.push_back(column_index(name));
    const std::size_t label_idx = column_index(options.label_column);

    CsvStream out;
    out.task.noise_sigma = options.noise_sigma;
    out.task.feature_names = options.feature_columns;
    std::size_t row = 1;  // header is row 1
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split_row(line);
        auto cell_at = [&](std::size_t idx) -> const std::string& {
            if (idx >= cells.size()) {
                throw CsvParseError("row " + std::to_string(row) + ", column '" + header[idx] +
                                    "': missing value");
            }
            return cells[idx];
        };
        Point p;
        p.reserve(feature_idx.size());
        for (std::size_t k = 0; k < feature_idx.size(); ++k) {
            p.push_back(parse_number(cell_at(feature_idx[k]), row, options.feature_columns[k]));
        }
        out.task.points.push_back(std::move(p));
        out.task.labels.push_back(parse_number(cell_at(label_idx), row, options.label_column));
    }
    if (out.task.points.empty()) {
        throw std::invalid_argument("CSV file " + path.string() + " has no data rows");
    }

    if (options.normalize_to_unit_box) {
        const Box box = task_bounds(GroundTruthTask{out.task});
        for (auto& p : out.task.points) p = normalize_to_unit(box, p);
    }

    if (options.shuffle) {
        std::vector<std::size_t> order(out.task.points.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::mt19937_64 rng(options.shuffle_seed);
        std::shuffle(order.begin(), order.end(), rng);
        CsvReplay shuffled;
        shuffled.noise_sigma = out.task.noise_sigma;
        shuffled.feature_names = out.task.feature_names;
        for (std::size_t i : order) {
            shuffled.points.push_back(out.task.points[i]);
            shuffled.labels.push_back(out.task.labels[i]);
        }
        out.task = std::move(shuffled);
    }
    out.pattern.points = out.task.points;
    return out;
}

}  // namespace streamlabel
