#include "streamlabel/outputs.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "streamlabel/svg.hpp"

namespace streamlabel {

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string rounds_csv(const std::vector<TrialResult>& results) {
    std::string out = std::string(kRoundsHeader) + "\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const std::string trial = std::to_string(i);
        for (const auto& r : results[i].rounds) {
            const auto& rec = r.record;
            out += trial;
            out += ',' + std::to_string(rec.t);
            out += ',' + r.x_repr;
            out += rec.labeled ? ",1" : ",0";
            out += ',' + format_real(rec.prediction);
            out += ',' + format_real(rec.true_value);
            out += ',' + format_real(rec.prediction_error);
            out += ',' + format_real(rec.cumulative_loss);
            out += ',' + format_real(r.uncertainty);
            out += ',' + format_real(r.threshold);
            out += '\n';
        }
    }
    return out;
}

std::string summary_csv(const Summary& s) {
    std::string out = std::string(kSummaryHeader) + "\n";
    for (std::size_t t = 0; t < s.avg_loss.mean.size(); ++t) {
        out += std::to_string(t + 1);
        out += ',' + format_real(s.avg_loss.mean[t]);
        out += ',' + format_real(s.avg_loss.half_width[t]);
        out += ',' + format_real(s.avg_error.mean[t]);
        out += ',' + format_real(s.avg_error.half_width[t]);
        out += ',' + format_real(s.mean_labels[t]);
        out += '\n';
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot open " + path.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.close();
    if (!out) throw OutputError("failed writing " + path.string());
}

void emit_outputs(const std::vector<TrialResult>& results, const ExperimentConfig& config,
                  const std::filesystem::path& dir) {
    if (results.empty()) throw std::invalid_argument("emit_outputs needs at least one trial");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw OutputError("cannot create " + dir.string() + ": " + ec.message());

    const Summary s = summarize(results);
    write_text_file(dir / "rounds.csv", rounds_csv(results));
    write_text_file(dir / "summary.csv", summary_csv(s));

    const std::string label(to_string(config.policy.kind));
    LineChart loss{config.name + ": average loss", "t", "L_t / t", {{label, s.avg_loss.mean, s.avg_loss.half_width}}};
    LineChart error{config.name + ": average prediction error", "t", "mean |f(x) - p|",
                    {{label, s.avg_error.mean, s.avg_error.half_width}}};
    write_text_file(dir / "loss.svg", render_svg(loss));
    write_text_file(dir / "error.svg", render_svg(error));
}

}  // namespace streamlabel
