#include "streamlabel/repro.hpp"

#include <cstdio>

#include "streamlabel/outputs.hpp"
#include "streamlabel/svg.hpp"

namespace streamlabel {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

ExperimentConfig with_policy(ExperimentConfig c, PolicyKind kind, double lambda) {
    c.policy.kind = kind;
    c.lambda = lambda;
    c.name = c.name + "/" + std::string(to_string(kind));
    return c;
}

void apply(ExperimentConfig& c, const ReproOptions& o, std::size_t default_trials) {
    c.trial_seeds = seed_range(o.seed_base, o.trials.value_or(default_trials));
    if (o.horizon) c.horizon_T = *o.horizon;
}

std::vector<ReproPanel> fig2(const ReproOptions& o) {
    struct Row { std::size_t k; double b; ArrivalKind arrival; double lambda; };
    const Row rows[] = {
        {10, 10, ArrivalKind::Uniform, 0.5},   {10, 100, ArrivalKind::Uniform, 0.25},
        {100, 10, ArrivalKind::Uniform, 2.0},  {100, 100, ArrivalKind::Uniform, 0.75},
        {10, 10, ArrivalKind::Lopsided, 0.5},  {10, 100, ArrivalKind::Lopsided, 0.25},
        {100, 10, ArrivalKind::Lopsided, 2.0}, {100, 100, ArrivalKind::Lopsided, 0.5},
    };
    std::vector<ReproPanel> panels;
    for (const Row& r : rows) {
        ExperimentConfig c;
        c.name = "K" + std::to_string(r.k) + "_B" + fmt(r.b) + "_" + std::string(to_string(r.arrival));
        c.task.kind = TaskKind::DiscreteGaussian;
        c.task.num_types = r.k;
        c.arrival.kind = r.arrival;
        c.cost_B = r.b;
        c.sigma = 0.1;
        c.delta = 0.05;
        c.horizon_T = 10000;
        apply(c, o, 10);
        panels.push_back({c.name,
                          {with_policy(c, PolicyKind::Algorithm1, r.lambda),
                           with_policy(c, PolicyKind::RandomSelect, r.lambda),
                           with_policy(c, PolicyKind::VarUncertainty, r.lambda)}});
    }
    return panels;
}

ReproPanel gp_panel(ExperimentConfig c, double alg2_lambda, double naive_lambda) {
    return {c.name,
            {with_policy(c, PolicyKind::Algorithm2, alg2_lambda),
             with_policy(c, PolicyKind::RandomSelect, alg2_lambda),
             with_policy(c, PolicyKind::VarUncertainty, alg2_lambda),
             with_policy(c, PolicyKind::NaiveDiscretized, naive_lambda)}};
}

ExperimentConfig branin_base(double b) {
    ExperimentConfig c;
    c.name = "branin_B" + fmt(b) + "_uniform";
    c.task.kind = TaskKind::Branin;
    c.arrival.kind = ArrivalKind::Uniform;
    c.cost_B = b;
    c.sigma = 5.0;
    c.horizon_T = 300;
    return c;
}

std::vector<ReproPanel> fig3(const ReproOptions& o) {
    std::vector<ReproPanel> panels;
    for (double b : {10.0, 100.0}) {
        ExperimentConfig c = branin_base(b);
        apply(c, o, 10);
        panels.push_back(gp_panel(c, 1.0, 10.0));
    }
    for (double b : {10.0, 100.0}) {
        ExperimentConfig c;
        c.name = "hartmann6_B" + fmt(b) + "_lopsided";
        c.task.kind = TaskKind::Hartmann6;
        c.arrival.kind = ArrivalKind::Lopsided;
        c.cost_B = b;
        c.sigma = 0.5;
        c.horizon_T = 300;
        apply(c, o, 10);
        panels.push_back(gp_panel(c, 0.5, 10.0));
    }
    return panels;
}

ExperimentConfig csv_base(const std::string& name, const std::filesystem::path& path,
                          std::vector<std::string> features, std::string label, double b, double sigma) {
    ExperimentConfig c;
    c.name = name;
    c.task.kind = TaskKind::Csv;
    c.task.csv_path = path;
    c.task.feature_columns = std::move(features);
    c.task.label_column = std::move(label);
    c.arrival.kind = ArrivalKind::Replay;
    c.cost_B = b;
    c.sigma = sigma;
    c.horizon_T = 100000;
    return c;
}

std::vector<ReproPanel> fig4(const ReproOptions& o) {
    if (!o.data) throw ConfigError("fig4 needs --data <parkinsons uniform subset csv>");
    const std::vector<std::string> features{"age", "sex", "Jitter(%)", "Shimmer", "NHR",
                                            "HNR", "RPDE", "DFA", "PPE"};
    std::vector<ReproPanel> panels;
    struct Src { std::string tag; std::filesystem::path path; };
    std::vector<Src> sources{{"uniform", *o.data}};
    if (o.data_lopsided) sources.push_back({"lopsided", *o.data_lopsided});
    for (const Src& src : sources) {
        for (double b : {10.0, 100.0}) {
            ExperimentConfig c = csv_base("parkinsons_B" + fmt(b) + "_" + src.tag, src.path, features,
                                          "total_UPDRS", b, 1.0);
            apply(c, o, 5);
            panels.push_back(gp_panel(c, 5.0, 5.0));
        }
    }
    return panels;
}

std::vector<ReproPanel> fig5(const ReproOptions& o) {
    if (!o.data) throw ConfigError("fig5 needs --data <supernova csv>");
    std::vector<ReproPanel> panels;
    const std::pair<double, double> rows[] = {{1.0, 50.0}, {10.0, 30.0}, {100.0, 10.0}};
    for (auto [b, naive] : rows) {
        ExperimentConfig c = csv_base("supernova_B" + fmt(b), *o.data,
                                      {"hubble", "dark_matter", "dark_energy"}, "label", b, 10.0);
        apply(c, o, 5);
        panels.push_back(gp_panel(c, 1.0, naive));
    }
    return panels;
}

}  // namespace

std::vector<std::string> repro_figure_ids() {
    return {"fig2", "fig3", "fig4", "fig5", "ablation-discrete", "ablation-branin"};
}

ReproPanel lambda_ablation(const ExperimentConfig& base, const std::vector<double>& grid) {
    if (grid.empty()) throw ConfigError("lambda grid is empty");
    ReproPanel panel{base.name + "_lambda", {}};
    for (double l : grid) {
        ExperimentConfig c = base;
        c.lambda = l;
        c.name = base.name + "/lambda_" + fmt(l);
        c.validate();
        panel.methods.push_back(std::move(c));
    }
    return panel;
}

std::vector<ReproPanel> repro_panels(std::string_view id, const ReproOptions& o) {
    if (id == "fig2") return fig2(o);
    if (id == "fig3") return fig3(o);
    if (id == "fig4") return fig4(o);
    if (id == "fig5") return fig5(o);
    if (id == "ablation-discrete") {
        ExperimentConfig c = fig2(o).front().methods.front();
        c.name = "K10_B10_uniform";
        return {lambda_ablation(c, {0.1, 0.25, 0.5, 1.0, 2.0})};
    }
    if (id == "ablation-branin") {
        ExperimentConfig c = branin_base(10.0);
        c.policy.kind = PolicyKind::Algorithm2;
        apply(c, o, 10);
        return {lambda_ablation(c, {0.5, 1.0, 1.5, 2.0})};
    }
    throw ConfigError("unknown figure id '" + std::string(id) + "'");
}

std::vector<PanelOutcome> run_panels(const std::vector<ReproPanel>& panels, const std::filesystem::path& dir) {
    std::vector<PanelOutcome> outcomes;
    for (const auto& panel : panels) {
        LineChart loss{panel.name + ": average loss", "t", "L_t / t", {}};
        LineChart error{panel.name + ": average prediction error", "t", "mean |f(x) - p|", {}};
        for (const auto& method : panel.methods) {
            const std::string leaf = method.name.substr(method.name.rfind('/') + 1);
            auto results = run_experiment(method);
            emit_outputs(results, method, dir / panel.name / leaf);
            const Summary s = summarize(results);
            loss.series.push_back({leaf, s.avg_loss.mean, s.avg_loss.half_width});
            error.series.push_back({leaf, s.avg_error.mean, s.avg_error.half_width});
            outcomes.push_back({panel.name, leaf, std::move(results)});
        }
        write_text_file(dir / panel.name / "loss.svg", render_svg(loss));
        write_text_file(dir / panel.name / "error.svg", render_svg(error));
    }
    return outcomes;
}

}  // namespace streamlabel
