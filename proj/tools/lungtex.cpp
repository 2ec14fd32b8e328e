// lungtex: lung-sound texture classification pipeline front-end.
// Stages communicate via files: manifest.csv -> features.csv -> report.json.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lungtex/batch.hpp"
#include "lungtex/eval.hpp"
#include "lungtex/selection.hpp"
#include "lungtex/synth.hpp"

using namespace lungtex;
using nlohmann::json;

namespace {

struct RunConfig {
    int rate = 4000;
    double frame_ms = 40.0;          // optimized profile
    double overlap_pct = 90.0;
    int n_filters = 20;
    std::string profile = "optimized";
    std::string feature = "lbp";
    std::string classifier = "knn";
    std::string kernel = "bhat";
    double gamma = 0.0;
    int k = 3;
    double c = 1.0;
    int epochs = 200;
    int repeats = 25;
    std::uint64_t seed = 0;
    std::string granularity = "cycle";
    int jobs = 0;
};

void add_pipeline_flags(CLI::App* cmd, RunConfig& rc) {
    cmd->add_option("--rate", rc.rate, "Working sample rate in Hz")->capture_default_str();
    cmd->add_option("--frame-ms", rc.frame_ms, "Analysis frame length in ms")
        ->capture_default_str();
    cmd->add_option("--overlap", rc.overlap_pct, "Frame overlap percentage")
        ->capture_default_str();
    cmd->add_option("--filters", rc.n_filters, "Number of mel filters")->capture_default_str();
    cmd->add_option("--profile", rc.profile,
                    "Parameter profile: optimized (40 ms / 90% / 20 filters) or "
                    "speech-default (20 ms / 50% / 20 filters)")
        ->check(CLI::IsMember({"optimized", "speech-default"}))
        ->capture_default_str();
    cmd->add_option("--feature", rc.feature,
                    "Feature kind: lbp, wavelet27, mfcc-mean, mfsc-mean, morph")
        ->capture_default_str();
    cmd->add_option("--jobs", rc.jobs, "Max worker threads (0 = hardware)")
        ->capture_default_str();
}

void add_classifier_flags(CLI::App* cmd, RunConfig& rc) {
    cmd->add_option("--classifier", rc.classifier, "knn, svm or mlp")->capture_default_str();
    cmd->add_option("--kernel", rc.kernel, "SVM kernel: linear, bhat, isect, rbf")
        ->capture_default_str();
    cmd->add_option("--gamma", rc.gamma, "RBF gamma (<= 0 means 1/dim)")->capture_default_str();
    cmd->add_option("--k", rc.k, "kNN neighbor count (odd)")->capture_default_str();
    cmd->add_option("--c", rc.c, "SVM regularization C")->capture_default_str();
    cmd->add_option("--epochs", rc.epochs, "MLP RProp epochs")->capture_default_str();
    cmd->add_option("--repeats", rc.repeats, "MLP seed-averaged repeats")->capture_default_str();
    cmd->add_option("--seed", rc.seed, "Random seed")->capture_default_str();
    cmd->add_option("--granularity", rc.granularity, "LOOCV granularity: cycle or subject")
        ->check(CLI::IsMember({"cycle", "subject"}))
        ->capture_default_str();
}

// Profile sets frame/overlap/filters unless the user gave them explicitly.
void resolve_profile(const CLI::App* cmd, RunConfig& rc) {
    if (rc.profile == "speech-default") {
        if (cmd->count("--frame-ms") == 0) rc.frame_ms = 20.0;
        if (cmd->count("--overlap") == 0) rc.overlap_pct = 50.0;
        if (cmd->count("--filters") == 0) rc.n_filters = 20;
    }
}

PipelineConfig pipeline_config(const RunConfig& rc) {
    PipelineConfig cfg;
    cfg.rate = rc.rate;
    cfg.frame.frame_ms = rc.frame_ms;
    cfg.frame.overlap_pct = rc.overlap_pct;
    cfg.n_filters = rc.n_filters;
    cfg.feature = feature_from_name(rc.feature);
    return cfg;
}

ClassifierConfig classifier_config(const RunConfig& rc) {
    ClassifierConfig cfg;
    cfg.kind = classifier_from_name(rc.classifier);
    cfg.kernel = {kernel_from_name(rc.kernel), rc.gamma};
    cfg.k = rc.k;
    cfg.c = rc.c;
    cfg.epochs = rc.epochs;
    cfg.repeats = rc.repeats;
    cfg.seed = rc.seed;
    return cfg;
}

json config_json(const RunConfig& rc) {
    return json{{"rate", rc.rate},
                {"frame_ms", rc.frame_ms},
                {"overlap_pct", rc.overlap_pct},
                {"n_filters", rc.n_filters},
                {"profile", rc.profile},
                {"feature", rc.feature},
                {"classifier", rc.classifier},
                {"kernel", rc.kernel},
                {"gamma", rc.gamma},
                {"k", rc.k},
                {"c", rc.c},
                {"epochs", rc.epochs},
                {"repeats", rc.repeats},
                {"seed", rc.seed},
                {"granularity", rc.granularity}};
}

struct Dataset {
    DatasetManifest manifest;        // rows sorted by cycle_id
    std::vector<std::vector<double>> features;
    std::vector<int> labels;         // +1 / -1
    std::vector<std::string> ids;
};

Dataset load_dataset(const std::string& manifest_path, const RunConfig& rc,
                     const std::string& features_csv = "") {
    Dataset d;
    d.manifest = load_manifest(manifest_path);
    std::sort(d.manifest.entries.begin(), d.manifest.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) {
                  return a.cycle_id < b.cycle_id;
              });
    for (const auto& e : d.manifest.entries) {
        d.labels.push_back(e.label ? +1 : -1);
        d.ids.push_back(e.cycle_id);
    }

    if (!features_csv.empty()) {
        std::ifstream in(features_csv);
        if (!in) throw std::runtime_error("cannot open features file: " + features_csv);
        std::map<std::string, std::vector<double>> by_id;
        std::string line;
        std::getline(in, line);   // header
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream row(line);
            std::string id, field;
            std::getline(row, id, ',');
            std::getline(row, field, ',');   // label, informational
            std::vector<double> values;
            while (std::getline(row, field, ',')) values.push_back(std::stod(field));
            by_id.emplace(std::move(id), std::move(values));
        }
        for (const auto& e : d.manifest.entries) {
            const auto it = by_id.find(e.cycle_id);
            if (it == by_id.end())
                throw std::runtime_error("features file misses cycle " + e.cycle_id);
            d.features.push_back(it->second);
        }
    } else {
        const auto cycles = load_cycles(d.manifest, rc.rate);
        d.features = extract_features(cycles, pipeline_config(rc));
    }
    return d;
}

json report_json(const EvalReport& r, const RunConfig& rc) {
    json folds = json::array();
    for (const auto& f : r.per_fold)
        folds.push_back({{"cycle_id", f.cycle_id}, {"truth", f.truth}, {"predicted", f.predicted}});
    return json{{"spe", r.spe},
                {"sen", r.sen},
                {"oaa", r.oaa},
                {"confusion",
                 {{"tp", r.confusion.tp},
                  {"tn", r.confusion.tn},
                  {"fp", r.confusion.fp},
                  {"fn", r.confusion.fn}}},
                {"repeats", r.repeats},
                {"per_fold", folds},
                {"config", config_json(rc)}};
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

EvalReport evaluate(const Dataset& d, const RunConfig& rc, const ClassifierConfig& cc) {
    const auto granularity =
        rc.granularity == "subject" ? Granularity::subject : Granularity::cycle;
    return run_eval(d.features, d.labels, d.ids, plan_loocv(d.manifest, granularity), cc);
}

std::string metrics_csv_row(const EvalReport& r) {
    std::ostringstream os;
    os.precision(10);
    os << r.spe << ',' << r.sen << ',' << r.oaa;
    return os.str();
}

// ---- commands --------------------------------------------------------

int cmd_synth(int per_class, std::uint64_t seed, const std::string& out_dir,
              const std::string& shape, int rate) {
    const auto s = shape == "subject" ? DatasetShape::subject_grouped : DatasetShape::flat;
    const auto m = generate_dataset(per_class, seed, out_dir, s, rate);
    std::printf("wrote %zu cycles under %s\n", m.entries.size(), out_dir.c_str());
    return 0;
}

int cmd_extract(const std::string& manifest_path, const RunConfig& rc, const std::string& out) {
    const auto d = load_dataset(manifest_path, rc);
    std::ostringstream os;
    os.precision(17);
    os << "cycle_id,label";
    const std::size_t dim = d.features.empty() ? 0 : d.features[0].size();
    for (std::size_t j = 0; j < dim; ++j) os << ",f" << j;
    os << '\n';
    for (std::size_t i = 0; i < d.features.size(); ++i) {
        os << d.ids[i] << ',' << (d.labels[i] > 0 ? 1 : 0);
        for (double v : d.features[i]) os << ',' << v;
        os << '\n';
    }
    write_text(out, os.str());
    return 0;
}

int cmd_eval(const std::string& manifest_path, const std::string& features_csv,
             const RunConfig& rc, const std::string& out) {
    const auto d = load_dataset(manifest_path, rc, features_csv);
    const auto report = evaluate(d, rc, classifier_config(rc));
    write_text(out, report_json(report, rc).dump(2) + "\n");
    std::fprintf(stderr, "spe %.2f  sen %.2f  oaa %.2f\n", report.spe, report.sen, report.oaa);
    return 0;
}

std::vector<double> sweep_values(const std::string& param, const std::string& values_arg) {
    if (!values_arg.empty()) {
        std::vector<double> out;
        std::istringstream is(values_arg);
        std::string tok;
        while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
        if (out.empty()) throw std::invalid_argument("empty --values list");
        return out;
    }
    if (param == "frame-ms") {
        std::vector<double> out;
        for (int v = 20; v <= 200; v += 10) out.push_back(v);
        return out;
    }
    if (param == "overlap") {
        std::vector<double> out;
        for (int v = 10; v <= 90; v += 10) out.push_back(v);
        return out;
    }
    return {5, 10, 15, 20, 30, 40, 50, 70, 90};   // filters
}

int cmd_sweep(const std::string& manifest_path, RunConfig rc, const std::string& param,
              const std::string& values_arg, const std::string& out) {
    const auto values = sweep_values(param, values_arg);
    std::ostringstream os;
    os << param << ",spe,sen,oaa\n";
    for (double v : values) {
        RunConfig point = rc;
        if (param == "frame-ms") point.frame_ms = v;
        else if (param == "overlap") point.overlap_pct = v;
        else point.n_filters = int(v);
        const auto d = load_dataset(manifest_path, point);
        const auto report = evaluate(d, point, classifier_config(point));
        os << v << ',' << metrics_csv_row(report) << '\n';
        std::fprintf(stderr, "%s %g: oaa %.2f\n", param.c_str(), v, report.oaa);
    }
    write_text(out, os.str());
    return 0;
}

int cmd_select(const std::string& manifest_path, const RunConfig& rc, int count,
               const std::string& sweep_arg, double sigma, const std::string& out) {
    const auto d = load_dataset(manifest_path, rc);

    if (sweep_arg.empty()) {
        // one selection over the whole set, persisted for inspection
        const auto disc = discretize(d.features, sigma);
        std::vector<std::int8_t> labels(d.labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i)
            labels[i] = std::int8_t(d.labels[i] > 0 ? 1 : 0);
        const auto res = mrmr_select(disc, labels, std::size_t(count));
        json j{{"selected", res.selected},
               {"scores", res.scores},
               {"config", config_json(rc)}};
        if (rc.feature == "lbp")
            j["per_filter_counts"] = per_filter_counts(res, rc.n_filters);
        write_text(out, j.dump(2) + "\n");
        return 0;
    }

    // accuracy-vs-count table with per-fold selection
    std::vector<double> counts;
    std::istringstream is(sweep_arg);
    std::string tok;
    while (std::getline(is, tok, ',')) counts.push_back(std::stod(tok));
    std::ostringstream os;
    os << "n_selected,spe,sen,oaa\n";
    for (double n : counts) {
        auto cc = classifier_config(rc);
        cc.selection_count = int(n);
        cc.selection_sigma = sigma;
        const auto report = evaluate(d, rc, cc);
        os << int(n) << ',' << metrics_csv_row(report) << '\n';
        std::fprintf(stderr, "n=%d: oaa %.2f\n", int(n), report.oaa);
    }
    write_text(out, os.str());
    return 0;
}

int cmd_plotdata(const std::string& manifest_path, const RunConfig& rc, const std::string& kind,
                 const std::string& out) {
    if (kind == "selection") {
        // coarse grid over 1..1044 mirroring the accuracy-vs-count figure
        return cmd_select(manifest_path, rc, 0, "1,5,10,25,50,100,150,250,500,750,1044", 1.0,
                          out);
    }
    return cmd_sweep(manifest_path, rc, kind, "", out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lung-sound classification: mel-spectrogram texture features, "
                 "kNN/SVM/MLP classifiers, mRMR selection, LOOCV evaluation"};
    app.require_subcommand(1);
    RunConfig rc;

    auto* synth = app.add_subcommand("synth", "Generate a synthetic labeled corpus");
    int per_class = 24;
    std::string shape = "flat", out_dir;
    synth->add_option("--per-class", per_class, "Cycles per class (normal, wheeze, crackle)")
        ->capture_default_str();
    synth->add_option("--seed", rc.seed, "Random seed")->capture_default_str();
    synth->add_option("--shape", shape, "flat or subject")
        ->check(CLI::IsMember({"flat", "subject"}))
        ->capture_default_str();
    synth->add_option("--rate", rc.rate, "Sample rate in Hz")->capture_default_str();
    synth->add_option("--out", out_dir, "Output directory")->required();

    std::string manifest_path, features_csv, out_path = "-";

    auto* extract = app.add_subcommand("extract", "Extract per-cycle feature rows to CSV");
    extract->add_option("--manifest", manifest_path, "Dataset manifest CSV")->required();
    extract->add_option("--out", out_path, "Output CSV path (- for stdout)")
        ->capture_default_str();
    add_pipeline_flags(extract, rc);

    auto* eval = app.add_subcommand("eval", "Leave-one-out evaluation, JSON report");
    eval->add_option("--manifest", manifest_path, "Dataset manifest CSV")->required();
    eval->add_option("--features", features_csv,
                     "Precomputed feature CSV from `extract` (skips extraction)");
    eval->add_option("--out", out_path, "Report JSON path (- for stdout)")
        ->capture_default_str();
    add_pipeline_flags(eval, rc);
    add_classifier_flags(eval, rc);

    auto* sweep = app.add_subcommand("sweep", "Parameter sweep, CSV of metrics per value");
    std::string param = "frame-ms", values_arg;
    sweep->add_option("--manifest", manifest_path, "Dataset manifest CSV")->required();
    sweep->add_option("--param", param, "Swept parameter: frame-ms, overlap, filters")
        ->check(CLI::IsMember({"frame-ms", "overlap", "filters"}))
        ->capture_default_str();
    sweep->add_option("--values", values_arg, "Comma-separated values (default: standard ranges)");
    sweep->add_option("--out", out_path, "Output CSV path (- for stdout)")
        ->capture_default_str();
    add_pipeline_flags(sweep, rc);
    add_classifier_flags(sweep, rc);

    auto* select = app.add_subcommand("select", "mRMR feature selection");
    int count = 150;
    double sigma = 1.0;
    std::string select_sweep;
    select->add_option("--manifest", manifest_path, "Dataset manifest CSV")->required();
    select->add_option("--count", count, "Number of features to select")->capture_default_str();
    select->add_option("--sweep", select_sweep,
                       "Comma-separated counts: emit accuracy-vs-count CSV instead");
    select->add_option("--sigma", sigma, "Discretization threshold width in stds")
        ->capture_default_str();
    select->add_option("--out", out_path, "Output path (- for stdout)")->capture_default_str();
    add_pipeline_flags(select, rc);
    add_classifier_flags(select, rc);

    auto* plot = app.add_subcommand("plot-data", "CSV series for the standard plots");
    std::string plot_kind = "frame-ms";
    plot->add_option("--manifest", manifest_path, "Dataset manifest CSV")->required();
    plot->add_option("--kind", plot_kind, "frame-ms, overlap, filters or selection")
        ->check(CLI::IsMember({"frame-ms", "overlap", "filters", "selection"}))
        ->capture_default_str();
    plot->add_option("--out", out_path, "Output CSV path (- for stdout)")
        ->capture_default_str();
    add_pipeline_flags(plot, rc);
    add_classifier_flags(plot, rc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        CLI::App* cmd = app.get_subcommands().front();
        resolve_profile(cmd, rc);
        set_jobs(rc.jobs);
        if (cmd == synth) return cmd_synth(per_class, rc.seed, out_dir, shape, rc.rate);
        if (cmd == extract) return cmd_extract(manifest_path, rc, out_path);
        if (cmd == eval) return cmd_eval(manifest_path, features_csv, rc, out_path);
        if (cmd == sweep) return cmd_sweep(manifest_path, rc, param, values_arg, out_path);
        if (cmd == select)
            return cmd_select(manifest_path, rc, count, select_sweep, sigma, out_path);
        if (cmd == plot) return cmd_plotdata(manifest_path, rc, plot_kind, out_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
