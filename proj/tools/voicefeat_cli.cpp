#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "voicefeat/io.hpp"
#include "voicefeat/pipeline.hpp"
#include "voicefeat/svg.hpp"
#include "voicefeat/synth.hpp"

namespace fs = std::filesystem;
using namespace voicefeat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitPartialFailure = 3;
constexpr int kExitSolverFailure = 4;

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write " + path.string());
    os << text;
}

std::string group_name(pipeline::GroupBy g, int value) {
    switch (g) {
        case pipeline::GroupBy::pressure: return std::to_string(value) + " Pa";
        case pipeline::GroupBy::gc: return "GC" + std::to_string(value);
        case pipeline::GroupBy::symmetry: return value ? "sym" : "asym";
    }
    return std::to_string(value);
}

int cmd_synth(const std::string& out_dir, std::uint64_t seed) {
    auto records = synth::write_surrogate_dataset(out_dir, seed);
    std::cout << "wrote " << records.size() << " signals + manifest to " << out_dir
              << "\n";
    return kExitOk;
}

int cmd_extract(const std::string& manifest, const std::string& out_dir,
                const features::FeatureConfig& cfg, double rate, int jobs) {
    auto records = load_manifest(manifest);
    fs::create_directories(out_dir);
    auto res = pipeline::extract_all(
        records, fs::path(manifest).parent_path().string(), cfg, rate, jobs);
    pipeline::save_feature_table((fs::path(out_dir) / "features.csv").string(),
                                 res.table);
    if (records.empty())
        std::cerr << "warning: empty manifest, wrote header-only features.csv\n";
    for (const auto& f : res.failures)
        std::cerr << "error: " << f.id << ": " << f.message << "\n";
    std::cout << "extracted " << res.table.size() << "/" << records.size()
              << " configurations\n";
    return res.failures.empty() ? kExitOk : kExitPartialFailure;
}

int cmd_correlate(const std::string& features_csv, const std::string& out_dir,
                  bool figures) {
    auto table = pipeline::load_feature_table(features_csv);
    auto map = stats::correlation_map(table.features, table.labels);
    fs::create_directories(out_dir);
    pipeline::write_correlation_csv((fs::path(out_dir) / "corr.csv").string(), map);
    if (figures)
        write_text(fs::path(out_dir) / "corr.svg", svg::correlation_heatmap(map));
    return kExitOk;
}

int cmd_boxplot(const std::string& features_csv, const std::string& group_by,
                const std::string& out_dir, bool figures) {
    auto table = pipeline::load_feature_table(features_csv);
    auto target = pipeline::group_by_from_string(group_by);
    auto y = pipeline::target_labels(table, target);

    std::vector<int> groups;
    for (int v : y)
        if (std::find(groups.begin(), groups.end(), v) == groups.end())
            groups.push_back(v);
    std::sort(groups.begin(), groups.end());

    fs::create_directories(out_dir);
    std::ofstream csv(fs::path(out_dir) / ("boxplot_" + group_by + ".csv"));
    csv << "feature,group,median,q1,q3,whisker_low,whisker_high,n_outliers\n";

    std::vector<svg::BoxplotPanel> panels;
    const auto& names = FeatureVector::names();
    for (std::size_t fi = 0; fi < names.size(); ++fi) {
        svg::BoxplotPanel panel;
        panel.feature_name = names[fi];
        for (int g : groups) {
            std::vector<double> vals;
            for (std::size_t i = 0; i < table.size(); ++i)
                if (y[i] == g) vals.push_back(table.features[i].as_array()[fi]);
            auto bs = stats::boxplot_stats(vals, group_name(target, g));
            csv << names[fi] << ',' << bs.group << ',' << format_number(bs.median)
                << ',' << format_number(bs.q1) << ',' << format_number(bs.q3) << ','
                << format_number(bs.whisker_low) << ','
                << format_number(bs.whisker_high) << ',' << bs.outliers.size()
                << '\n';
            panel.groups.push_back(std::move(bs));
        }
        const auto& sel = pipeline::default_boxplot_features();
        if (std::find(sel.begin(), sel.end(), names[fi]) != sel.end())
            panels.push_back(std::move(panel));
    }
    if (figures)
        write_text(fs::path(out_dir) / ("boxplot_" + group_by + ".svg"),
                   svg::boxplot_figure(panels, group_by));
    return kExitOk;
}

int cmd_classify(const std::string& features_csv, const std::string& target_name,
                 const std::string& out_dir, const ml::CvParams& params,
                 bool figures) {
    auto table = pipeline::load_feature_table(features_csv);
    auto target = pipeline::group_by_from_string(target_name);
    auto result = pipeline::classify(table, target, params);

    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / ("cv_report_" + target_name + ".json"),
               pipeline::classify_report_json(result, target_name));
    write_text(fs::path(out_dir) / ("model_" + target_name + ".json"),
               ml::pipeline_to_json(result.model));

    std::cout << "target " << target_name
              << ": training score = " << result.training_score
              << ", cv mean accuracy = " << result.cv.mean_accuracy << "\n";

    if (!figures) return kExitOk;

    const int res = 120;
    ml::DecisionGrid grid;
    std::vector<double> px, py;
    if (result.model.lda.out_dims == 2) {
        grid = ml::decision_grid(result.model.svm, result.projected, res);
        for (Eigen::Index i = 0; i < result.projected.rows(); ++i) {
            px.push_back(result.projected(i, 0));
            py.push_back(result.projected(i, 1));
        }
    } else {
        // 1-D projection: stripes replicated along a dummy y axis
        double lo = result.projected.col(0).minCoeff();
        double hi = result.projected.col(0).maxCoeff();
        double pad = 0.1 * (hi - lo);
        if (pad == 0.0) pad = 1.0;
        lo -= pad;
        hi += pad;
        Eigen::MatrixXd gx(res, 1);
        for (int i = 0; i < res; ++i) {
            double v = lo + (hi - lo) * i / (res - 1);
            grid.xs.push_back(v);
            grid.ys.push_back(-1.0 + 2.0 * i / (res - 1));
            gx(i, 0) = v;
        }
        auto labels = ml::svm_predict(result.model.svm, gx);
        for (int yi = 0; yi < res; ++yi)
            grid.labels.insert(grid.labels.end(), labels.begin(), labels.end());
        for (Eigen::Index i = 0; i < result.projected.rows(); ++i) {
            px.push_back(result.projected(i, 0));
            py.push_back(0.0);
        }
    }
    write_text(fs::path(out_dir) / ("lda_svm_" + target_name + ".svg"),
               svg::decision_figure(grid, px, py, result.true_labels,
                                    result.predicted_labels,
                                    result.model.svm.classes,
                                    "LDA/SVM: " + target_name));

    std::ofstream gcsv(fs::path(out_dir) / ("grid_" + target_name + ".csv"));
    gcsv << "x,y,label\n";
    for (std::size_t yi = 0; yi < grid.ys.size(); ++yi)
        for (std::size_t xi = 0; xi < grid.xs.size(); ++xi)
            gcsv << format_number(grid.xs[xi]) << ',' << format_number(grid.ys[yi])
                 << ',' << grid.labels[yi * grid.xs.size() + xi] << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acoustic voice-feature extraction and classification toolkit"};
    app.set_config("--config");
    app.require_subcommand(1);

    std::string default_out = "out";
    if (const char* env = std::getenv("VOICEFEAT_OUT")) default_out = env;

    std::string manifest, features_csv, out_dir = default_out;
    std::string group_by = "gc", target = "pressure";
    std::uint64_t seed = 0;
    int jobs = 0, folds = 5;
    double rate = kDefaultSampleRateHz;
    double lp_secondary = 2000.0;
    std::size_t hnr_margin = 300;
    double svm_c = 1.0, svm_gamma = 0.0;
    bool paper_mode = false, no_figures = false;

    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--jobs", jobs, "Worker threads (0 = hardware)");

    auto* s_synth = app.add_subcommand("synth", "Generate the 24-configuration surrogate dataset");

    auto* s_extract = app.add_subcommand("extract", "Extract the 9 features per manifest row");
    s_extract->add_option("--manifest", manifest, "Manifest CSV")->required();
    s_extract->add_option("--rate", rate, "Sample rate for headerless formats [Hz]")
        ->capture_default_str();
    s_extract->add_option("--lp-secondary", lp_secondary,
                          "Secondary low-pass cut-off [Hz]")->capture_default_str();
    s_extract->add_option("--hnr-margin", hnr_margin,
                          "HNR lag margin [samples]")->capture_default_str();

    auto* s_corr = app.add_subcommand("correlate", "Correlation map of labels and features");
    s_corr->add_option("--features", features_csv, "features.csv from extract")->required();
    s_corr->add_flag("--no-figures", no_figures, "Skip SVG output");

    auto* s_box = app.add_subcommand("boxplot", "Per-group boxplot statistics");
    s_box->add_option("--features", features_csv, "features.csv from extract")->required();
    s_box->add_option("--group-by", group_by, "pressure|gc|symmetry")
        ->capture_default_str();
    s_box->add_flag("--no-figures", no_figures, "Skip SVG output");

    auto* s_cls = app.add_subcommand("classify", "Standardize + LDA + one-vs-rest RBF SVM");
    s_cls->add_option("--features", features_csv, "features.csv from extract")->required();
    s_cls->add_option("--target", target, "pressure|gc|symmetry")->capture_default_str();
    s_cls->add_option("--svm-c", svm_c, "Soft-margin box constraint")->capture_default_str();
    s_cls->add_option("--svm-gamma", svm_gamma,
                      "RBF width (0 = 1/(d*mean variance))")->capture_default_str();
    s_cls->add_option("--folds", folds, "Cross-validation folds")->capture_default_str();
    s_cls->add_flag("--paper-mode", paper_mode,
                    "Fit standardizer and LDA on all data before cross-validation");
    s_cls->add_flag("--no-figures", no_figures, "Skip SVG output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (s_synth->parsed()) return cmd_synth(out_dir, seed);
        if (s_extract->parsed()) {
            features::FeatureConfig cfg;
            cfg.lp_secondary_hz = lp_secondary;
            cfg.hnr_margin_bins = hnr_margin;
            return cmd_extract(manifest, out_dir, cfg, rate, jobs);
        }
        if (s_corr->parsed()) return cmd_correlate(features_csv, out_dir, !no_figures);
        if (s_box->parsed())
            return cmd_boxplot(features_csv, group_by, out_dir, !no_figures);
        if (s_cls->parsed()) {
            ml::CvParams params;
            params.k = folds;
            params.seed = seed;
            params.svm.c = svm_c;
            params.svm.gamma = svm_gamma;
            params.paper_mode = paper_mode;
            try {
                return cmd_classify(features_csv, target, out_dir, params, !no_figures);
            } catch (const Error& e) {
                if (std::string(e.what()).find("solver") != std::string::npos) {
                    std::cerr << "error: " << e.what() << "\n";
                    return kExitSolverFailure;
                }
                throw;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
