#include "voicefeat/pipeline.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "voicefeat/io.hpp"

namespace voicefeat::pipeline {

namespace fs = std::filesystem;

ExtractResult extract_all(const std::vector<ConfigRecord>& records,
                          const std::string& manifest_dir,
                          const features::FeatureConfig& cfg,
                          double sample_rate_hint, int jobs) {
    struct Slot {
        bool ok = false;
        FeatureVector fv;
        std::string error;
    };
    std::vector<Slot> slots(records.size());

    auto work = [&](std::size_t i) {
        try {
            fs::path p(records[i].signal_path);
            if (p.is_relative()) p = fs::path(manifest_dir) / p;
            auto sig = load_signal(p.string(), format_from_path(p.string()),
                                   sample_rate_hint);
            slots[i].fv = features::extract_features(sig, cfg);
            slots[i].ok = true;
        } catch (const std::exception& e) {
            slots[i].error = e.what();
        }
    };

    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    if (jobs == 1 || records.size() < 2) {
        for (std::size_t i = 0; i < records.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < records.size();
                     i = next.fetch_add(1))
                    work(i);
            });
        for (auto& t : pool) t.join();
    }

    ExtractResult res;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (slots[i].ok) {
            res.table.ids.push_back(records[i].id);
            res.table.labels.push_back(records[i].label);
            res.table.features.push_back(slots[i].fv);
        } else {
            res.failures.push_back({records[i].id, slots[i].error});
        }
    }
    return res;
}

void save_feature_table(const std::string& path, const FeatureTable& table) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write feature table: " + path);
    os << "id,pressure_pa,gc_type,symmetry";
    for (const char* name : FeatureVector::names()) os << ',' << name;
    os << '\n';
    for (std::size_t i = 0; i < table.size(); ++i) {
        os << table.ids[i] << ',' << table.labels[i].subglottal_pressure_pa << ','
           << table.labels[i].gc_type << ','
           << static_cast<int>(table.labels[i].symmetry);
        for (double v : table.features[i].as_array()) os << ',' << format_number(v);
        os << '\n';
    }
}

FeatureTable load_feature_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open feature table: " + path);
    FeatureTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("id,", 0) == 0) continue;
        }
        auto f = split_csv_line(line);
        if (f.size() != 4 + FeatureVector::kSize)
            throw Error("feature table row needs 13 columns: " + line);
        table.ids.push_back(f[0]);
        LabelVector lab;
        lab.subglottal_pressure_pa = std::stoi(f[1]);
        lab.gc_type = std::stoi(f[2]);
        lab.symmetry = static_cast<Symmetry>(std::stoi(f[3]));
        lab.validate();
        table.labels.push_back(lab);
        FeatureVector fv;
        double* fields[] = {&fv.spl_5k, &fv.hnr_5k, &fv.hnr_2k,
                            &fv.cpp_5k, &fv.cpp_2k, &fv.slope_5k,
                            &fv.slope_2k, &fv.hbi_5k, &fv.alpha_5k};
        for (std::size_t j = 0; j < FeatureVector::kSize; ++j)
            *fields[j] = std::stod(f[4 + j]);
        table.features.push_back(fv);
    }
    return table;
}

void write_correlation_csv(const std::string& path, const stats::CorrelationMap& map) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write correlation csv: " + path);
    os << "variable";
    for (const auto& v : map.variables) os << ',' << v;
    os << '\n';
    for (std::size_t i = 0; i < map.variables.size(); ++i) {
        os << map.variables[i];
        for (double v : map.matrix[i]) os << ',' << format_number(v);
        os << '\n';
    }
}

GroupBy group_by_from_string(const std::string& name) {
    if (name == "pressure") return GroupBy::pressure;
    if (name == "gc") return GroupBy::gc;
    if (name == "symmetry") return GroupBy::symmetry;
    throw Error("unknown label name: " + name + " (expected pressure|gc|symmetry)");
}

std::vector<int> target_labels(const FeatureTable& table, GroupBy target) {
    std::vector<int> y;
    y.reserve(table.size());
    for (const auto& lab : table.labels) {
        switch (target) {
            case GroupBy::pressure: y.push_back(lab.subglottal_pressure_pa); break;
            case GroupBy::gc: y.push_back(lab.gc_type); break;
            case GroupBy::symmetry: y.push_back(static_cast<int>(lab.symmetry)); break;
        }
    }
    return y;
}

Eigen::MatrixXd feature_matrix(const FeatureTable& table) {
    Eigen::MatrixXd X(static_cast<Eigen::Index>(table.size()),
                      static_cast<Eigen::Index>(FeatureVector::kSize));
    for (std::size_t i = 0; i < table.size(); ++i) {
        auto arr = table.features[i].as_array();
        for (std::size_t j = 0; j < arr.size(); ++j)
            X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = arr[j];
    }
    return X;
}

ClassifyResult classify(const FeatureTable& table, GroupBy target,
                        const ml::CvParams& params) {
    ClassifyResult res;
    Eigen::MatrixXd X = feature_matrix(table);
    res.true_labels = target_labels(table, target);

    res.cv = ml::cross_validate(X, res.true_labels, params);
    res.model = ml::fit_pipeline(X, res.true_labels, params.svm,
                                 params.standardize, params.lda_dims);
    res.projected = ml::pipeline_transform(res.model, X);
    res.predicted_labels = ml::svm_predict(res.model.svm, res.projected);

    std::size_t hits = 0;
    for (std::size_t i = 0; i < res.true_labels.size(); ++i)
        if (res.predicted_labels[i] == res.true_labels[i]) ++hits;
    res.training_score =
        static_cast<double>(hits) / static_cast<double>(res.true_labels.size());
    return res;
}

std::string classify_report_json(const ClassifyResult& result,
                                 const std::string& target_name) {
    nlohmann::json j;
    j["target"] = target_name;
    j["training_score"] = result.training_score;
    j["cv"]["fold_accuracies"] = result.cv.fold_accuracies;
    j["cv"]["mean_accuracy"] = result.cv.mean_accuracy;
    j["cv"]["fold_assignment"] = result.cv.fold_assignment;
    nlohmann::json weights = nlohmann::json::array();
    for (Eigen::Index i = 0; i < result.model.lda.weights.rows(); ++i) {
        nlohmann::json row;
        row["feature"] = FeatureVector::names()[static_cast<std::size_t>(i)];
        nlohmann::json ws = nlohmann::json::array();
        for (Eigen::Index d = 0; d < result.model.lda.weights.cols(); ++d)
            ws.push_back(result.model.lda.weights(i, d));
        row["weights"] = ws;
        weights.push_back(row);
    }
    j["lda_weights"] = weights;
    return j.dump(2);
}

const std::vector<std::string>& default_boxplot_features() {
    static const std::vector<std::string> v = {
        "spl_5k", "hnr_2k", "cpp_2k", "slope_2k", "hbi_5k", "alpha_5k"};
    return v;
}

}  // namespace voicefeat::pipeline
