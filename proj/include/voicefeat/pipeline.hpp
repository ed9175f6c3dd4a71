#ifndef VOICEFEAT_PIPELINE_HPP
#define VOICEFEAT_PIPELINE_HPP

#include <string>
#include <vector>

#include "voicefeat/features.hpp"
#include "voicefeat/ml.hpp"
#include "voicefeat/stats.hpp"
#include "voicefeat/types.hpp"

namespace voicefeat::pipeline {

/// One row per configuration: id + labels + 9 features.
struct FeatureTable {
    std::vector<std::string> ids;
    std::vector<LabelVector> labels;
    std::vector<FeatureVector> features;

    std::size_t size() const { return ids.size(); }
};

struct ExtractionFailure {
    std::string id;
    std::string message;
};

struct ExtractResult {
    FeatureTable table;
    std::vector<ExtractionFailure> failures;
};

/// Loads and processes every manifest entry; failures are collected per id
/// and do not abort the run. Signal paths resolve relative to manifest_dir.
ExtractResult extract_all(const std::vector<ConfigRecord>& records,
                          const std::string& manifest_dir,
                          const features::FeatureConfig& cfg,
                          double sample_rate_hint, int jobs);

void save_feature_table(const std::string& path, const FeatureTable& table);
FeatureTable load_feature_table(const std::string& path);

void write_correlation_csv(const std::string& path, const stats::CorrelationMap& map);

enum class GroupBy { pressure, gc, symmetry };
GroupBy group_by_from_string(const std::string& name);

struct ClassifyResult {
    ml::CvReport cv;
    double training_score = 0.0;
    ml::Pipeline model;
    std::vector<int> true_labels;
    std::vector<int> predicted_labels;   // by the full-data model
    Eigen::MatrixXd projected;           // n x out_dims
};

std::vector<int> target_labels(const FeatureTable& table, GroupBy target);
Eigen::MatrixXd feature_matrix(const FeatureTable& table);

ClassifyResult classify(const FeatureTable& table, GroupBy target,
                        const ml::CvParams& params);

std::string classify_report_json(const ClassifyResult& result,
                                 const std::string& target_name);

// Six-panel default selection for boxplot figures.
const std::vector<std::string>& default_boxplot_features();

}  // namespace voicefeat::pipeline

#endif
