#ifndef VOICEFEAT_ML_HPP
#define VOICEFEAT_ML_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "voicefeat/types.hpp"

namespace voicefeat::ml {

struct Standardizer {
    Eigen::VectorXd means;
    Eigen::VectorXd stds;

    static Standardizer fit(const Eigen::MatrixXd& X);
    Eigen::MatrixXd transform(const Eigen::MatrixXd& X) const;
};

struct LdaProjection {
    Eigen::MatrixXd weights;      // d x out_dims
    Eigen::MatrixXd class_means;  // n_classes x out_dims, projected
    std::vector<int> classes;
    int out_dims = 0;
};

// Regularization added to the within-class scatter: lambda = 1e-6 * trace/d.
constexpr double kLdaRegScale = 1e-6;

LdaProjection lda_fit(const Eigen::MatrixXd& X, const std::vector<int>& y,
                      int out_dims);
Eigen::MatrixXd lda_transform(const LdaProjection& proj, const Eigen::MatrixXd& X);

struct BinarySvm {
    Eigen::MatrixXd support_vectors;
    Eigen::VectorXd coeffs;  // alpha_i * y_i per support vector
    double bias = 0.0;
};

struct SvmModel {
    std::vector<int> classes;
    std::vector<BinarySvm> machines;  // one-vs-rest, aligned with classes
    double gamma = 1.0;
    double c = 1.0;

    int feature_dim() const {
        return machines.empty() ? 0 : static_cast<int>(machines[0].support_vectors.cols());
    }
};

struct SvmParams {
    double c = 1.0;
    double gamma = 0.0;  // <= 0: 1 / (d * mean feature variance)
    double tol = 1e-3;
    std::size_t max_iter = 100000;
};

SvmModel svm_train(const Eigen::MatrixXd& X, const std::vector<int>& y,
                   const SvmParams& params = {});
std::vector<int> svm_predict(const SvmModel& model, const Eigen::MatrixXd& X);
Eigen::MatrixXd svm_decision_values(const SvmModel& model, const Eigen::MatrixXd& X);

/// Per-class seeded shuffle followed by round-robin assignment; per-class
/// fold counts differ by at most 1.
std::vector<int> stratified_kfold(const std::vector<int>& y, int k,
                                  std::uint64_t seed);

struct CvReport {
    std::vector<double> fold_accuracies;
    double mean_accuracy = 0.0;
    std::vector<int> fold_assignment;
};

struct CvParams {
    int k = 5;
    std::uint64_t seed = 0;
    SvmParams svm;
    bool standardize = true;
    int lda_dims = 0;      // 0 = min(n_classes - 1, 2)
    bool paper_mode = false;  // fit standardizer + LDA on all data before CV
};

CvReport cross_validate(const Eigen::MatrixXd& X, const std::vector<int>& y,
                        const CvParams& params = {});

struct DecisionGrid {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<int> labels;  // row-major, ys outer, xs inner
};

/// Predictions over the bounding box of the given points, expanded by 10%.
DecisionGrid decision_grid(const SvmModel& model, const Eigen::MatrixXd& points_2d,
                           int resolution);

/// Full classification pipeline fitted on all data (used for training
/// scores and decision figures).
struct Pipeline {
    Standardizer standardizer;
    bool standardized = true;
    LdaProjection lda;
    SvmModel svm;
};

Pipeline fit_pipeline(const Eigen::MatrixXd& X, const std::vector<int>& y,
                      const SvmParams& svm_params, bool standardize, int lda_dims);
std::vector<int> pipeline_predict(const Pipeline& p, const Eigen::MatrixXd& X);
Eigen::MatrixXd pipeline_transform(const Pipeline& p, const Eigen::MatrixXd& X);

std::string pipeline_to_json(const Pipeline& p);
Pipeline pipeline_from_json(const std::string& text);

}  // namespace voicefeat::ml

#endif
