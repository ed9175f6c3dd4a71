#include "voicefeat/ml.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

#include "voicefeat/synth.hpp"

namespace voicefeat::ml {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::vector<int> sorted_classes(const std::vector<int>& y) {
    std::set<int> s(y.begin(), y.end());
    return std::vector<int>(s.begin(), s.end());
}

double rbf(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b, double gamma) {
    return std::exp(-gamma * (a - b).squaredNorm());
}

}  // namespace

Standardizer Standardizer::fit(const MatrixXd& X) {
    if (X.rows() < 2) throw Error("standardize: need at least 2 rows");
    Standardizer s;
    s.means = X.colwise().mean();
    s.stds.resize(X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        double var = (X.col(j).array() - s.means[j]).square().sum() /
                     static_cast<double>(X.rows());
        if (var <= 0.0)
            throw Error("standardize: constant column " + std::to_string(j));
        s.stds[j] = std::sqrt(var);
    }
    return s;
}

MatrixXd Standardizer::transform(const MatrixXd& X) const {
    if (X.cols() != means.size()) throw Error("standardize: dimension mismatch");
    return (X.rowwise() - means.transpose()).array().rowwise() /
           stds.transpose().array();
}

LdaProjection lda_fit(const MatrixXd& X, const std::vector<int>& y, int out_dims) {
    const Eigen::Index n = X.rows(), d = X.cols();
    if (static_cast<std::size_t>(n) != y.size())
        throw Error("lda_fit: row/label count mismatch");
    auto classes = sorted_classes(y);
    const int nc = static_cast<int>(classes.size());
    if (n <= nc) throw Error("lda_fit: need more samples than classes");
    if (out_dims < 1 || out_dims > std::min<int>(nc - 1, static_cast<int>(d)))
        throw Error("lda_fit: out_dims must lie in [1, min(n_classes-1, d)]");

    VectorXd global_mean = X.colwise().mean();
    MatrixXd sw = MatrixXd::Zero(d, d);
    MatrixXd sb = MatrixXd::Zero(d, d);
    for (int c = 0; c < nc; ++c) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index i = 0; i < n; ++i)
            if (y[i] == classes[c]) idx.push_back(i);
        VectorXd mean = VectorXd::Zero(d);
        for (auto i : idx) mean += X.row(i).transpose();
        mean /= static_cast<double>(idx.size());
        for (auto i : idx) {
            VectorXd diff = X.row(i).transpose() - mean;
            sw += diff * diff.transpose();
        }
        VectorXd md = mean - global_mean;
        sb += static_cast<double>(idx.size()) * md * md.transpose();
    }

    const double lambda = kLdaRegScale * sw.trace() / static_cast<double>(d);
    sw += lambda * MatrixXd::Identity(d, d);

    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> solver(sb, sw);
    if (solver.info() != Eigen::Success)
        throw Error("lda_fit: generalized eigensolver failed");

    // eigenvalues come out ascending; take the trailing out_dims columns
    LdaProjection proj;
    proj.classes = classes;
    proj.out_dims = out_dims;
    proj.weights.resize(d, out_dims);
    for (int j = 0; j < out_dims; ++j) {
        VectorXd w = solver.eigenvectors().col(d - 1 - j);
        // sign convention: largest-magnitude component positive
        Eigen::Index imax;
        w.cwiseAbs().maxCoeff(&imax);
        if (w[imax] < 0.0) w = -w;
        proj.weights.col(j) = w;
    }

    proj.class_means.resize(nc, out_dims);
    for (int c = 0; c < nc; ++c) {
        VectorXd mean = VectorXd::Zero(d);
        int count = 0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (y[i] == classes[c]) {
                mean += X.row(i).transpose();
                ++count;
            }
        mean /= static_cast<double>(count);
        proj.class_means.row(c) = (mean.transpose() * proj.weights);
    }
    return proj;
}

MatrixXd lda_transform(const LdaProjection& proj, const MatrixXd& X) {
    if (X.cols() != proj.weights.rows())
        throw Error("lda_transform: dimension mismatch");
    return X * proj.weights;
}

namespace {

// Simplified SMO on the soft-margin dual; pairwise updates keep
// sum(alpha_i * y_i) = 0 from the zero start.
BinarySvm smo_train(const MatrixXd& X, const VectorXd& y, double c, double gamma,
                    double tol, std::size_t max_iter) {
    const Eigen::Index n = X.rows();
    MatrixXd kernel(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j)
            kernel(i, j) = kernel(j, i) = rbf(X.row(i), X.row(j), gamma);

    VectorXd alpha = VectorXd::Zero(n);
    double b = 0.0;
    auto decision = [&](Eigen::Index i) {
        double f = b;
        for (Eigen::Index j = 0; j < n; ++j)
            if (alpha[j] != 0.0) f += alpha[j] * y[j] * kernel(j, i);
        return f;
    };

    synth::CounterRng rng(0x5eed5eedULL);  // fixed stream; training is deterministic
    std::size_t iter = 0;
    std::size_t passes_without_change = 0;
    while (passes_without_change < 2 && iter < max_iter) {
        int changed = 0;
        for (Eigen::Index i = 0; i < n && iter < max_iter; ++i, ++iter) {
            const double ei = decision(i) - y[i];
            const bool violates = (y[i] * ei < -tol && alpha[i] < c) ||
                                  (y[i] * ei > tol && alpha[i] > 0.0);
            if (!violates) continue;

            Eigen::Index j = static_cast<Eigen::Index>(rng.next_u64() %
                                                       static_cast<std::uint64_t>(n - 1));
            if (j >= i) ++j;
            const double ej = decision(j) - y[j];

            double lo, hi;
            if (y[i] != y[j]) {
                lo = std::max(0.0, alpha[j] - alpha[i]);
                hi = std::min(c, c + alpha[j] - alpha[i]);
            } else {
                lo = std::max(0.0, alpha[i] + alpha[j] - c);
                hi = std::min(c, alpha[i] + alpha[j]);
            }
            if (lo >= hi) continue;

            const double eta = 2.0 * kernel(i, j) - kernel(i, i) - kernel(j, j);
            if (eta >= 0.0) continue;

            const double aj_old = alpha[j], ai_old = alpha[i];
            double aj = aj_old - y[j] * (ei - ej) / eta;
            aj = std::clamp(aj, lo, hi);
            if (std::abs(aj - aj_old) < 1e-7) continue;
            alpha[j] = aj;
            alpha[i] = ai_old + y[i] * y[j] * (aj_old - aj);

            const double b1 = b - ei - y[i] * (alpha[i] - ai_old) * kernel(i, i) -
                              y[j] * (alpha[j] - aj_old) * kernel(i, j);
            const double b2 = b - ej - y[i] * (alpha[i] - ai_old) * kernel(i, j) -
                              y[j] * (alpha[j] - aj_old) * kernel(j, j);
            if (alpha[i] > 0.0 && alpha[i] < c)
                b = b1;
            else if (alpha[j] > 0.0 && alpha[j] < c)
                b = b2;
            else
                b = (b1 + b2) / 2.0;
            ++changed;
        }
        passes_without_change = changed == 0 ? passes_without_change + 1 : 0;
    }

    BinarySvm svm;
    std::vector<Eigen::Index> sv;
    for (Eigen::Index i = 0; i < n; ++i)
        if (alpha[i] > 1e-12) sv.push_back(i);
    svm.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), X.cols());
    svm.coeffs.resize(static_cast<Eigen::Index>(sv.size()));
    for (std::size_t s = 0; s < sv.size(); ++s) {
        svm.support_vectors.row(static_cast<Eigen::Index>(s)) = X.row(sv[s]);
        svm.coeffs[static_cast<Eigen::Index>(s)] = alpha[sv[s]] * y[sv[s]];
    }
    svm.bias = b;
    return svm;
}

double binary_decision(const BinarySvm& svm, const Eigen::RowVectorXd& x, double gamma) {
    double f = svm.bias;
    for (Eigen::Index s = 0; s < svm.support_vectors.rows(); ++s)
        f += svm.coeffs[s] * rbf(svm.support_vectors.row(s), x, gamma);
    return f;
}

double default_gamma(const MatrixXd& X) {
    double var = 0.0;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        double m = X.col(j).mean();
        var += (X.col(j).array() - m).square().sum() / static_cast<double>(X.rows());
    }
    var /= static_cast<double>(X.cols());
    if (var <= 0.0) var = 1.0;
    return 1.0 / (static_cast<double>(X.cols()) * var);
}

}  // namespace

SvmModel svm_train(const MatrixXd& X, const std::vector<int>& y,
                   const SvmParams& params) {
    if (static_cast<std::size_t>(X.rows()) != y.size())
        throw Error("svm_train: row/label count mismatch");
    auto classes = sorted_classes(y);
    if (classes.size() < 2) throw Error("svm_train: need at least 2 classes");

    SvmModel model;
    model.classes = classes;
    model.c = params.c;
    model.gamma = params.gamma > 0.0 ? params.gamma : default_gamma(X);

    for (int cls : classes) {
        VectorXd yy(X.rows());
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            yy[i] = y[i] == cls ? 1.0 : -1.0;
        model.machines.push_back(
            smo_train(X, yy, params.c, model.gamma, params.tol, params.max_iter));
    }
    return model;
}

MatrixXd svm_decision_values(const SvmModel& model, const MatrixXd& X) {
    if (X.cols() != model.feature_dim())
        throw Error("svm_predict: feature dimension mismatch");
    MatrixXd dv(X.rows(), static_cast<Eigen::Index>(model.machines.size()));
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (std::size_t m = 0; m < model.machines.size(); ++m)
            dv(i, static_cast<Eigen::Index>(m)) =
                binary_decision(model.machines[m], X.row(i), model.gamma);
    return dv;
}

std::vector<int> svm_predict(const SvmModel& model, const MatrixXd& X) {
    const MatrixXd dv = svm_decision_values(model, X);
    std::vector<int> out(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        // argmax with lowest-class-id tie-break; classes are sorted so the
        // first maximum wins
        Eigen::Index best = 0;
        for (Eigen::Index m = 1; m < dv.cols(); ++m)
            if (dv(i, m) > dv(i, best)) best = m;
        out[static_cast<std::size_t>(i)] = model.classes[static_cast<std::size_t>(best)];
    }
    return out;
}

std::vector<int> stratified_kfold(const std::vector<int>& y, int k,
                                  std::uint64_t seed) {
    const std::size_t n = y.size();
    if (k < 1 || static_cast<std::size_t>(k) > n)
        throw Error("stratified_kfold: k must lie in [1, n]");
    auto classes = sorted_classes(y);

    std::vector<int> folds(n, -1);
    int next_fold = 0;  // carried across classes to balance fold sizes
    for (int cls : classes) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
            if (y[i] == cls) idx.push_back(i);

        synth::CounterRng rng(seed ^ (0x9e3779b9ULL * static_cast<std::uint64_t>(cls + 1)));
        for (std::size_t i = idx.size(); i > 1; --i)
            std::swap(idx[i - 1], idx[rng.next_u64() % i]);

        for (std::size_t i = 0; i < idx.size(); ++i) {
            folds[idx[i]] = next_fold;
            next_fold = (next_fold + 1) % k;
        }
    }
    return folds;
}

CvReport cross_validate(const MatrixXd& X, const std::vector<int>& y,
                        const CvParams& params) {
    auto classes = sorted_classes(y);
    int lda_dims = params.lda_dims > 0
                       ? params.lda_dims
                       : std::min<int>(static_cast<int>(classes.size()) - 1, 2);

    CvReport report;
    report.fold_assignment = stratified_kfold(y, params.k, params.seed);

    // paper mode: transforms fitted once on the full data (leaky, but
    // matches training-score style evaluation)
    Standardizer full_std;
    LdaProjection full_lda;
    if (params.paper_mode) {
        MatrixXd Xs = X;
        if (params.standardize) {
            full_std = Standardizer::fit(X);
            Xs = full_std.transform(X);
        }
        full_lda = lda_fit(Xs, y, lda_dims);
    }

    for (int f = 0; f < params.k; ++f) {
        std::vector<Eigen::Index> train_idx, test_idx;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (report.fold_assignment[i] == f)
                test_idx.push_back(static_cast<Eigen::Index>(i));
            else
                train_idx.push_back(static_cast<Eigen::Index>(i));
        }
        if (test_idx.empty()) {
            report.fold_accuracies.push_back(1.0);
            continue;
        }

        MatrixXd Xtr(static_cast<Eigen::Index>(train_idx.size()), X.cols());
        MatrixXd Xte(static_cast<Eigen::Index>(test_idx.size()), X.cols());
        std::vector<int> ytr, yte;
        for (std::size_t i = 0; i < train_idx.size(); ++i) {
            Xtr.row(static_cast<Eigen::Index>(i)) = X.row(train_idx[i]);
            ytr.push_back(y[static_cast<std::size_t>(train_idx[i])]);
        }
        for (std::size_t i = 0; i < test_idx.size(); ++i) {
            Xte.row(static_cast<Eigen::Index>(i)) = X.row(test_idx[i]);
            yte.push_back(y[static_cast<std::size_t>(test_idx[i])]);
        }

        MatrixXd Ztr, Zte;
        if (params.paper_mode) {
            MatrixXd Str = params.standardize ? full_std.transform(Xtr) : Xtr;
            MatrixXd Ste = params.standardize ? full_std.transform(Xte) : Xte;
            Ztr = lda_transform(full_lda, Str);
            Zte = lda_transform(full_lda, Ste);
        } else {
            Standardizer st;
            MatrixXd Str = Xtr, Ste = Xte;
            if (params.standardize) {
                st = Standardizer::fit(Xtr);
                Str = st.transform(Xtr);
                Ste = st.transform(Xte);
            }
            int fold_dims = std::min<int>(
                lda_dims, static_cast<int>(sorted_classes(ytr).size()) - 1);
            auto proj = lda_fit(Str, ytr, fold_dims);
            Ztr = lda_transform(proj, Str);
            Zte = lda_transform(proj, Ste);
        }

        auto model = svm_train(Ztr, ytr, params.svm);
        auto pred = svm_predict(model, Zte);
        std::size_t hits = 0;
        for (std::size_t i = 0; i < yte.size(); ++i)
            if (pred[i] == yte[i]) ++hits;
        report.fold_accuracies.push_back(static_cast<double>(hits) /
                                         static_cast<double>(yte.size()));
    }

    double sum = 0.0;
    for (double a : report.fold_accuracies) sum += a;
    report.mean_accuracy = sum / static_cast<double>(report.fold_accuracies.size());
    return report;
}

DecisionGrid decision_grid(const SvmModel& model, const MatrixXd& points_2d,
                           int resolution) {
    if (model.feature_dim() != 2)
        throw Error("decision_grid: model must be 2-D");
    if (resolution < 2) throw Error("decision_grid: resolution must be >= 2");
    if (points_2d.cols() != 2) throw Error("decision_grid: points must be 2-D");

    double xmin = points_2d.col(0).minCoeff(), xmax = points_2d.col(0).maxCoeff();
    double ymin = points_2d.col(1).minCoeff(), ymax = points_2d.col(1).maxCoeff();
    double xpad = 0.1 * (xmax - xmin), ypad = 0.1 * (ymax - ymin);
    if (xpad == 0.0) xpad = 1.0;
    if (ypad == 0.0) ypad = 1.0;
    xmin -= xpad; xmax += xpad;
    ymin -= ypad; ymax += ypad;

    DecisionGrid grid;
    for (int i = 0; i < resolution; ++i) {
        grid.xs.push_back(xmin + (xmax - xmin) * i / (resolution - 1));
        grid.ys.push_back(ymin + (ymax - ymin) * i / (resolution - 1));
    }
    MatrixXd pts(resolution * resolution, 2);
    Eigen::Index r = 0;
    for (int yi = 0; yi < resolution; ++yi)
        for (int xi = 0; xi < resolution; ++xi, ++r) {
            pts(r, 0) = grid.xs[xi];
            pts(r, 1) = grid.ys[yi];
        }
    grid.labels = svm_predict(model, pts);
    return grid;
}

Pipeline fit_pipeline(const MatrixXd& X, const std::vector<int>& y,
                      const SvmParams& svm_params, bool standardize, int lda_dims) {
    auto classes = sorted_classes(y);
    if (lda_dims <= 0)
        lda_dims = std::min<int>(static_cast<int>(classes.size()) - 1, 2);

    Pipeline p;
    p.standardized = standardize;
    MatrixXd Xs = X;
    if (standardize) {
        p.standardizer = Standardizer::fit(X);
        Xs = p.standardizer.transform(X);
    }
    p.lda = lda_fit(Xs, y, lda_dims);
    MatrixXd Z = lda_transform(p.lda, Xs);
    p.svm = svm_train(Z, y, svm_params);
    return p;
}

MatrixXd pipeline_transform(const Pipeline& p, const MatrixXd& X) {
    MatrixXd Xs = p.standardized ? p.standardizer.transform(X) : X;
    return lda_transform(p.lda, Xs);
}

std::vector<int> pipeline_predict(const Pipeline& p, const MatrixXd& X) {
    return svm_predict(p.svm, pipeline_transform(p, X));
}

namespace {

nlohmann::json matrix_to_json(const MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

MatrixXd matrix_from_json(const nlohmann::json& j) {
    MatrixXd m(j.size(), j.empty() ? 0 : j[0].size());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index jj = 0; jj < m.cols(); ++jj)
            m(i, jj) = j[i][jj].get<double>();
    return m;
}

nlohmann::json vector_to_json(const VectorXd& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

VectorXd vector_from_json(const nlohmann::json& j) {
    VectorXd v(j.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = j[i].get<double>();
    return v;
}

}  // namespace

std::string pipeline_to_json(const Pipeline& p) {
    nlohmann::json j;
    j["version"] = 1;
    j["standardized"] = p.standardized;
    if (p.standardized) {
        j["standardizer"]["means"] = vector_to_json(p.standardizer.means);
        j["standardizer"]["stds"] = vector_to_json(p.standardizer.stds);
    }
    j["lda"]["weights"] = matrix_to_json(p.lda.weights);
    j["lda"]["class_means"] = matrix_to_json(p.lda.class_means);
    j["lda"]["classes"] = p.lda.classes;
    j["lda"]["out_dims"] = p.lda.out_dims;
    j["svm"]["classes"] = p.svm.classes;
    j["svm"]["gamma"] = p.svm.gamma;
    j["svm"]["c"] = p.svm.c;
    nlohmann::json machines = nlohmann::json::array();
    for (const auto& m : p.svm.machines) {
        nlohmann::json mj;
        mj["support_vectors"] = matrix_to_json(m.support_vectors);
        mj["coeffs"] = vector_to_json(m.coeffs);
        mj["bias"] = m.bias;
        machines.push_back(mj);
    }
    j["svm"]["machines"] = machines;
    return j.dump(2);
}

Pipeline pipeline_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("version").get<int>() != 1)
        throw Error("unsupported model version");
    Pipeline p;
    p.standardized = j.at("standardized").get<bool>();
    if (p.standardized) {
        p.standardizer.means = vector_from_json(j.at("standardizer").at("means"));
        p.standardizer.stds = vector_from_json(j.at("standardizer").at("stds"));
    }
    p.lda.weights = matrix_from_json(j.at("lda").at("weights"));
    p.lda.class_means = matrix_from_json(j.at("lda").at("class_means"));
    p.lda.classes = j.at("lda").at("classes").get<std::vector<int>>();
    p.lda.out_dims = j.at("lda").at("out_dims").get<int>();
    p.svm.classes = j.at("svm").at("classes").get<std::vector<int>>();
    p.svm.gamma = j.at("svm").at("gamma").get<double>();
    p.svm.c = j.at("svm").at("c").get<double>();
    for (const auto& mj : j.at("svm").at("machines")) {
        BinarySvm m;
        m.support_vectors = matrix_from_json(mj.at("support_vectors"));
        m.coeffs = vector_from_json(mj.at("coeffs"));
        m.bias = mj.at("bias").get<double>();
        p.svm.machines.push_back(std::move(m));
    }
    return p;
}

}  // namespace voicefeat::ml
