#include "voicefeat/stats.hpp"

#include <algorithm>
#include <cmath>

namespace voicefeat::stats {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw Error("pearson: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw Error("pearson: need at least 2 points");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        throw Error("pearson: zero variance input");
    return sxy / std::sqrt(sxx * syy);
}

CorrelationMap correlation_map(const std::vector<FeatureVector>& features,
                               const std::vector<LabelVector>& labels) {
    if (features.size() != labels.size())
        throw Error("correlation_map: row count mismatch");
    const std::size_t n = features.size();
    if (n < 2) throw Error("correlation_map: need at least 2 rows");

    CorrelationMap map;
    map.variables = {"pressure", "gc", "symmetry"};
    for (const char* name : FeatureVector::names()) map.variables.push_back(name);

    const std::size_t d = map.variables.size();
    std::vector<std::vector<double>> cols(d, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        cols[0][i] = static_cast<double>(labels[i].subglottal_pressure_pa);
        cols[1][i] = static_cast<double>(labels[i].gc_type);
        cols[2][i] = static_cast<double>(labels[i].symmetry);
        auto arr = features[i].as_array();
        for (std::size_t j = 0; j < FeatureVector::kSize; ++j)
            cols[3 + j][i] = arr[j];
    }

    map.matrix.assign(d, std::vector<double>(d, 1.0));
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a + 1; b < d; ++b) {
            double c;
            try {
                c = pearson(cols[a], cols[b]);
            } catch (const Error&) {
                throw Error("correlation_map: constant column '" +
                            map.variables[a] + "' or '" + map.variables[b] + "'");
            }
            map.matrix[a][b] = map.matrix[b][a] = c;
        }
    }
    return map;
}

double quantile_linear(std::vector<double> v, double p) {
    if (v.empty()) throw Error("quantile of empty sequence");
    std::sort(v.begin(), v.end());
    const double h = p * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

BoxplotStats boxplot_stats(std::vector<double> values, const std::string& group) {
    if (values.empty()) throw Error("boxplot_stats: empty group '" + group + "'");
    std::sort(values.begin(), values.end());

    BoxplotStats bs;
    bs.group = group;
    bs.q1 = quantile_linear(values, 0.25);
    bs.median = quantile_linear(values, 0.5);
    bs.q3 = quantile_linear(values, 0.75);

    const double iqr = bs.q3 - bs.q1;
    const double fence_lo = bs.q1 - 1.5 * iqr;
    const double fence_hi = bs.q3 + 1.5 * iqr;

    bs.whisker_low = bs.q1;
    bs.whisker_high = bs.q3;
    for (double v : values) {
        if (v >= fence_lo) {
            bs.whisker_low = v;  // first in-fence value (sorted ascending)
            break;
        }
    }
    for (auto it = values.rbegin(); it != values.rend(); ++it) {
        if (*it <= fence_hi) {
            bs.whisker_high = *it;
            break;
        }
    }
    for (double v : values)
        if (v < fence_lo || v > fence_hi) bs.outliers.push_back(v);
    return bs;
}

}  // namespace voicefeat::stats
