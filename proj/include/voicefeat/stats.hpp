#ifndef VOICEFEAT_STATS_HPP
#define VOICEFEAT_STATS_HPP

#include <string>
#include <vector>

#include "voicefeat/types.hpp"

namespace voicefeat::stats {

struct CorrelationMap {
    std::vector<std::string> variables;         // labels first, then features
    std::vector<std::vector<double>> matrix;    // square, symmetric
};

struct BoxplotStats {
    std::string group;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double whisker_low = 0.0;
    double whisker_high = 0.0;
    std::vector<double> outliers;
};

double pearson(const std::vector<double>& x, const std::vector<double>& y);

/// 12x12 Pearson map over [pressure, gc, symmetry | 9 features], labels
/// encoded as their raw numeric values.
CorrelationMap correlation_map(const std::vector<FeatureVector>& features,
                               const std::vector<LabelVector>& labels);

/// Quartiles by linear interpolation between order statistics; whiskers at
/// the most extreme points within 1.5*IQR of the box.
BoxplotStats boxplot_stats(std::vector<double> values, const std::string& group);

double quantile_linear(std::vector<double> sorted_values, double p);

}  // namespace voicefeat::stats

#endif
