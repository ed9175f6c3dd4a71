#ifndef VOICEFEAT_SVG_HPP
#define VOICEFEAT_SVG_HPP

#include <string>
#include <vector>

#include "voicefeat/ml.hpp"
#include "voicefeat/stats.hpp"

namespace voicefeat::svg {

/// Annotated correlation heatmap, diverging color scale over [-1, 1].
std::string correlation_heatmap(const stats::CorrelationMap& map,
                                std::size_t n_label_vars = 3);

struct BoxplotPanel {
    std::string feature_name;
    std::vector<stats::BoxplotStats> groups;
};

std::string boxplot_figure(const std::vector<BoxplotPanel>& panels,
                           const std::string& group_label);

/// Scatter of projected points over the decision-region background.
/// Inner dot = true class, outer ring = predicted class.
std::string decision_figure(const ml::DecisionGrid& grid,
                            const std::vector<double>& px,
                            const std::vector<double>& py,
                            const std::vector<int>& true_labels,
                            const std::vector<int>& predicted_labels,
                            const std::vector<int>& classes,
                            const std::string& title);

}  // namespace voicefeat::svg

#endif
