#include "voicefeat/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace voicefeat::svg {

namespace {

const char* kVersionComment = "<!-- voicefeat figure v1 -->\n";

std::string fmt(double v, int prec = 2) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(prec);
    os << std::fixed << v;
    return os.str();
}

std::string header(int w, int h) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << kVersionComment
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
       << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h
       << "\" font-family=\"sans-serif\">\n";
    return os.str();
}

// diverging blue-white-red over [-1, 1]
std::string diverging_color(double v) {
    v = std::clamp(v, -1.0, 1.0);
    int r, g, b;
    if (v < 0.0) {
        double t = -v;
        r = static_cast<int>(std::lround(255 * (1.0 - t)));
        g = static_cast<int>(std::lround(255 * (1.0 - t)));
        b = 255;
    } else {
        r = 255;
        g = static_cast<int>(std::lround(255 * (1.0 - v)));
        b = static_cast<int>(std::lround(255 * (1.0 - v)));
    }
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

const std::vector<std::string>& class_palette() {
    static const std::vector<std::string> p = {
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
        "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    return p;
}

std::string class_color(int cls, const std::vector<int>& classes) {
    auto it = std::find(classes.begin(), classes.end(), cls);
    std::size_t idx = it == classes.end()
                          ? 0
                          : static_cast<std::size_t>(it - classes.begin());
    return class_palette()[idx % class_palette().size()];
}

}  // namespace

std::string correlation_heatmap(const stats::CorrelationMap& map,
                                std::size_t n_label_vars) {
    const std::size_t d = map.variables.size();
    const int cell = 52, margin = 110;
    const int w = margin + cell * static_cast<int>(d) + 20;
    const int h = margin + cell * static_cast<int>(d) + 20;

    std::ostringstream os;
    os << header(w, h);
    for (std::size_t i = 0; i < d; ++i) {
        int y = margin + cell * static_cast<int>(i);
        os << "<text x=\"" << margin - 6 << "\" y=\"" << y + cell / 2 + 4
           << "\" text-anchor=\"end\" font-size=\"11\">" << map.variables[i]
           << "</text>\n";
        os << "<text x=\"" << margin + cell * static_cast<int>(i) + cell / 2
           << "\" y=\"" << margin - 8 << "\" text-anchor=\"middle\" font-size=\"11\" "
           << "transform=\"rotate(-45 "
           << margin + cell * static_cast<int>(i) + cell / 2 << " " << margin - 8
           << ")\">" << map.variables[i] << "</text>\n";
        for (std::size_t j = 0; j < d; ++j) {
            int x = margin + cell * static_cast<int>(j);
            double v = map.matrix[i][j];
            os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
               << "\" height=\"" << cell << "\" fill=\"" << diverging_color(v)
               << "\" stroke=\"#ccc\"/>\n";
            os << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4
               << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(v)
               << "</text>\n";
        }
    }
    // separator between label block and feature block
    int sep = margin + cell * static_cast<int>(n_label_vars);
    int extent = margin + cell * static_cast<int>(d);
    os << "<line x1=\"" << sep << "\" y1=\"" << margin << "\" x2=\"" << sep
       << "\" y2=\"" << extent << "\" stroke=\"black\" stroke-width=\"3\"/>\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << sep << "\" x2=\"" << extent
       << "\" y2=\"" << sep << "\" stroke=\"black\" stroke-width=\"3\"/>\n";
    os << "</svg>\n";
    return os.str();
}

std::string boxplot_figure(const std::vector<BoxplotPanel>& panels,
                           const std::string& group_label) {
    const int panel_w = 260, panel_h = 220, cols = 3;
    const int rows = static_cast<int>((panels.size() + cols - 1) / cols);
    const int w = panel_w * cols + 40;
    const int h = panel_h * rows + 40;

    std::ostringstream os;
    os << header(w, h);
    for (std::size_t p = 0; p < panels.size(); ++p) {
        const auto& panel = panels[p];
        const int ox = 20 + panel_w * static_cast<int>(p % cols);
        const int oy = 20 + panel_h * static_cast<int>(p / cols);
        const int plot_x = ox + 46, plot_y = oy + 26;
        const int plot_w = panel_w - 66, plot_h = panel_h - 66;

        double lo = 1e300, hi = -1e300;
        for (const auto& g : panel.groups) {
            lo = std::min({lo, g.whisker_low});
            hi = std::max({hi, g.whisker_high});
            for (double o : g.outliers) {
                lo = std::min(lo, o);
                hi = std::max(hi, o);
            }
        }
        if (hi <= lo) { hi = lo + 1.0; }
        double pad = 0.08 * (hi - lo);
        lo -= pad;
        hi += pad;
        auto ymap = [&](double v) {
            return plot_y + plot_h - (v - lo) / (hi - lo) * plot_h;
        };

        os << "<text x=\"" << ox + panel_w / 2 << "\" y=\"" << oy + 14
           << "\" text-anchor=\"middle\" font-size=\"13\">" << panel.feature_name
           << "</text>\n";
        os << "<rect x=\"" << plot_x << "\" y=\"" << plot_y << "\" width=\""
           << plot_w << "\" height=\"" << plot_h
           << "\" fill=\"none\" stroke=\"#888\"/>\n";
        os << "<text x=\"" << plot_x - 6 << "\" y=\"" << ymap(lo) + 4
           << "\" text-anchor=\"end\" font-size=\"9\">" << fmt(lo, 1) << "</text>\n";
        os << "<text x=\"" << plot_x - 6 << "\" y=\"" << ymap(hi) + 4
           << "\" text-anchor=\"end\" font-size=\"9\">" << fmt(hi, 1) << "</text>\n";

        const int ng = static_cast<int>(panel.groups.size());
        const double slot = static_cast<double>(plot_w) / std::max(1, ng);
        for (int g = 0; g < ng; ++g) {
            const auto& bs = panel.groups[static_cast<std::size_t>(g)];
            const double cx = plot_x + slot * (g + 0.5);
            const double bw = slot * 0.5;
            os << "<line x1=\"" << fmt(cx) << "\" y1=\"" << fmt(ymap(bs.whisker_low))
               << "\" x2=\"" << fmt(cx) << "\" y2=\"" << fmt(ymap(bs.whisker_high))
               << "\" stroke=\"black\"/>\n";
            os << "<rect x=\"" << fmt(cx - bw / 2) << "\" y=\"" << fmt(ymap(bs.q3))
               << "\" width=\"" << fmt(bw) << "\" height=\""
               << fmt(std::max(1.0, ymap(bs.q1) - ymap(bs.q3)))
               << "\" fill=\"#aec7e8\" stroke=\"black\"/>\n";
            os << "<line x1=\"" << fmt(cx - bw / 2) << "\" y1=\""
               << fmt(ymap(bs.median)) << "\" x2=\"" << fmt(cx + bw / 2)
               << "\" y2=\"" << fmt(ymap(bs.median))
               << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
            for (double o : bs.outliers)
                os << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(ymap(o))
                   << "\" r=\"2.5\" fill=\"none\" stroke=\"black\"/>\n";
            os << "<text x=\"" << fmt(cx) << "\" y=\"" << plot_y + plot_h + 14
               << "\" text-anchor=\"middle\" font-size=\"10\">" << bs.group
               << "</text>\n";
        }
        os << "<text x=\"" << ox + panel_w / 2 << "\" y=\"" << plot_y + plot_h + 30
           << "\" text-anchor=\"middle\" font-size=\"11\">" << group_label
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string decision_figure(const ml::DecisionGrid& grid,
                            const std::vector<double>& px,
                            const std::vector<double>& py,
                            const std::vector<int>& true_labels,
                            const std::vector<int>& predicted_labels,
                            const std::vector<int>& classes,
                            const std::string& title) {
    const int size = 520, margin = 50;
    const int plot = size - 2 * margin;
    const double xmin = grid.xs.front(), xmax = grid.xs.back();
    const double ymin = grid.ys.front(), ymax = grid.ys.back();
    auto xmap = [&](double v) { return margin + (v - xmin) / (xmax - xmin) * plot; };
    auto ymap = [&](double v) {
        return margin + plot - (v - ymin) / (ymax - ymin) * plot;
    };

    std::ostringstream os;
    os << header(size, size + 30);
    os << "<text x=\"" << size / 2 << "\" y=\"20\" text-anchor=\"middle\" "
       << "font-size=\"14\">" << title << "</text>\n";

    const std::size_t res = grid.xs.size();
    const double cw = static_cast<double>(plot) / static_cast<double>(res);
    for (std::size_t yi = 0; yi < res; ++yi) {
        for (std::size_t xi = 0; xi < res; ++xi) {
            int cls = grid.labels[yi * res + xi];
            os << "<rect x=\"" << fmt(xmap(grid.xs[xi]) - cw / 2) << "\" y=\""
               << fmt(ymap(grid.ys[yi]) - cw / 2) << "\" width=\"" << fmt(cw + 0.5)
               << "\" height=\"" << fmt(cw + 0.5) << "\" fill=\""
               << class_color(cls, classes) << "\" fill-opacity=\"0.25\"/>\n";
        }
    }

    for (std::size_t i = 0; i < px.size(); ++i) {
        os << "<circle cx=\"" << fmt(xmap(px[i])) << "\" cy=\"" << fmt(ymap(py[i]))
           << "\" r=\"8\" fill=\"none\" stroke=\""
           << class_color(predicted_labels[i], classes)
           << "\" stroke-width=\"3\"/>\n";
        os << "<circle cx=\"" << fmt(xmap(px[i])) << "\" cy=\"" << fmt(ymap(py[i]))
           << "\" r=\"4.5\" fill=\"" << class_color(true_labels[i], classes)
           << "\"/>\n";
    }

    for (std::size_t c = 0; c < classes.size(); ++c) {
        int lx = margin + static_cast<int>(c) * 110;
        int ly = size + 12;
        os << "<circle cx=\"" << lx << "\" cy=\"" << ly << "\" r=\"5\" fill=\""
           << class_color(classes[c], classes) << "\"/>\n";
        os << "<text x=\"" << lx + 10 << "\" y=\"" << ly + 4
           << "\" font-size=\"12\">class " << classes[c] << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace voicefeat::svg
