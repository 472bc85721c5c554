#include "gda/svg.hpp"

#include "gda/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace gda {

namespace {

std::string num(double x) {
    if (std::abs(x) < 0.005) x = 0.0;
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

std::string pct(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, 1);
    return std::string(buf, res.ptr);
}

std::string general(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(ch);
        }
    }
    return out;
}

struct Frame {
    double scale = 1.0, cx = 0.0, cy = 0.0;
    int canvas = 1000;
    double x(double v) const { return canvas / 2.0 + (v - cx) * scale; }
    double y(double v) const { return canvas / 2.0 - (v - cy) * scale; }
};

std::string header(int canvas) {
    const std::string c = std::to_string(canvas);
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + c + "\" height=\"" + c + "\" viewBox=\"0 0 " + c +
           " " + c + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
}

std::set<std::string> labelled(const FactorModel& model, PointKind kind, LabelPolicy policy, std::size_t m,
                               const std::vector<int>& axes) {
    std::set<std::string> out;
    if (policy == LabelPolicy::all)
        out.insert(model.labels(kind).begin(), model.labels(kind).end());
    else if (policy == LabelPolicy::top)
        for (const auto& c : top_contributors(model, kind, axes, m)) out.insert(c.label);
    return out;
}

}  // namespace

LabelPolicy label_policy_from_string(const std::string& s) {
    if (s == "all") return LabelPolicy::all;
    if (s == "top") return LabelPolicy::top;
    if (s == "none") return LabelPolicy::none;
    throw InputError("unknown label policy '" + s + "' (expected all, top or none)");
}

std::string render_factor_plane(const FactorModel& model, const PlotSpec& spec) {
    const Eigen::Index K = model.factors();
    if (K < 2)
        throw DegenerateError("a factor plane needs at least 2 factors, the model has " + std::to_string(K) +
                              "; plot axis 1 as a 1-D strip instead");
    for (int a : {spec.axis_x, spec.axis_y})
        if (a < 1 || a > K)
            throw InputError("plane axis " + std::to_string(a) + " out of range 1.." + std::to_string(K));
    if (spec.axis_x == spec.axis_y) throw InputError("plane axes must differ");
    const Eigen::Index ax = spec.axis_x - 1, ay = spec.axis_y - 1;
    for (const auto& s : spec.supplementary)
        if (s.coords.cols() != K) throw InputError("supplementary points do not match the model's factor count");
    for (const auto& r : spec.impacts)
        if (r.centroid.size() != K) throw InputError("impact centroids do not match the model's factor count");

    // Extent of everything drawn, origin included.
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    const auto extend = [&](double x, double y) {
        xmin = std::min(xmin, x), xmax = std::max(xmax, x);
        ymin = std::min(ymin, y), ymax = std::max(ymax, y);
    };
    if (spec.show_rows)
        for (Eigen::Index i = 0; i < model.row_coords.rows(); ++i) extend(model.row_coords(i, ax), model.row_coords(i, ay));
    if (spec.show_cols)
        for (Eigen::Index j = 0; j < model.col_coords.rows(); ++j) extend(model.col_coords(j, ax), model.col_coords(j, ay));
    for (const auto& s : spec.supplementary)
        for (Eigen::Index p = 0; p < s.coords.rows(); ++p) extend(s.coords(p, ax), s.coords(p, ay));
    for (const auto& r : spec.impacts) {
        extend(r.centroid(ax), r.centroid(ay));
        const Eigen::Index i = model.index_of(PointKind::row, r.initiator);
        extend(model.row_coords(i, ax), model.row_coords(i, ay));
    }

    Frame f;
    f.canvas = spec.canvas;
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-300});
    f.scale = (spec.canvas - 2.0 * spec.margin) / span;
    f.cx = (xmin + xmax) / 2;
    f.cy = (ymin + ymax) / 2;

    const auto inertia = inertia_report(model);
    std::string svg = header(spec.canvas);
    svg += "<defs><marker id=\"arrowhead\" markerWidth=\"10\" markerHeight=\"7\" refX=\"10\" refY=\"3.5\" "
           "orient=\"auto\"><polygon points=\"0 0, 10 3.5, 0 7\" fill=\"#b22222\"/></marker></defs>\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!spec.title.empty())
        svg += "<text x=\"" + num(spec.canvas / 2.0) + "\" y=\"" + num(spec.margin / 2.0) +
               "\" text-anchor=\"middle\" font-size=\"16\">" + escape(spec.title) + "</text>\n";

    const std::string lo = num(spec.margin), hi = num(spec.canvas - spec.margin);
    const std::string ox = num(f.x(0.0)), oy = num(f.y(0.0));
    svg += "<g class=\"axes\" stroke=\"#888\" stroke-dasharray=\"4 3\">\n";
    svg += "<line x1=\"" + lo + "\" y1=\"" + oy + "\" x2=\"" + hi + "\" y2=\"" + oy + "\"/>\n";
    svg += "<line x1=\"" + ox + "\" y1=\"" + lo + "\" x2=\"" + ox + "\" y2=\"" + hi + "\"/>\n";
    svg += "</g>\n";
    const auto axis_title = [&](int a) {
        return "Dim " + std::to_string(a) + " (" + pct(inertia[static_cast<std::size_t>(a - 1)].percent) + "%)";
    };
    svg += "<text class=\"axis-label\" x=\"" + hi + "\" y=\"" + num(f.y(0.0) - 6) + "\" text-anchor=\"end\">" +
           axis_title(spec.axis_x) + "</text>\n";
    svg += "<text class=\"axis-label\" x=\"" + num(f.x(0.0) + 6) + "\" y=\"" + num(spec.margin - 6.0) + "\">" +
           axis_title(spec.axis_y) + "</text>\n";

    const std::vector<int> axes{spec.axis_x, spec.axis_y};
    const auto draw_set = [&](PointKind kind, LabelPolicy policy, const char* colour) {
        const auto names = labelled(model, kind, policy, spec.top_m, axes);
        const auto& coords = model.coords(kind);
        const auto& labels = model.labels(kind);
        svg += std::string("<g class=\"") + to_string(kind) + "\" fill=\"" + colour + "\">\n";
        for (Eigen::Index i = 0; i < coords.rows(); ++i) {
            const std::string x = num(f.x(coords(i, ax))), y = num(f.y(coords(i, ay)));
            const std::string& name = labels[static_cast<std::size_t>(i)];
            if (names.count(name)) {
                svg += "<circle class=\"point\" cx=\"" + x + "\" cy=\"" + y + "\" r=\"3\"/>";
                svg += "<text x=\"" + num(f.x(coords(i, ax)) + 5) + "\" y=\"" + num(f.y(coords(i, ay)) - 4) + "\">" +
                       escape(name) + "</text>\n";
            } else {
                svg += "<circle class=\"dot\" cx=\"" + x + "\" cy=\"" + y + "\" r=\"1.5\"/>\n";
            }
        }
        svg += "</g>\n";
    };
    if (spec.show_cols) draw_set(PointKind::column, spec.col_labels, "#d2691e");
    if (spec.show_rows) draw_set(PointKind::row, spec.row_labels, "#1f4e99");

    if (!spec.supplementary.empty()) {
        svg += "<g class=\"supplementary\" fill=\"none\" stroke=\"#2e8b57\">\n";
        for (const auto& s : spec.supplementary)
            for (Eigen::Index p = 0; p < s.coords.rows(); ++p) {
                const double x = f.x(s.coords(p, ax)), y = f.y(s.coords(p, ay));
                svg += "<rect class=\"supp\" x=\"" + num(x - 3) + "\" y=\"" + num(y - 3) +
                       "\" width=\"6\" height=\"6\"/><text x=\"" + num(x + 5) + "\" y=\"" + num(y - 4) +
                       "\" fill=\"#2e8b57\" stroke=\"none\" font-style=\"italic\">" +
                       escape(s.labels[static_cast<std::size_t>(p)]) + "</text>\n";
            }
        svg += "</g>\n";
    }

    if (!spec.impacts.empty()) {
        svg += "<g class=\"impacts\" stroke=\"#b22222\" fill=\"#b22222\">\n";
        for (const auto& r : spec.impacts) {
            const Eigen::Index i = model.index_of(PointKind::row, r.initiator);
            const double x0 = f.x(model.row_coords(i, ax)), y0 = f.y(model.row_coords(i, ay));
            const double x1 = f.x(r.centroid(ax)), y1 = f.y(r.centroid(ay));
            svg += "<line class=\"arrow\" x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" +
                   num(y1) + "\" marker-end=\"url(#arrowhead)\"/>";
            svg += "<circle class=\"centroid\" cx=\"" + num(x1) + "\" cy=\"" + num(y1) + "\" r=\"4\"/>";
            svg += "<text x=\"" + num(x1 + 6) + "\" y=\"" + num(y1 + 12) + "\" stroke=\"none\">" + escape(r.group) +
                   "</text><text x=\"" + num(x0 + 6) + "\" y=\"" + num(y0 - 4) + "\" stroke=\"none\">" +
                   escape(r.initiator) + "</text>\n";
        }
        svg += "</g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string render_dendrogram(const Dendrogram& dend, int canvas, int margin) {
    dend.validate();
    const std::size_t P = dend.leaves();
    const auto order = dend.leaf_order();
    const double label_band = 120.0;
    const double top = margin, bottom = canvas - margin - label_band;
    const double hmax = dend.merges.empty() ? 0.0 : dend.merges.back().height;
    const double step = P > 1 ? (canvas - 2.0 * margin) / static_cast<double>(P - 1) : 0.0;
    const auto ypos = [&](double h) { return hmax > 0 ? bottom - (bottom - top) * h / hmax : bottom; };

    std::vector<double> x(P + dend.merges.size()), y(P + dend.merges.size(), bottom);
    for (std::size_t s = 0; s < P; ++s) x[order[s]] = P > 1 ? margin + step * static_cast<double>(s) : canvas / 2.0;

    std::string svg = header(canvas);
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<g class=\"brackets\" fill=\"none\" stroke=\"black\">\n";
    for (std::size_t m = 0; m < dend.merges.size(); ++m) {
        const Merge& mg = dend.merges[m];
        const std::size_t id = P + m;
        x[id] = (x[mg.left] + x[mg.right]) / 2;
        y[id] = ypos(mg.height);
        svg += "<path class=\"bracket\" d=\"M" + num(x[mg.left]) + " " + num(y[mg.left]) + "V" + num(y[id]) + "H" +
               num(x[mg.right]) + "V" + num(y[mg.right]) + "\"/>\n";
    }
    svg += "</g>\n";
    svg += "<g class=\"leaves\">\n";
    for (std::size_t s = 0; s < P; ++s) {
        const std::size_t leaf = order[s];
        svg += "<text x=\"" + num(x[leaf]) + "\" y=\"" + num(bottom + 8) + "\" transform=\"rotate(90 " +
               num(x[leaf]) + " " + num(bottom + 8) + ")\">" + escape(dend.leaf_labels[leaf]) + "</text>\n";
    }
    svg += "</g>\n";
    svg += "<text class=\"axis-label\" x=\"" + num(margin) + "\" y=\"" + num(top - 8) + "\">height " + general(hmax) +
           "</text>\n";
    svg += "</svg>\n";
    return svg;
}

}  // namespace gda
