#pragma once

#include "gda/ca.hpp"
#include "gda/hcluster.hpp"
#include "gda/narrative.hpp"

#include <string>
#include <vector>

namespace gda {

enum class LabelPolicy { all, top, none };

LabelPolicy label_policy_from_string(const std::string& s);

struct PlotSpec {
    int axis_x = 1;  // 1-based
    int axis_y = 2;
    bool show_rows = true;
    bool show_cols = true;
    /// Unlabelled points are drawn as dots.
    LabelPolicy row_labels = LabelPolicy::all;
    LabelPolicy col_labels = LabelPolicy::all;
    std::size_t top_m = 0;  // used by LabelPolicy::top: the m largest plane contributors
    std::vector<SupplementaryProjection> supplementary;
    std::vector<ImpactRecord> impacts;  // arrow from each initiator to its group centroid
    int canvas = 1000;
    int margin = 60;
    std::string title;
};

/// Factor plane with equal scaling on both axes, axis titles "Dim k (p%)".
/// Throws DegenerateError when the model has fewer than two factors.
std::string render_factor_plane(const FactorModel& model, const PlotSpec& spec);

/// Leaves left to right in dendrogram order, bracket heights to scale.
std::string render_dendrogram(const Dendrogram& dend, int canvas = 1000, int margin = 60);

}  // namespace gda
