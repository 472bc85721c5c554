#pragma once

#include "gda/table.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace gda {

enum class PointKind { row, column };

const char* to_string(PointKind kind);
PointKind point_kind_from_string(const std::string& s);

struct FitOptions {
    /// Strict fits reject tables with empty rows/columns; lenient fits drop them.
    bool strict = true;
    /// Factors with sigma_k <= rank_tolerance * max(sigma_1, 1) are discarded.
    double rank_tolerance = 1e-12;
};

/// Fitted correspondence analysis.
///
/// Principal coordinates F (rows) and G (columns) are scaled so that the
/// mass-weighted variance of each axis equals its principal inertia. Standard
/// coordinates are the principal ones divided by the singular value. Treated
/// as immutable once produced by fit_ca (or loaded from an archive).
struct FactorModel {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    double grand_total = 0.0;

    Eigen::MatrixXd correspondence;  // P = N / n
    Eigen::VectorXd row_masses;      // r
    Eigen::VectorXd col_masses;      // c

    Eigen::VectorXd singular_values;     // descending, length K
    Eigen::VectorXd principal_inertias;  // sigma^2
    double total_inertia = 0.0;          // sum of principal inertias

    Eigen::MatrixXd row_coords;  // F, I x K
    Eigen::MatrixXd col_coords;  // G, J x K

    Eigen::MatrixXd row_contributions;  // I x K, columns sum to 1
    Eigen::MatrixXd col_contributions;  // J x K
    Eigen::MatrixXd row_cos2;           // I x K
    Eigen::MatrixXd col_cos2;           // J x K

    /// Lines removed by a lenient fit.
    std::vector<std::string> dropped_rows;
    std::vector<std::string> dropped_cols;

    Eigen::Index factors() const noexcept { return singular_values.size(); }

    const std::vector<std::string>& labels(PointKind kind) const {
        return kind == PointKind::row ? row_labels : col_labels;
    }
    const Eigen::MatrixXd& coords(PointKind kind) const {
        return kind == PointKind::row ? row_coords : col_coords;
    }
    const Eigen::VectorXd& masses(PointKind kind) const {
        return kind == PointKind::row ? row_masses : col_masses;
    }
    const Eigen::MatrixXd& contributions(PointKind kind) const {
        return kind == PointKind::row ? row_contributions : col_contributions;
    }

    /// Standard coordinates (principal / sigma) of one point set.
    Eigen::MatrixXd standard_coords(PointKind kind) const;

    /// Index of a principal point; throws InputError if unknown.
    Eigen::Index index_of(PointKind kind, const std::string& label) const;

    /// Exact (bitwise on values) equality, shapes included.
    friend bool operator==(const FactorModel&, const FactorModel&);
};

/// Correspondence analysis by SVD of the standardized residual matrix
/// D_r^{-1/2} (P - r c^T) D_c^{-1/2}.
///
/// Each factor is oriented so that its largest-magnitude row coordinate is
/// positive. A table with independent rows and columns yields K = 0.
FactorModel fit_ca(const ContingencyTable& table, const FitOptions& options = {});

struct SupplementaryProjection {
    PointKind kind = PointKind::row;
    std::vector<std::string> labels;
    Eigen::MatrixXd coords;  // points x K

    friend bool operator==(const SupplementaryProjection&, const SupplementaryProjection&);
};

/// Place extra points in the fitted space without altering it.
///
/// For `PointKind::row`, `profiles` is points x J (one row per point); for
/// `PointKind::column` it is I x points (one column per point). Each profile
/// is normalized to sum 1 and multiplied by the opposite set's standard
/// coordinates.
SupplementaryProjection project_supplementary(const FactorModel& model,
                                              std::vector<std::string> labels,
                                              const Eigen::MatrixXd& profiles, PointKind kind);

struct InertiaRow {
    int axis = 0;  // 1-based
    double inertia = 0.0;
    double percent = 0.0;
    double cumulative = 0.0;
};

std::vector<InertiaRow> inertia_report(const FactorModel& model);

struct Contributor {
    std::string label;
    double contribution = 0.0;
};

/// Plane contribution of every point of one set, for 1-based `axes`.
/// With several axes the per-axis contributions are averaged with weights
/// lambda_k, i.e. the share of the plane's inertia.
Eigen::VectorXd plane_contributions(const FactorModel& model, PointKind kind,
                                    std::span<const int> axes);

/// The `m` largest contributors, descending, ties broken by label.
std::vector<Contributor> top_contributors(const FactorModel& model, PointKind kind,
                                          std::span<const int> axes, std::size_t m);

/// Distance below which a point counts as "near the origin":
/// `fraction` times the RMS full-space distance of the principal points of `kind`.
double origin_threshold(const FactorModel& model, PointKind kind, double fraction = 0.1);

struct OriginProximity {
    std::string label;
    double distance = 0.0;
    bool near_origin = false;
};

std::vector<OriginProximity> origin_proximity(const FactorModel& model,
                                              const SupplementaryProjection& points,
                                              double fraction = 0.1);

}  // namespace gda
