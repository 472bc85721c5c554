#pragma once

#include "gda/ca.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace gda {

/// Weighted points in factor space.
struct PointCloud {
    std::vector<std::string> labels;
    Eigen::MatrixXd coords;  // points x dimensions
    Eigen::VectorXd masses;  // empty means uniform
    /// Sequence order: order[s] is the point at position s.
    std::optional<std::vector<std::size_t>> order;

    std::size_t size() const noexcept { return labels.size(); }
    Eigen::VectorXd effective_masses() const;
    void validate() const;
};

/// Points of one set of a fitted model, weighted by their masses, in table
/// order. `dimensions` <= 0 keeps every factor.
PointCloud cloud_from_model(const FactorModel& model, PointKind kind, int dimensions = 0);

/// One agglomeration. Node ids: leaves are 0..P-1 (point indices), the
/// cluster created by merge m has id P + m.
struct Merge {
    std::size_t left = 0;
    std::size_t right = 0;
    double height = 0.0;      // monotonized (running maximum)
    double raw_height = 0.0;  // Ward criterion increase as computed
    std::size_t size = 0;
};

struct Dendrogram {
    std::vector<std::string> leaf_labels;
    std::vector<Merge> merges;
    bool constrained = false;

    std::size_t leaves() const noexcept { return leaf_labels.size(); }
    /// Leaves in left-to-right display order.
    std::vector<std::size_t> leaf_order() const;
    /// Structural checks: P-1 merges, each node used once, sizes consistent.
    void validate() const;
};

/// Ward minimum-variance agglomeration. Merge cost between clusters A and B
/// is m_A m_B / (m_A + m_B) * |g_A - g_B|^2, updated by the Lance-Williams
/// recurrence. Ties go to the lexicographically smallest label pair, a
/// cluster being named by its smallest leaf label.
Dendrogram ward_cluster(const PointCloud& cloud);

/// Ward agglomeration restricted to clusters adjacent in the sequence order.
/// Leaf order of the result is the sequence order.
Dendrogram constrained_cluster(const PointCloud& cloud);

/// Full matrix of lowest-common-merge heights (monotonized), leaf-indexed.
Eigen::MatrixXd ultrametric(const Dendrogram& dend);

double ultrametric_distance(const Dendrogram& dend, const std::string& a, const std::string& b);

struct ChangePoint {
    std::size_t position = 0;  // segments before the boundary
    std::string before;
    std::string after;
    double height = 0.0;
    double raw_height = 0.0;
};

/// Boundaries of a sequence-constrained dendrogram, ranked by the height at
/// which their two sides merge (descending; then raw height; then position).
std::vector<ChangePoint> change_points(const Dendrogram& dend, std::size_t top_m);

}  // namespace gda
