#pragma once

#include "gda/ca.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace gda {

struct TrajectoryOptions {
    std::vector<int> axes;         // 1-based factor subset; empty uses all K
    std::size_t smoothing = 0;     // centred moving-average window; 0 or 1 is off
};

struct Trajectory {
    std::string term;
    std::vector<std::string> segments;
    std::vector<double> distances;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Distance from a column point to each segment (row point), both in
/// principal coordinates. `term` is looked up among principal columns first,
/// then in the column-kind `supplementary` projections. An empty `segments`
/// list means every row in model order.
Trajectory trajectory(const FactorModel& model, const std::string& term,
                      const std::vector<std::string>& segments, const TrajectoryOptions& options = {},
                      const std::vector<SupplementaryProjection>& supplementary = {});

struct ImpactGroup {
    std::string id;
    std::vector<std::string> members;  // row labels
    std::string initiator;             // row label
};

struct ImpactRecord {
    std::string group;
    std::string initiator;
    Eigen::VectorXd centroid;  // row-mass weighted, length K
    double distance = 0.0;     // initiator to centroid
    double inertia = 0.0;      // sum of m_i * |F_i - centroid|^2 over members
    bool initiator_in_group = false;

    friend bool operator==(const ImpactRecord&, const ImpactRecord&);
};

std::vector<ImpactRecord> impact(const FactorModel& model, const std::vector<ImpactGroup>& groups);

/// Full-space distance to the origin of principal points of one set; empty
/// `labels` means all of them.
std::vector<OriginProximity> origin_proximity(const FactorModel& model, PointKind kind,
                                              const std::vector<std::string>& labels,
                                              double fraction = 0.1);

}  // namespace gda
