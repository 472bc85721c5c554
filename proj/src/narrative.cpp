#include "gda/narrative.hpp"

#include "gda/error.hpp"

#include <algorithm>

namespace gda {

namespace {

std::vector<Eigen::Index> axis_indices(const FactorModel& model, const std::vector<int>& axes) {
    std::vector<Eigen::Index> out;
    if (axes.empty()) {
        for (Eigen::Index k = 0; k < model.factors(); ++k) out.push_back(k);
        return out;
    }
    for (int a : axes) {
        if (a < 1 || a > model.factors())
            throw InputError("axis " + std::to_string(a) + " out of range 1.." +
                             std::to_string(model.factors()));
        out.push_back(a - 1);
    }
    return out;
}

Eigen::RowVectorXd term_coords(const FactorModel& model, const std::string& term,
                               const std::vector<SupplementaryProjection>& supplementary) {
    const Eigen::Index j = find_label(model.col_labels, term);
    if (j >= 0) return model.col_coords.row(j);
    for (const auto& s : supplementary) {
        if (s.kind != PointKind::column) continue;
        const Eigen::Index p = find_label(s.labels, term);
        if (p >= 0) return s.coords.row(p);
    }
    throw InputError("unknown term '" + term + "'");
}

std::vector<double> moving_average(const std::vector<double>& x, std::size_t window) {
    if (window <= 1) return x;
    const std::size_t half = window / 2;
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(x.size() - 1, i + (window - 1 - half));
        double s = 0.0;
        for (std::size_t k = lo; k <= hi; ++k) s += x[k];
        out[i] = s / static_cast<double>(hi - lo + 1);
    }
    return out;
}

}  // namespace

Trajectory trajectory(const FactorModel& model, const std::string& term,
                      const std::vector<std::string>& segments, const TrajectoryOptions& options,
                      const std::vector<SupplementaryProjection>& supplementary) {
    const auto axes = axis_indices(model, options.axes);
    const Eigen::RowVectorXd t = term_coords(model, term, supplementary);

    Trajectory out;
    out.term = term;
    out.segments = segments.empty() ? model.row_labels : segments;
    out.distances.reserve(out.segments.size());
    for (const auto& seg : out.segments) {
        const Eigen::Index i = find_label(model.row_labels, seg);
        if (i < 0) throw InputError("unknown segment '" + seg + "'");
        double d2 = 0.0;
        for (Eigen::Index k : axes) {
            const double diff = model.row_coords(i, k) - t(k);
            d2 += diff * diff;
        }
        out.distances.push_back(std::sqrt(d2));
    }
    out.distances = moving_average(out.distances, options.smoothing);
    return out;
}

bool operator==(const ImpactRecord& a, const ImpactRecord& b) {
    return a.group == b.group && a.initiator == b.initiator && a.distance == b.distance &&
           a.inertia == b.inertia && a.initiator_in_group == b.initiator_in_group &&
           a.centroid.size() == b.centroid.size() && a.centroid == b.centroid;
}

std::vector<ImpactRecord> impact(const FactorModel& model, const std::vector<ImpactGroup>& groups) {
    std::vector<ImpactRecord> out;
    out.reserve(groups.size());
    const Eigen::Index K = model.factors();
    for (const auto& g : groups) {
        if (g.members.empty()) throw InputError("group '" + g.id + "' has no members");
        std::vector<Eigen::Index> idx;
        for (const auto& m : g.members) idx.push_back(model.index_of(PointKind::row, m));
        const Eigen::Index init = model.index_of(PointKind::row, g.initiator);

        ImpactRecord rec;
        rec.group = g.id;
        rec.initiator = g.initiator;
        rec.initiator_in_group = std::find(idx.begin(), idx.end(), init) != idx.end();

        double mass = 0.0;
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(K);
        for (Eigen::Index i : idx) {
            mass += model.row_masses(i);
            sum += model.row_masses(i) * model.row_coords.row(i).transpose();
        }
        rec.centroid = sum / mass;
        for (Eigen::Index i : idx)
            rec.inertia += model.row_masses(i) * (model.row_coords.row(i).transpose() - rec.centroid).squaredNorm();
        rec.distance = (model.row_coords.row(init).transpose() - rec.centroid).norm();
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<OriginProximity> origin_proximity(const FactorModel& model, PointKind kind,
                                              const std::vector<std::string>& labels,
                                              double fraction) {
    SupplementaryProjection pts;
    pts.kind = kind;
    pts.labels = labels.empty() ? model.labels(kind) : labels;
    pts.coords.resize(static_cast<Eigen::Index>(pts.labels.size()), model.factors());
    for (std::size_t p = 0; p < pts.labels.size(); ++p)
        pts.coords.row(static_cast<Eigen::Index>(p)) = model.coords(kind).row(model.index_of(kind, pts.labels[p]));
    return origin_proximity(model, pts, fraction);
}

}  // namespace gda
