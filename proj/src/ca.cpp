#include "gda/ca.hpp"

#include "gda/error.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gda {

const char* to_string(PointKind kind) {
    return kind == PointKind::row ? "rows" : "cols";
}

PointKind point_kind_from_string(const std::string& s) {
    if (s == "rows" || s == "row") return PointKind::row;
    if (s == "cols" || s == "col" || s == "columns" || s == "column") return PointKind::column;
    throw InputError("unknown point set '" + s + "' (expected rows or cols)");
}

Eigen::MatrixXd FactorModel::standard_coords(PointKind kind) const {
    Eigen::MatrixXd out = coords(kind);
    for (Eigen::Index k = 0; k < factors(); ++k) out.col(k) /= singular_values(k);
    return out;
}

Eigen::Index FactorModel::index_of(PointKind kind, const std::string& label) const {
    const Eigen::Index idx = find_label(labels(kind), label);
    if (idx < 0)
        throw InputError(std::string("unknown ") + (kind == PointKind::row ? "row" : "column") +
                         " point '" + label + "'");
    return idx;
}

bool operator==(const FactorModel& a, const FactorModel& b) {
    return a.row_labels == b.row_labels && a.col_labels == b.col_labels &&
           a.grand_total == b.grand_total && same_values(a.correspondence, b.correspondence) &&
           same_values(a.row_masses, b.row_masses) && same_values(a.col_masses, b.col_masses) &&
           same_values(a.singular_values, b.singular_values) &&
           same_values(a.principal_inertias, b.principal_inertias) &&
           a.total_inertia == b.total_inertia && same_values(a.row_coords, b.row_coords) &&
           same_values(a.col_coords, b.col_coords) &&
           same_values(a.row_contributions, b.row_contributions) &&
           same_values(a.col_contributions, b.col_contributions) &&
           same_values(a.row_cos2, b.row_cos2) && same_values(a.col_cos2, b.col_cos2) &&
           a.dropped_rows == b.dropped_rows && a.dropped_cols == b.dropped_cols;
}

bool operator==(const SupplementaryProjection& a, const SupplementaryProjection& b) {
    return a.kind == b.kind && a.labels == b.labels && same_values(a.coords, b.coords);
}

namespace {

// Squared cosines: coordinate^2 over the squared full-space distance to the
// centroid. Points sitting at the centroid get zero everywhere.
Eigen::MatrixXd squared_cosines(const Eigen::MatrixXd& coords, const Eigen::VectorXd& dist2) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(coords.rows(), coords.cols());
    for (Eigen::Index i = 0; i < coords.rows(); ++i)
        if (dist2(i) > 0.0) out.row(i) = coords.row(i).array().square() / dist2(i);
    return out;
}

}  // namespace

FactorModel fit_ca(const ContingencyTable& input, const FitOptions& options) {
    auto zero_r = input.zero_rows();
    auto zero_c = input.zero_cols();
    if ((!zero_r.empty() || !zero_c.empty()) && options.strict)
        throw DegenerateTableError(zero_r, zero_c);

    const ContingencyTable table =
        (zero_r.empty() && zero_c.empty()) ? input : input.without(zero_r, zero_c);
    if (std::min(table.rows(), table.cols()) < 2)
        throw InputError("correspondence analysis needs at least 2 rows and 2 columns");

    FactorModel m;
    m.row_labels = table.row_labels();
    m.col_labels = table.col_labels();
    m.dropped_rows = std::move(zero_r);
    m.dropped_cols = std::move(zero_c);
    m.grand_total = table.grand_total();
    m.correspondence = table.counts() / m.grand_total;
    m.row_masses = m.correspondence.rowwise().sum();
    m.col_masses = m.correspondence.colwise().sum().transpose();

    const Eigen::VectorXd r_isqrt = m.row_masses.array().rsqrt();
    const Eigen::VectorXd c_isqrt = m.col_masses.array().rsqrt();
    const Eigen::MatrixXd residual =
        r_isqrt.asDiagonal() *
        (m.correspondence - m.row_masses * m.col_masses.transpose()) * c_isqrt.asDiagonal();

    Eigen::BDCSVD<Eigen::MatrixXd> svd(residual, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cutoff =
        options.rank_tolerance * std::max(sv.size() > 0 ? sv(0) : 0.0, 1.0);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;

    Eigen::MatrixXd u = svd.matrixU().leftCols(rank);
    Eigen::MatrixXd v = svd.matrixV().leftCols(rank);
    m.singular_values = sv.head(rank);
    m.principal_inertias = m.singular_values.array().square();
    m.total_inertia = m.principal_inertias.sum();

    m.row_coords = r_isqrt.asDiagonal() * u * m.singular_values.asDiagonal();
    m.col_coords = c_isqrt.asDiagonal() * v * m.singular_values.asDiagonal();

    // Orient each axis so its largest-magnitude row point is positive.
    for (Eigen::Index k = 0; k < rank; ++k) {
        Eigen::Index arg = 0;
        m.row_coords.col(k).cwiseAbs().maxCoeff(&arg);
        if (m.row_coords(arg, k) < 0.0) {
            m.row_coords.col(k) *= -1.0;
            m.col_coords.col(k) *= -1.0;
            u.col(k) *= -1.0;
            v.col(k) *= -1.0;
        }
    }

    // r_i F_ik^2 / lambda_k equals the squared left singular vector entry.
    m.row_contributions = u.array().square();
    m.col_contributions = v.array().square();

    const Eigen::VectorXd row_dist2 =
        residual.rowwise().squaredNorm().cwiseQuotient(m.row_masses);
    const Eigen::VectorXd col_dist2 =
        residual.colwise().squaredNorm().transpose().cwiseQuotient(m.col_masses);
    m.row_cos2 = squared_cosines(m.row_coords, row_dist2);
    m.col_cos2 = squared_cosines(m.col_coords, col_dist2);
    return m;
}

SupplementaryProjection project_supplementary(const FactorModel& model,
                                              std::vector<std::string> labels,
                                              const Eigen::MatrixXd& profiles, PointKind kind) {
    const PointKind opposite = kind == PointKind::row ? PointKind::column : PointKind::row;
    const Eigen::MatrixXd as_rows = kind == PointKind::row ? profiles : profiles.transpose();
    const auto width = static_cast<Eigen::Index>(model.labels(opposite).size());
    if (as_rows.cols() != width)
        throw InputError("supplementary profiles have length " + std::to_string(as_rows.cols()) +
                         ", model expects " + std::to_string(width));
    if (static_cast<Eigen::Index>(labels.size()) != as_rows.rows())
        throw InputError("supplementary label count does not match profile count");

    const Eigen::MatrixXd standard = model.standard_coords(opposite);
    SupplementaryProjection out;
    out.kind = kind;
    out.coords.resize(as_rows.rows(), model.factors());
    for (Eigen::Index p = 0; p < as_rows.rows(); ++p) {
        if ((as_rows.row(p).array() < 0.0).any() || !as_rows.row(p).allFinite())
            throw InputError("supplementary profile '" + labels[p] + "' has negative cells");
        const double total = as_rows.row(p).sum();
        if (!(total > 0.0))
            throw InputError("supplementary profile '" + labels[p] + "' has zero total");
        out.coords.row(p) = (as_rows.row(p) / total) * standard;
    }
    out.labels = std::move(labels);
    return out;
}

std::vector<InertiaRow> inertia_report(const FactorModel& model) {
    std::vector<InertiaRow> out;
    double cumulative = 0.0;
    for (Eigen::Index k = 0; k < model.factors(); ++k) {
        const double lambda = model.principal_inertias(k);
        const double pct = 100.0 * lambda / model.total_inertia;
        cumulative += pct;
        out.push_back({static_cast<int>(k + 1), lambda, pct, cumulative});
    }
    return out;
}

Eigen::VectorXd plane_contributions(const FactorModel& model, PointKind kind,
                                    std::span<const int> axes) {
    if (axes.empty()) throw InputError("no axes given");
    const Eigen::MatrixXd& ctr = model.contributions(kind);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(ctr.rows());
    double weight = 0.0;
    for (const int axis : axes) {
        if (axis < 1 || axis > model.factors())
            throw InputError("axis " + std::to_string(axis) + " does not exist (model has " +
                             std::to_string(model.factors()) + " factors)");
        const double lambda = model.principal_inertias(axis - 1);
        acc += lambda * ctr.col(axis - 1);
        weight += lambda;
    }
    return acc / weight;
}

std::vector<Contributor> top_contributors(const FactorModel& model, PointKind kind,
                                          std::span<const int> axes, std::size_t m) {
    const Eigen::VectorXd ctr = plane_contributions(model, kind, axes);
    const auto& labels = model.labels(kind);
    std::vector<Contributor> all;
    all.reserve(labels.size());
    for (size_t i = 0; i < labels.size(); ++i) all.push_back({labels[i], ctr(i)});
    std::sort(all.begin(), all.end(), [](const Contributor& a, const Contributor& b) {
        if (a.contribution != b.contribution) return a.contribution > b.contribution;
        return a.label < b.label;
    });
    if (m < all.size()) all.resize(m);
    return all;
}

double origin_threshold(const FactorModel& model, PointKind kind, double fraction) {
    const Eigen::MatrixXd& coords = model.coords(kind);
    if (coords.rows() == 0) return 0.0;
    const double mean_sq = coords.rowwise().squaredNorm().mean();
    return fraction * std::sqrt(mean_sq);
}

std::vector<OriginProximity> origin_proximity(const FactorModel& model,
                                              const SupplementaryProjection& points,
                                              double fraction) {
    const double threshold = origin_threshold(model, points.kind, fraction);
    std::vector<OriginProximity> out;
    out.reserve(points.labels.size());
    for (size_t p = 0; p < points.labels.size(); ++p) {
        const double d = points.coords.row(static_cast<Eigen::Index>(p)).norm();
        out.push_back({points.labels[p], d, d < threshold || d == 0.0});
    }
    return out;
}

}  // namespace gda
