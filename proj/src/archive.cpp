#include "gda/archive.hpp"

#include "gda/error.hpp"
#include "gda/io.hpp"

#include <json.hpp>

#include <algorithm>

namespace gda {

using nlohmann::json;

namespace {

json matrix_json(const Eigen::MatrixXd& m) {
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from(const json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const json& data = j.at("data");
    if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols))
        throw InputError("archive: matrix shape does not match its data");
    Eigen::MatrixXd m(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[k++].get<double>();
    return m;
}

json vector_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Eigen::VectorXd vector_from(const json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    return v;
}

using Strings = std::vector<std::string>;

json model_json(const FactorModel& m) {
    return {{"row_labels", m.row_labels},
            {"col_labels", m.col_labels},
            {"grand_total", m.grand_total},
            {"correspondence", matrix_json(m.correspondence)},
            {"row_masses", vector_json(m.row_masses)},
            {"col_masses", vector_json(m.col_masses)},
            {"singular_values", vector_json(m.singular_values)},
            {"principal_inertias", vector_json(m.principal_inertias)},
            {"total_inertia", m.total_inertia},
            {"row_coords", matrix_json(m.row_coords)},
            {"col_coords", matrix_json(m.col_coords)},
            {"row_contributions", matrix_json(m.row_contributions)},
            {"col_contributions", matrix_json(m.col_contributions)},
            {"row_cos2", matrix_json(m.row_cos2)},
            {"col_cos2", matrix_json(m.col_cos2)},
            {"dropped_rows", m.dropped_rows},
            {"dropped_cols", m.dropped_cols}};
}

FactorModel model_from(const json& j) {
    FactorModel m;
    m.row_labels = j.at("row_labels").get<Strings>();
    m.col_labels = j.at("col_labels").get<Strings>();
    m.grand_total = j.at("grand_total").get<double>();
    m.correspondence = matrix_from(j.at("correspondence"));
    m.row_masses = vector_from(j.at("row_masses"));
    m.col_masses = vector_from(j.at("col_masses"));
    m.singular_values = vector_from(j.at("singular_values"));
    m.principal_inertias = vector_from(j.at("principal_inertias"));
    m.total_inertia = j.at("total_inertia").get<double>();
    m.row_coords = matrix_from(j.at("row_coords"));
    m.col_coords = matrix_from(j.at("col_coords"));
    m.row_contributions = matrix_from(j.at("row_contributions"));
    m.col_contributions = matrix_from(j.at("col_contributions"));
    m.row_cos2 = matrix_from(j.at("row_cos2"));
    m.col_cos2 = matrix_from(j.at("col_cos2"));
    m.dropped_rows = j.at("dropped_rows").get<Strings>();
    m.dropped_cols = j.at("dropped_cols").get<Strings>();

    const auto I = static_cast<Eigen::Index>(m.row_labels.size());
    const auto J = static_cast<Eigen::Index>(m.col_labels.size());
    const Eigen::Index K = m.singular_values.size();
    const bool ok = m.row_masses.size() == I && m.col_masses.size() == J && m.correspondence.rows() == I &&
                    m.correspondence.cols() == J && m.principal_inertias.size() == K &&
                    m.row_coords.rows() == I && m.row_coords.cols() == K && m.col_coords.rows() == J &&
                    m.col_coords.cols() == K && m.row_contributions.rows() == I &&
                    m.row_contributions.cols() == K && m.col_contributions.rows() == J &&
                    m.col_contributions.cols() == K && m.row_cos2.rows() == I && m.row_cos2.cols() == K &&
                    m.col_cos2.rows() == J && m.col_cos2.cols() == K;
    if (!ok) throw InputError("archive: model arrays have inconsistent shapes");
    return m;
}

json projection_json(const StoredProjection& p) {
    return {{"name", p.name},
            {"kind", to_string(p.projection.kind)},
            {"labels", p.projection.labels},
            {"coords", matrix_json(p.projection.coords)}};
}

StoredProjection projection_from(const json& j) {
    StoredProjection p;
    p.name = j.at("name").get<std::string>();
    p.projection.kind = point_kind_from_string(j.at("kind").get<std::string>());
    p.projection.labels = j.at("labels").get<Strings>();
    p.projection.coords = matrix_from(j.at("coords"));
    return p;
}

json dendrogram_json(const StoredDendrogram& d) {
    json merges = json::array();
    for (const auto& m : d.dendrogram.merges)
        merges.push_back({{"left", m.left}, {"right", m.right}, {"height", m.height},
                          {"raw_height", m.raw_height}, {"size", m.size}});
    return {{"name", d.name},
            {"entities", to_string(d.entities)},
            {"dimensions", d.dimensions},
            {"constrained", d.dendrogram.constrained},
            {"leaf_labels", d.dendrogram.leaf_labels},
            {"merges", std::move(merges)}};
}

StoredDendrogram dendrogram_from(const json& j) {
    StoredDendrogram d;
    d.name = j.at("name").get<std::string>();
    d.entities = point_kind_from_string(j.at("entities").get<std::string>());
    d.dimensions = j.at("dimensions").get<int>();
    d.dendrogram.constrained = j.at("constrained").get<bool>();
    d.dendrogram.leaf_labels = j.at("leaf_labels").get<Strings>();
    for (const auto& m : j.at("merges"))
        d.dendrogram.merges.push_back({m.at("left").get<std::size_t>(), m.at("right").get<std::size_t>(),
                                       m.at("height").get<double>(), m.at("raw_height").get<double>(),
                                       m.at("size").get<std::size_t>()});
    d.dendrogram.validate();
    return d;
}

}  // namespace

bool operator==(const McaInfo& a, const McaInfo& b) {
    if (a.questions != b.questions || a.question_labels != b.question_labels) return false;
    if (a.corrected_eigenvalues.has_value() != b.corrected_eigenvalues.has_value()) return false;
    return !a.corrected_eigenvalues || (a.corrected_eigenvalues->size() == b.corrected_eigenvalues->size() &&
                                        *a.corrected_eigenvalues == *b.corrected_eigenvalues);
}

bool operator==(const StoredDendrogram& a, const StoredDendrogram& b) {
    if (a.name != b.name || a.entities != b.entities || a.dimensions != b.dimensions ||
        a.dendrogram.leaf_labels != b.dendrogram.leaf_labels ||
        a.dendrogram.constrained != b.dendrogram.constrained ||
        a.dendrogram.merges.size() != b.dendrogram.merges.size())
        return false;
    for (std::size_t m = 0; m < a.dendrogram.merges.size(); ++m) {
        const Merge &x = a.dendrogram.merges[m], &y = b.dendrogram.merges[m];
        if (x.left != y.left || x.right != y.right || x.height != y.height || x.raw_height != y.raw_height ||
            x.size != y.size)
            return false;
    }
    return true;
}

namespace {

template <class T>
void put_named(std::vector<T>& items, T item, std::string T::*key) {
    const auto it = std::find_if(items.begin(), items.end(), [&](const T& x) { return x.*key == item.*key; });
    if (it == items.end())
        items.push_back(std::move(item));
    else
        *it = std::move(item);
}

}  // namespace

void ModelArchive::put(StoredProjection p) { put_named(projections, std::move(p), &StoredProjection::name); }
void ModelArchive::put(StoredDendrogram d) { put_named(dendrograms, std::move(d), &StoredDendrogram::name); }
void ModelArchive::put(Trajectory t) { put_named(trajectories, std::move(t), &Trajectory::term); }

std::vector<SupplementaryProjection> ModelArchive::projections_of(PointKind kind) const {
    std::vector<SupplementaryProjection> out;
    for (const auto& p : projections)
        if (p.projection.kind == kind) out.push_back(p.projection);
    return out;
}

std::string archive_to_json(const ModelArchive& a) {
    json doc;
    doc["version"] = a.version;
    doc["provenance"] = {{"input_kind", a.provenance.input_kind},
                         {"sources", a.provenance.sources},
                         {"filter_log_digest", a.provenance.filter_log_digest},
                         {"notes", a.provenance.notes}};
    doc["model"] = model_json(a.model);
    if (a.mca) {
        json mca = {{"questions", a.mca->questions}, {"question_labels", a.mca->question_labels}};
        if (a.mca->corrected_eigenvalues) mca["corrected_eigenvalues"] = vector_json(*a.mca->corrected_eigenvalues);
        doc["mca"] = std::move(mca);
    }
    doc["projections"] = json::array();
    for (const auto& p : a.projections) doc["projections"].push_back(projection_json(p));
    doc["dendrograms"] = json::array();
    for (const auto& d : a.dendrograms) doc["dendrograms"].push_back(dendrogram_json(d));
    doc["trajectories"] = json::array();
    for (const auto& t : a.trajectories)
        doc["trajectories"].push_back({{"term", t.term}, {"segments", t.segments}, {"distances", t.distances}});
    doc["impacts"] = json::array();
    for (const auto& r : a.impacts)
        doc["impacts"].push_back({{"group", r.group},
                                  {"initiator", r.initiator},
                                  {"centroid", vector_json(r.centroid)},
                                  {"distance", r.distance},
                                  {"inertia", r.inertia},
                                  {"initiator_in_group", r.initiator_in_group}});
    return doc.dump(1) + "\n";
}

ModelArchive archive_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("archive is not valid JSON: ") + e.what());
    }
    try {
        ModelArchive a;
        if (!doc.is_object() || !doc.contains("version")) throw InputError("archive has no version field");
        a.version = doc.at("version").get<std::string>();
        if (a.version != kArchiveVersion)
            throw InputError("unsupported archive version '" + a.version + "' (expected " +
                             std::string(kArchiveVersion) + ")");
        const json& prov = doc.at("provenance");
        a.provenance.input_kind = prov.at("input_kind").get<std::string>();
        a.provenance.sources = prov.at("sources").get<Strings>();
        a.provenance.filter_log_digest = prov.at("filter_log_digest").get<std::string>();
        a.provenance.notes = prov.at("notes").get<Strings>();
        a.model = model_from(doc.at("model"));
        if (doc.contains("mca")) {
            const json& m = doc["mca"];
            McaInfo info;
            info.questions = m.at("questions").get<std::size_t>();
            info.question_labels = m.at("question_labels").get<Strings>();
            if (m.contains("corrected_eigenvalues")) info.corrected_eigenvalues = vector_from(m["corrected_eigenvalues"]);
            a.mca = std::move(info);
        }
        for (const auto& p : doc.at("projections")) a.projections.push_back(projection_from(p));
        for (const auto& d : doc.at("dendrograms")) a.dendrograms.push_back(dendrogram_from(d));
        for (const auto& t : doc.at("trajectories")) {
            Trajectory tr{t.at("term").get<std::string>(), t.at("segments").get<Strings>(),
                          t.at("distances").get<std::vector<double>>()};
            if (tr.segments.size() != tr.distances.size())
                throw InputError("archive: trajectory '" + tr.term + "' has mismatched lengths");
            a.trajectories.push_back(std::move(tr));
        }
        for (const auto& r : doc.at("impacts")) {
            ImpactRecord rec;
            rec.group = r.at("group").get<std::string>();
            rec.initiator = r.at("initiator").get<std::string>();
            rec.centroid = vector_from(r.at("centroid"));
            rec.distance = r.at("distance").get<double>();
            rec.inertia = r.at("inertia").get<double>();
            rec.initiator_in_group = r.at("initiator_in_group").get<bool>();
            a.impacts.push_back(std::move(rec));
        }
        return a;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed archive: ") + e.what());
    }
}

void save_archive(const std::filesystem::path& path, const ModelArchive& archive) {
    write_file_atomic(path, archive_to_json(archive));
}

ModelArchive load_archive(const std::filesystem::path& path) {
    return archive_from_json(read_file(path));
}

}  // namespace gda
