#pragma once

#include "gda/ca.hpp"
#include "gda/hcluster.hpp"
#include "gda/narrative.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gda {

inline constexpr std::string_view kArchiveVersion = "gda/1";

struct Provenance {
    std::string input_kind;  // "table" or "categorical"
    std::vector<std::string> sources;
    std::string filter_log_digest;  // empty when no filter log was supplied
    std::vector<std::string> notes;

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct McaInfo {
    std::size_t questions = 0;
    std::vector<std::string> question_labels;  // principal
    std::optional<Eigen::VectorXd> corrected_eigenvalues;

    friend bool operator==(const McaInfo&, const McaInfo&);
};

struct StoredProjection {
    std::string name;
    SupplementaryProjection projection;

    friend bool operator==(const StoredProjection&, const StoredProjection&) = default;
};

struct StoredDendrogram {
    std::string name;
    PointKind entities = PointKind::row;
    int dimensions = 0;  // 0 = all factors
    Dendrogram dendrogram;

    friend bool operator==(const StoredDendrogram&, const StoredDendrogram&);
};

struct ModelArchive {
    std::string version{kArchiveVersion};
    Provenance provenance;
    FactorModel model;
    std::optional<McaInfo> mca;
    std::vector<StoredProjection> projections;
    std::vector<StoredDendrogram> dendrograms;
    std::vector<Trajectory> trajectories;
    std::vector<ImpactRecord> impacts;

    /// Replace an entry with the same name, or append.
    void put(StoredProjection p);
    void put(StoredDendrogram d);
    void put(Trajectory t);

    std::vector<SupplementaryProjection> projections_of(PointKind kind) const;

    friend bool operator==(const ModelArchive&, const ModelArchive&) = default;
};

std::string archive_to_json(const ModelArchive& archive);
/// Throws InputError on malformed documents or a version other than kArchiveVersion.
ModelArchive archive_from_json(std::string_view json);

void save_archive(const std::filesystem::path& path, const ModelArchive& archive);
ModelArchive load_archive(const std::filesystem::path& path);

}  // namespace gda
