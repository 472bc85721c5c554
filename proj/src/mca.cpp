#include "gda/mca.hpp"

#include "gda/error.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

namespace gda {

const char* to_string(VariableRole role) {
    return role == VariableRole::principal ? "principal" : "supplementary";
}

void CategoricalDataset::validate() const {
    std::unordered_set<std::string> ids;
    for (const auto& id : individual_ids)
        if (!ids.insert(id).second) throw InputError("duplicate individual id '" + id + "'");
    std::unordered_set<std::string> qlabels;
    for (const auto& q : questions) {
        if (!qlabels.insert(q.label).second)
            throw InputError("duplicate question label '" + q.label + "'");
        std::unordered_set<std::string> cats(q.categories.begin(), q.categories.end());
        if (cats.size() != q.categories.size())
            throw InputError("question '" + q.label + "' declares a category twice");
    }
    if (principal_count() == 0) throw InputError("dataset has no principal question");
    if (responses.size() != individual_ids.size())
        throw InputError("response rows do not match individual count");
    for (size_t i = 0; i < responses.size(); ++i) {
        if (responses[i].size() != questions.size())
            throw InputError("individual '" + individual_ids[i] + "' has " +
                             std::to_string(responses[i].size()) + " responses, expected " +
                             std::to_string(questions.size()));
        for (size_t q = 0; q < questions.size(); ++q) {
            const int v = responses[i][q];
            if (v == kMissingResponse) continue;
            if (v < 0 || static_cast<size_t>(v) >= questions[q].categories.size())
                throw InputError("individual '" + individual_ids[i] + "', question '" +
                                 questions[q].label + "': response " + std::to_string(v) +
                                 " is not a declared category");
        }
    }
}

std::size_t CategoricalDataset::principal_count() const {
    return static_cast<std::size_t>(std::count_if(questions.begin(), questions.end(), [](const Question& q) {
        return q.role == VariableRole::principal;
    }));
}

CategoricalDataset CategoricalDataset::with_roles_swapped() const {
    CategoricalDataset out = *this;
    for (auto& q : out.questions)
        q.role = q.role == VariableRole::principal ? VariableRole::supplementary
                                                   : VariableRole::principal;
    return out;
}

std::string category_label(const Question& q, std::size_t category) {
    return q.label + "=" + q.categories.at(category);
}

ContingencyTable IndicatorMatrix::as_table() const {
    return ContingencyTable(individual_ids, category_labels, z);
}

namespace {

// Indicator columns for the questions accepted by `select`.
template <typename Select>
IndicatorMatrix code_questions(const CategoricalDataset& ds, Select select) {
    IndicatorMatrix out;
    out.individual_ids = ds.individual_ids;
    std::vector<size_t> offset(ds.questions.size(), 0);
    for (size_t q = 0; q < ds.questions.size(); ++q) {
        if (!select(ds.questions[q])) continue;
        offset[q] = out.category_labels.size();
        ++out.questions;
        for (size_t c = 0; c < ds.questions[q].categories.size(); ++c) {
            out.category_labels.push_back(category_label(ds.questions[q], c));
            out.question_of_category.push_back(q);
        }
    }
    out.z = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ds.individual_ids.size()),
                                  static_cast<Eigen::Index>(out.category_labels.size()));
    for (size_t i = 0; i < ds.responses.size(); ++i)
        for (size_t q = 0; q < ds.questions.size(); ++q) {
            if (!select(ds.questions[q])) continue;
            const int v = ds.responses[i][q];
            if (v == kMissingResponse)
                throw InputError("individual '" + ds.individual_ids[i] + "', question '" +
                                 ds.questions[q].label + "': missing response not resolved");
            out.z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(offset[q] + v)) = 1.0;
        }
    return out;
}

}  // namespace

IndicatorMatrix build_indicator(const CategoricalDataset& ds) {
    ds.validate();
    return code_questions(ds, [](const Question& q) { return q.role == VariableRole::principal; });
}

ContingencyTable build_burt(const IndicatorMatrix& indicator) {
    return ContingencyTable(indicator.category_labels, indicator.category_labels,
                            indicator.z.transpose() * indicator.z);
}

CategoricalDataset resolve_missing(const CategoricalDataset& ds, MissingPolicy policy,
                                   std::vector<std::string>& notes) {
    CategoricalDataset out = ds;
    if (policy == MissingPolicy::drop_individual) {
        out.individual_ids.clear();
        out.responses.clear();
        for (size_t i = 0; i < ds.responses.size(); ++i) {
            const auto& row = ds.responses[i];
            if (std::find(row.begin(), row.end(), kMissingResponse) != row.end()) {
                notes.push_back("dropped individual '" + ds.individual_ids[i] +
                                "': missing response");
                continue;
            }
            out.individual_ids.push_back(ds.individual_ids[i]);
            out.responses.push_back(row);
        }
        if (out.individual_ids.empty())
            throw InputError("every individual has a missing response");
        return out;
    }
    for (size_t q = 0; q < out.questions.size(); ++q) {
        int missing_code = -1;
        for (auto& row : out.responses) {
            if (row[q] != kMissingResponse) continue;
            if (missing_code < 0) {
                auto& cats = out.questions[q].categories;
                const auto it = std::find(cats.begin(), cats.end(), "missing");
                if (it == cats.end()) {
                    cats.push_back("missing");
                    missing_code = static_cast<int>(cats.size() - 1);
                } else {
                    missing_code = static_cast<int>(it - cats.begin());
                }
                notes.push_back("question '" + out.questions[q].label +
                                "': missing responses coded as category 'missing'");
            }
            row[q] = missing_code;
        }
    }
    return out;
}

CategoricalDataset fuse_rare_categories(const CategoricalDataset& ds, std::size_t threshold,
                                        std::vector<std::string>& notes) {
    if (threshold == 0) return ds;
    CategoricalDataset out = ds;
    for (size_t q = 0; q < out.questions.size(); ++q) {
        const auto& old_cats = ds.questions[q].categories;
        std::vector<size_t> freq(old_cats.size(), 0);
        for (const auto& row : ds.responses)
            if (row[q] != kMissingResponse) ++freq[static_cast<size_t>(row[q])];

        std::vector<std::string> fused;
        for (size_t c = 0; c < old_cats.size(); ++c)
            if (freq[c] > 0 && freq[c] < threshold) fused.push_back(old_cats[c]);
        if (fused.empty()) continue;

        std::vector<std::string> cats;
        std::vector<int> remap(old_cats.size(), -1);
        for (size_t c = 0; c < old_cats.size(); ++c) {
            if (freq[c] > 0 && freq[c] < threshold) continue;
            if (old_cats[c] == "other") continue;
            remap[c] = static_cast<int>(cats.size());
            cats.push_back(old_cats[c]);
        }
        const int other = static_cast<int>(cats.size());
        cats.push_back("other");
        for (size_t c = 0; c < old_cats.size(); ++c)
            if (remap[c] < 0) remap[c] = other;
        for (auto& row : out.responses)
            if (row[q] != kMissingResponse) row[q] = remap[static_cast<size_t>(row[q])];
        out.questions[q].categories = std::move(cats);

        std::string list;
        for (const auto& f : fused) list += (list.empty() ? "" : ", ") + f;
        notes.push_back("question '" + out.questions[q].label + "': fused rare categories [" + list +
                        "] into 'other' (threshold " + std::to_string(threshold) + ")");
    }
    return out;
}

Eigen::VectorXd benzecri_correction(const Eigen::VectorXd& eigenvalues, std::size_t questions) {
    const double qd = static_cast<double>(questions);
    std::vector<double> kept;
    if (questions < 2) return Eigen::VectorXd();
    for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
        const double excess = eigenvalues(k) - 1.0 / qd;
        if (excess <= 0.0) break;
        const double scaled = qd / (qd - 1.0) * excess;
        kept.push_back(scaled * scaled);
    }
    return Eigen::Map<Eigen::VectorXd>(kept.data(), static_cast<Eigen::Index>(kept.size()));
}

McaResult fit_mca(const CategoricalDataset& ds, const McaOptions& options) {
    ds.validate();
    McaResult out;
    CategoricalDataset prepared = resolve_missing(ds, options.missing, out.notes);
    prepared = fuse_rare_categories(prepared, options.rare_threshold, out.notes);

    for (const auto& q : prepared.questions)
        if (q.role == VariableRole::principal && q.categories.size() < 2)
            throw InputError("question '" + q.label +
                             "' has a single category and cannot enter the analysis");

    const IndicatorMatrix full = build_indicator(prepared);
    out.questions = full.questions;

    const ContingencyTable z = full.as_table();
    const auto unused = z.zero_cols();
    for (const auto& label : unused) out.notes.push_back("category '" + label + "' never chosen, dropped");
    out.model = fit_ca(unused.empty() ? z : z.without({}, unused));

    const IndicatorMatrix supp = code_questions(
        prepared, [](const Question& q) { return q.role == VariableRole::supplementary; });
    std::vector<std::string> labels;
    std::vector<Eigen::Index> observed;
    for (Eigen::Index j = 0; j < supp.z.cols(); ++j) {
        if (supp.z.col(j).sum() <= 0.0) continue;
        observed.push_back(j);
        labels.push_back(supp.category_labels[static_cast<size_t>(j)]);
    }
    Eigen::MatrixXd profiles(supp.z.rows(), static_cast<Eigen::Index>(observed.size()));
    for (size_t a = 0; a < observed.size(); ++a)
        profiles.col(static_cast<Eigen::Index>(a)) = supp.z.col(observed[a]);
    out.supplementary = project_supplementary(out.model, std::move(labels), profiles, PointKind::column);

    if (options.benzecri)
        out.corrected_eigenvalues = benzecri_correction(out.model.principal_inertias, out.questions);
    out.prepared = std::move(prepared);
    return out;
}

SubcloudProfile subcloud_profile(const FactorModel& model, std::span<const std::string> ids) {
    if (ids.empty()) throw InputError("sub-cloud is empty");
    SubcloudProfile out;
    const Eigen::Index k = model.factors();
    out.coords.resize(static_cast<Eigen::Index>(ids.size()), k);
    Eigen::VectorXd weights(static_cast<Eigen::Index>(ids.size()));
    for (size_t a = 0; a < ids.size(); ++a) {
        const Eigen::Index i = model.index_of(PointKind::row, ids[a]);
        out.coords.row(static_cast<Eigen::Index>(a)) = model.row_coords.row(i);
        weights(static_cast<Eigen::Index>(a)) = model.row_masses(i);
        out.ids.push_back(ids[a]);
    }
    out.mass = weights.sum();
    out.mean = (weights.transpose() * out.coords).transpose() / out.mass;
    const Eigen::MatrixXd centred = out.coords.rowwise() - out.mean.transpose();
    out.dispersion = (weights.transpose() * centred.array().square().matrix()).transpose() / out.mass;
    return out;
}

}  // namespace gda
