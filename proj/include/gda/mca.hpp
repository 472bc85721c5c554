#pragma once

#include "gda/ca.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gda {

enum class VariableRole { principal, supplementary };

const char* to_string(VariableRole role);

struct Question {
    std::string label;
    std::vector<std::string> categories;
    VariableRole role = VariableRole::principal;
};

/// Response code for an unanswered question.
inline constexpr int kMissingResponse = -1;

/// Individuals x categorical questions. `responses[i][q]` indexes
/// `questions[q].categories`, or is kMissingResponse.
struct CategoricalDataset {
    std::vector<std::string> individual_ids;
    std::vector<Question> questions;
    std::vector<std::vector<int>> responses;

    /// Throws InputError naming the individual and question on any violation.
    void validate() const;

    std::size_t principal_count() const;

    /// Principal and supplementary questions exchanged.
    CategoricalDataset with_roles_swapped() const;
};

/// Label of a category column, "question=category".
std::string category_label(const Question& q, std::size_t category);

/// Complete disjunctive coding of the principal questions.
struct IndicatorMatrix {
    std::vector<std::string> individual_ids;
    std::vector<std::string> category_labels;
    std::vector<std::size_t> question_of_category;  // index into the dataset's questions
    std::size_t questions = 0;                      // Q, principal questions coded
    Eigen::MatrixXd z;                              // N x J, 0/1

    ContingencyTable as_table() const;
};

/// Zero/one coding of principal questions. Every row sums to Q. Missing
/// responses must have been resolved (see resolve_missing).
IndicatorMatrix build_indicator(const CategoricalDataset& ds);

/// B = Z^T Z, categories x categories.
ContingencyTable build_burt(const IndicatorMatrix& indicator);

enum class MissingPolicy {
    category,        // add an explicit "missing" category to affected questions
    drop_individual  // remove individuals with any missing answer
};

struct McaOptions {
    MissingPolicy missing = MissingPolicy::category;
    /// Categories observed fewer than this many times are fused into "other". 0 disables.
    std::size_t rare_threshold = 0;
    /// Also report Benzecri-corrected eigenvalues.
    bool benzecri = false;
};

CategoricalDataset resolve_missing(const CategoricalDataset& ds, MissingPolicy policy,
                                   std::vector<std::string>& notes);

CategoricalDataset fuse_rare_categories(const CategoricalDataset& ds, std::size_t threshold,
                                        std::vector<std::string>& notes);

/// Benzecri correction of indicator eigenvalues; eigenvalues at or below 1/Q are omitted.
Eigen::VectorXd benzecri_correction(const Eigen::VectorXd& eigenvalues, std::size_t questions);

struct McaResult {
    FactorModel model;             // individuals x observed principal categories
    CategoricalDataset prepared;   // dataset after missing/rare handling
    std::size_t questions = 0;     // Q
    SupplementaryProjection supplementary;  // categories of supplementary questions
    std::optional<Eigen::VectorXd> corrected_eigenvalues;
    std::vector<std::string> notes;  // provenance of every recoding
};

/// Multiple correspondence analysis: CA of the indicator matrix of the
/// principal questions. Categories never chosen are dropped (and noted)
/// before fitting; supplementary questions are projected as columns.
McaResult fit_mca(const CategoricalDataset& ds, const McaOptions& options = {});

struct SubcloudProfile {
    std::vector<std::string> ids;
    Eigen::MatrixXd coords;      // subset x K, rows of F
    Eigen::VectorXd mean;        // mass-weighted, length K
    Eigen::VectorXd dispersion;  // mass-weighted variance per axis
    double mass = 0.0;           // total row mass of the subset
};

/// Position of a subset of row points (a sub-cloud of individuals) in the
/// fitted space. This is a projection summary, not a class-specific analysis.
SubcloudProfile subcloud_profile(const FactorModel& model, std::span<const std::string> ids);

}  // namespace gda
