#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace gda {

/// Labelled nonnegative count matrix, the common input of every analysis.
///
/// Construction validates shape, label uniqueness, finiteness and sign of
/// every cell, and a positive grand total. Empty rows or columns are allowed
/// here; they are dealt with at fit time.
class ContingencyTable {
public:
    ContingencyTable(std::vector<std::string> row_labels, std::vector<std::string> col_labels,
                     Eigen::MatrixXd counts);

    const std::vector<std::string>& row_labels() const noexcept { return row_labels_; }
    const std::vector<std::string>& col_labels() const noexcept { return col_labels_; }
    const Eigen::MatrixXd& counts() const noexcept { return counts_; }

    Eigen::Index rows() const noexcept { return counts_.rows(); }
    Eigen::Index cols() const noexcept { return counts_.cols(); }
    double grand_total() const noexcept { return total_; }

    std::vector<std::string> zero_rows() const;
    std::vector<std::string> zero_cols() const;

    /// Copy without the named rows/columns. Unknown labels are ignored.
    ContingencyTable without(const std::vector<std::string>& rows,
                             const std::vector<std::string>& cols) const;

    ContingencyTable transposed() const;

    friend bool operator==(const ContingencyTable&, const ContingencyTable&);

private:
    std::vector<std::string> row_labels_;
    std::vector<std::string> col_labels_;
    Eigen::MatrixXd counts_;
    double total_ = 0.0;
};

/// Same shape and identical values.
bool same_values(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Index of `label` in `labels`, or -1.
Eigen::Index find_label(const std::vector<std::string>& labels, const std::string& label);

}  // namespace gda
