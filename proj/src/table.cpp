#include "gda/table.hpp"

#include "gda/error.hpp"

#include <cmath>
#include <unordered_set>

namespace gda {

namespace {

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += ", ";
        out += s;
    }
    return out;
}

void require_unique(const std::vector<std::string>& labels, const char* axis) {
    std::unordered_set<std::string> seen;
    for (const auto& l : labels) {
        if (!seen.insert(l).second)
            throw InputError(std::string("duplicate ") + axis + " label '" + l + "'");
    }
}

}  // namespace

DegenerateTableError::DegenerateTableError(std::vector<std::string> zero_rows,
                                           std::vector<std::string> zero_cols)
    : DegenerateError("table has empty lines (rows: [" + join(zero_rows) + "], columns: [" +
                      join(zero_cols) + "])"),
      zero_rows_(std::move(zero_rows)),
      zero_cols_(std::move(zero_cols)) {}

ContingencyTable::ContingencyTable(std::vector<std::string> row_labels,
                                   std::vector<std::string> col_labels, Eigen::MatrixXd counts)
    : row_labels_(std::move(row_labels)),
      col_labels_(std::move(col_labels)),
      counts_(std::move(counts)) {
    if (static_cast<Eigen::Index>(row_labels_.size()) != counts_.rows() ||
        static_cast<Eigen::Index>(col_labels_.size()) != counts_.cols())
        throw InputError("label count does not match matrix shape");
    require_unique(row_labels_, "row");
    require_unique(col_labels_, "column");
    for (Eigen::Index i = 0; i < counts_.rows(); ++i) {
        for (Eigen::Index j = 0; j < counts_.cols(); ++j) {
            const double v = counts_(i, j);
            if (!std::isfinite(v) || v < 0.0)
                throw InputError("cell (" + row_labels_[i] + ", " + col_labels_[j] +
                                 ") is negative or not finite");
        }
    }
    total_ = counts_.sum();
    if (!(total_ > 0.0)) throw InputError("table grand total must be positive");
}

std::vector<std::string> ContingencyTable::zero_rows() const {
    std::vector<std::string> out;
    for (Eigen::Index i = 0; i < rows(); ++i)
        if (counts_.row(i).sum() <= 0.0) out.push_back(row_labels_[i]);
    return out;
}

std::vector<std::string> ContingencyTable::zero_cols() const {
    std::vector<std::string> out;
    for (Eigen::Index j = 0; j < cols(); ++j)
        if (counts_.col(j).sum() <= 0.0) out.push_back(col_labels_[j]);
    return out;
}

ContingencyTable ContingencyTable::without(const std::vector<std::string>& rows,
                                           const std::vector<std::string>& cols) const {
    const std::unordered_set<std::string> drop_r(rows.begin(), rows.end());
    const std::unordered_set<std::string> drop_c(cols.begin(), cols.end());
    std::vector<Eigen::Index> keep_r, keep_c;
    std::vector<std::string> lr, lc;
    for (Eigen::Index i = 0; i < this->rows(); ++i)
        if (!drop_r.count(row_labels_[i])) {
            keep_r.push_back(i);
            lr.push_back(row_labels_[i]);
        }
    for (Eigen::Index j = 0; j < this->cols(); ++j)
        if (!drop_c.count(col_labels_[j])) {
            keep_c.push_back(j);
            lc.push_back(col_labels_[j]);
        }
    Eigen::MatrixXd m(keep_r.size(), keep_c.size());
    for (size_t a = 0; a < keep_r.size(); ++a)
        for (size_t b = 0; b < keep_c.size(); ++b) m(a, b) = counts_(keep_r[a], keep_c[b]);
    return ContingencyTable(std::move(lr), std::move(lc), std::move(m));
}

ContingencyTable ContingencyTable::transposed() const {
    return ContingencyTable(col_labels_, row_labels_, counts_.transpose());
}

bool same_values(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || (a.array() == b.array()).all());
}

bool operator==(const ContingencyTable& a, const ContingencyTable& b) {
    return a.row_labels_ == b.row_labels_ && a.col_labels_ == b.col_labels_ &&
           same_values(a.counts_, b.counts_);
}

Eigen::Index find_label(const std::vector<std::string>& labels, const std::string& label) {
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return static_cast<Eigen::Index>(i);
    return -1;
}

}  // namespace gda
