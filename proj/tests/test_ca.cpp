#include "doctest.h"
#include "oracles.hpp"

#include "gda/ca.hpp"
#include "gda/error.hpp"

#include <array>

using namespace gda;

namespace {

ContingencyTable make_table(const Eigen::MatrixXd& m) {
    return ContingencyTable(oracle::labels("r", m.rows()), oracle::labels("c", m.cols()), m);
}

Eigen::MatrixXd matrix(std::initializer_list<std::initializer_list<double>> rows) {
    Eigen::MatrixXd m(rows.size(), rows.begin()->size());
    long i = 0;
    for (const auto& row : rows) {
        long j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

}  // namespace

TEST_CASE("contingency table rejects bad input") {
    CHECK_THROWS_AS(ContingencyTable({"a", "a"}, {"x"}, Eigen::MatrixXd::Ones(2, 1)), InputError);
    CHECK_THROWS_AS(ContingencyTable({"a"}, {"x", "y"}, matrix({{1, -1}})), InputError);
    CHECK_THROWS_AS(ContingencyTable({"a"}, {"x"}, matrix({{0}})), InputError);
    CHECK_THROWS_AS(ContingencyTable({"a"}, {"x", "y"}, matrix({{1}})), InputError);
}

TEST_CASE("rank-one table gives an empty factor space") {
    const FactorModel m = fit_ca(make_table(matrix({{1, 2}, {2, 4}})));
    CHECK(m.factors() == 0);
    CHECK(m.total_inertia == 0.0);
    CHECK(inertia_report(m).empty());
    CHECK(m.row_coords.rows() == 2);
    CHECK(m.row_coords.cols() == 0);
}

TEST_CASE("three-by-two table inertia matches chi2/n") {
    const Eigen::MatrixXd n = matrix({{4, 0}, {0, 4}, {2, 2}});
    const FactorModel m = fit_ca(make_table(n));
    CHECK(oracle::chi2_over_n(n) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(m.factors() == 1);
    CHECK(std::abs(m.total_inertia - 2.0 / 3.0) < 1e-12);
}

TEST_CASE("masses, centering and axis identity") {
    oracle::Rng rng(11);
    for (int rep = 0; rep < 10; ++rep) {
        const long rows = rng.uniform_int(2, 12), cols = rng.uniform_int(2, 15);
        const Eigen::MatrixXd n = oracle::random_counts(rng, rows, cols, 9);
        const FactorModel m = fit_ca(make_table(n));
        CHECK(std::abs(m.row_masses.sum() - 1.0) < 1e-12);
        CHECK(std::abs(m.col_masses.sum() - 1.0) < 1e-12);
        CHECK(m.factors() <= std::min(rows, cols) - 1);
        for (Eigen::Index k = 0; k < m.factors(); ++k) {
            CHECK(std::abs(m.row_masses.dot(m.row_coords.col(k))) < 1e-12);
            CHECK(std::abs(m.col_masses.dot(m.col_coords.col(k))) < 1e-12);
            const double row_axis = m.row_masses.dot(m.row_coords.col(k).cwiseAbs2());
            const double col_axis = m.col_masses.dot(m.col_coords.col(k).cwiseAbs2());
            CHECK(std::abs(row_axis - m.principal_inertias(k)) < 1e-10);
            CHECK(std::abs(col_axis - m.principal_inertias(k)) < 1e-10);
            if (k > 0) CHECK(m.singular_values(k) <= m.singular_values(k - 1));
            CHECK(std::abs(m.row_contributions.col(k).sum() - 1.0) < 1e-10);
            CHECK(std::abs(m.col_contributions.col(k).sum() - 1.0) < 1e-10);
        }
        CHECK((m.row_cos2.rowwise().sum().array() <= 1.0 + 1e-10).all());
        CHECK((m.col_cos2.rowwise().sum().array() <= 1.0 + 1e-10).all());
        CHECK(std::abs(m.total_inertia - oracle::chi2_over_n(n)) < 1e-10);
    }
}

TEST_CASE("full-space row distances are chi-squared distances") {
    oracle::Rng rng(12);
    const Eigen::MatrixXd n = oracle::random_counts(rng, 9, 7, 12);
    const FactorModel m = fit_ca(make_table(n));
    for (long a = 0; a < n.rows(); ++a)
        for (long b = a + 1; b < n.rows(); ++b) {
            const double factor_dist = (m.row_coords.row(a) - m.row_coords.row(b)).norm();
            CHECK(std::abs(factor_dist - oracle::chi2_row_distance(n, a, b)) < 1e-8);
        }
}

TEST_CASE("sign convention: largest row coordinate positive; fits are bit-identical") {
    oracle::Rng rng(13);
    const auto table = make_table(oracle::random_counts(rng, 8, 6, 10));
    const FactorModel a = fit_ca(table);
    const FactorModel b = fit_ca(table);
    CHECK(a == b);
    for (Eigen::Index k = 0; k < a.factors(); ++k) {
        Eigen::Index arg = 0;
        a.row_coords.col(k).cwiseAbs().maxCoeff(&arg);
        CHECK(a.row_coords(arg, k) > 0.0);
    }
}

TEST_CASE("empty lines: strict error names labels, lenient drops them") {
    const ContingencyTable t({"a", "b", "z"}, {"x", "y", "w"},
                             matrix({{1, 2, 0}, {3, 1, 0}, {0, 0, 0}}));
    try {
        fit_ca(t);
        FAIL("expected DegenerateTableError");
    } catch (const DegenerateTableError& e) {
        CHECK(e.zero_rows() == std::vector<std::string>{"z"});
        CHECK(e.zero_cols() == std::vector<std::string>{"w"});
    }
    const FactorModel m = fit_ca(t, {.strict = false});
    CHECK(m.row_labels == std::vector<std::string>{"a", "b"});
    CHECK(m.dropped_rows == std::vector<std::string>{"z"});
    CHECK(m.dropped_cols == std::vector<std::string>{"w"});
    CHECK(m.factors() == 1);
}

TEST_CASE("supplementary projection: principal rows reproduce F, mean profile at origin") {
    oracle::Rng rng(14);
    const Eigen::MatrixXd n = oracle::random_counts(rng, 7, 9, 8);
    const FactorModel m = fit_ca(make_table(n));
    const auto proj = project_supplementary(m, m.row_labels, n, PointKind::row);
    CHECK((proj.coords - m.row_coords).cwiseAbs().maxCoeff() < 1e-10);

    const auto cols = project_supplementary(m, m.col_labels, n, PointKind::column);
    CHECK((cols.coords - m.col_coords).cwiseAbs().maxCoeff() < 1e-10);

    const auto mean = project_supplementary(m, {"mean"}, m.col_masses.transpose(), PointKind::row);
    CHECK(mean.coords.cwiseAbs().maxCoeff() < 1e-12);
    const auto prox = origin_proximity(m, mean);
    CHECK(prox.front().near_origin);
}

TEST_CASE("supplementary projection errors") {
    const FactorModel m = fit_ca(make_table(matrix({{4, 0, 1}, {0, 4, 1}, {2, 2, 3}})));
    CHECK_THROWS_AS(project_supplementary(m, {"p"}, matrix({{1, 2}}), PointKind::row), InputError);
    CHECK_THROWS_AS(project_supplementary(m, {"p"}, matrix({{0, 0, 0}}), PointKind::row), InputError);
    CHECK_THROWS_AS(project_supplementary(m, {"p", "q"}, matrix({{1, 0, 0}}), PointKind::row),
                    InputError);
}

TEST_CASE("inertia report percents") {
    FactorModel m;
    m.principal_inertias = Eigen::Vector2d(0.3, 0.1);
    m.singular_values = m.principal_inertias.cwiseSqrt();
    m.total_inertia = 0.4;
    const auto rep = inertia_report(m);
    REQUIRE(rep.size() == 2);
    CHECK(rep[0].percent == doctest::Approx(75.0));
    CHECK(rep[1].percent == doctest::Approx(25.0));
    CHECK(rep[1].cumulative == doctest::Approx(100.0));

    oracle::Rng rng(15);
    const FactorModel big = fit_ca(make_table(oracle::random_counts(rng, 20, 30, 20)));
    const auto r = inertia_report(big);
    double sum = 0.0;
    for (const auto& row : r) sum += row.percent;
    CHECK(std::abs(sum - 100.0) < 1e-9);
}

TEST_CASE("five principal columns give four factors") {
    oracle::Rng rng(16);
    const FactorModel m = fit_ca(make_table(oracle::random_counts(rng, 40, 5, 30)));
    CHECK(m.factors() == 4);
    const auto rep = inertia_report(m);
    CHECK(rep[1].cumulative > rep[0].percent);
}

TEST_CASE("contributions match the brute-force formula and rank deterministically") {
    const Eigen::MatrixXd n = matrix({{10, 2, 3, 1}, {1, 8, 2, 2}, {3, 1, 9, 4}, {2, 5, 1, 7}});
    const FactorModel m = fit_ca(make_table(n));
    REQUIRE(m.factors() == 3);
    for (long k = 0; k < 3; ++k)
        for (long i = 0; i < 4; ++i)
            CHECK(std::abs(m.row_contributions(i, k) - oracle::row_contribution(n, m.row_coords, i, k)) <
                  1e-12);

    const std::array axis1{1};
    const auto top = top_contributors(m, PointKind::row, axis1, 4);
    REQUIRE(top.size() == 4);
    std::vector<std::pair<double, std::string>> brute;
    for (long i = 0; i < 4; ++i)
        brute.emplace_back(-oracle::row_contribution(n, m.row_coords, i, 0), m.row_labels[i]);
    std::sort(brute.begin(), brute.end());
    for (size_t i = 0; i < 4; ++i) CHECK(top[i].label == brute[i].second);

    double total = 0.0;
    for (const auto& c : top) total += c.contribution;
    CHECK(std::abs(total - 1.0) < 1e-10);

    const std::array plane{1, 2};
    CHECK(top_contributors(m, PointKind::column, plane, 99).size() == 4);
    CHECK(top_contributors(m, PointKind::column, plane, 2).size() == 2);
    const std::array bad{4};
    CHECK_THROWS_AS(top_contributors(m, PointKind::row, bad, 1), InputError);
}

TEST_CASE("plane contribution is the lambda-weighted mean and ties sort by label") {
    // Two identical rows tie on every axis.
    const Eigen::MatrixXd n = matrix({{3, 1, 1}, {3, 1, 1}, {1, 4, 2}, {1, 1, 5}});
    const ContingencyTable t({"b", "a", "c", "d"}, {"x", "y", "z"}, n);
    const FactorModel m = fit_ca(t);
    const std::array plane{1, 2};
    const Eigen::VectorXd pc = plane_contributions(m, PointKind::row, plane);
    const double l1 = m.principal_inertias(0), l2 = m.principal_inertias(1);
    for (long i = 0; i < 4; ++i)
        CHECK(pc(i) == doctest::Approx((l1 * m.row_contributions(i, 0) + l2 * m.row_contributions(i, 1)) /
                                       (l1 + l2)));
    const auto top = top_contributors(m, PointKind::row, plane, 4);
    for (size_t i = 0; i + 1 < top.size(); ++i)
        if (top[i].contribution == top[i + 1].contribution) {
            CHECK(top[i].label < top[i + 1].label);
        }
}

TEST_CASE("origin proximity flags only points near the barycentre") {
    oracle::Rng rng(17);
    const Eigen::MatrixXd n = oracle::random_counts(rng, 10, 8, 10);
    const FactorModel m = fit_ca(make_table(n));
    Eigen::Index far = 0;
    m.row_coords.rowwise().norm().maxCoeff(&far);
    SupplementaryProjection pts{PointKind::row, {"far", "origin"}, Eigen::MatrixXd(2, m.factors())};
    pts.coords.row(0) = m.row_coords.row(far);
    pts.coords.row(1).setZero();
    const auto prox = origin_proximity(m, pts);
    CHECK_FALSE(prox[0].near_origin);
    CHECK(prox[1].near_origin);
    CHECK(prox[1].distance == 0.0);
}
