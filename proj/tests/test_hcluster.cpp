#include "doctest.h"
#include "oracles.hpp"

#include "gda/error.hpp"
#include "gda/hcluster.hpp"

using namespace gda;

namespace {

PointCloud line_cloud(std::initializer_list<double> xs, std::vector<std::string> labels) {
    PointCloud c;
    c.labels = std::move(labels);
    c.coords.resize(static_cast<Eigen::Index>(xs.size()), 1);
    Eigen::Index i = 0;
    for (double x : xs) c.coords(i++, 0) = x;
    std::vector<std::size_t> order(c.labels.size());
    for (std::size_t s = 0; s < order.size(); ++s) order[s] = s;
    c.order = order;
    return c;
}

std::vector<std::set<long>> members(const Dendrogram& d) {
    const std::size_t p = d.leaves();
    std::vector<std::set<long>> out(p + d.merges.size());
    for (std::size_t i = 0; i < p; ++i) out[i] = {static_cast<long>(i)};
    for (std::size_t m = 0; m < d.merges.size(); ++m) {
        out[p + m] = out[d.merges[m].left];
        out[p + m].insert(out[d.merges[m].right].begin(), out[d.merges[m].right].end());
    }
    return out;
}

bool matches_oracle(const Dendrogram& d, const std::vector<oracle::OracleMerge>& ref) {
    if (d.merges.size() != ref.size()) return false;
    const auto mem = members(d);
    for (std::size_t m = 0; m < ref.size(); ++m) {
        if (mem[d.merges[m].left] != ref[m].left || mem[d.merges[m].right] != ref[m].right) return false;
        const double scale = std::max(1.0, std::abs(ref[m].height));
        if (std::abs(d.merges[m].raw_height - ref[m].height) > 1e-10 * scale) return false;
    }
    return true;
}

PointCloud random_cloud(oracle::Rng& rng, long p, long k, bool weighted) {
    PointCloud c;
    c.labels = oracle::labels("p", p);
    c.coords.resize(p, k);
    for (long i = 0; i < p; ++i)
        for (long j = 0; j < k; ++j) c.coords(i, j) = rng.normal();
    if (weighted) {
        c.masses.resize(p);
        for (long i = 0; i < p; ++i) c.masses(i) = 0.1 + rng.uniform();
    }
    std::vector<std::size_t> order(static_cast<size_t>(p));
    for (std::size_t s = 0; s < order.size(); ++s) order[s] = s;
    c.order = order;
    return c;
}

}  // namespace

TEST_CASE("two coincident points merge at height zero") {
    const Dendrogram d = ward_cluster(line_cloud({3.0, 3.0}, {"a", "b"}));
    REQUIRE(d.merges.size() == 1);
    CHECK(d.merges[0].height == 0.0);
    CHECK(d.merges[0].size == 2);
}

TEST_CASE("four points on a line pair up before the pairs join") {
    const PointCloud c = line_cloud({0, 1, 10, 11}, {"a", "b", "c", "d"});
    const Dendrogram d = ward_cluster(c);
    REQUIRE(d.merges.size() == 3);
    const auto mem = members(d);
    CHECK(mem[4] == std::set<long>{0, 1});
    CHECK(mem[5] == std::set<long>{2, 3});
    CHECK(d.merges[0].height == doctest::Approx(0.5));
    CHECK(d.merges[1].height == doctest::Approx(0.5));
    CHECK(d.merges[2].height == doctest::Approx(100.0));
    CHECK(matches_oracle(d, oracle::ward_oracle(c.coords, c.effective_masses(), c.labels)));
    CHECK(d.leaf_order() == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("Ward matches the from-scratch oracle on small random clouds") {
    oracle::Rng rng(31);
    for (int rep = 0; rep < 60; ++rep) {
        const long p = rng.uniform_int(2, 8);
        const PointCloud c = random_cloud(rng, p, rng.uniform_int(1, 4), rep % 2 == 1);
        const Dendrogram d = ward_cluster(c);
        CHECK(matches_oracle(d, oracle::ward_oracle(c.coords, c.effective_masses(), c.labels)));
        d.validate();
    }
}

TEST_CASE("scaling coordinates scales heights quadratically") {
    oracle::Rng rng(32);
    PointCloud c = random_cloud(rng, 12, 3, true);
    const Dendrogram d1 = ward_cluster(c);
    c.coords *= 3.0;
    const Dendrogram d2 = ward_cluster(c);
    for (std::size_t m = 0; m < d1.merges.size(); ++m) {
        CHECK(d1.merges[m].left == d2.merges[m].left);
        CHECK(d1.merges[m].right == d2.merges[m].right);
        CHECK(d2.merges[m].raw_height == doctest::Approx(9.0 * d1.merges[m].raw_height).epsilon(1e-12));
    }
}

TEST_CASE("ultrametric read-off and strong triangle inequality") {
    Dendrogram d;
    d.leaf_labels = {"a", "b", "c"};
    d.merges = {{0, 1, 1.0, 1.0, 2}, {3, 2, 5.0, 5.0, 3}};
    const Eigen::MatrixXd u = ultrametric(d);
    CHECK(u(0, 0) == 0.0);
    CHECK(u(0, 1) == 1.0);
    CHECK(u(0, 2) == 5.0);
    CHECK(u(1, 2) == 5.0);
    CHECK(ultrametric_distance(d, "b", "a") == 1.0);
    CHECK(ultrametric_distance(d, "a", "a") == 0.0);
    CHECK_THROWS_AS(ultrametric_distance(d, "a", "zz"), InputError);

    oracle::Rng rng(33);
    const Dendrogram big = ward_cluster(random_cloud(rng, 20, 2, false));
    const Eigen::MatrixXd ub = ultrametric(big);
    long violations = 0;
    for (long a = 0; a < 20; ++a)
        for (long b = 0; b < 20; ++b)
            for (long c = 0; c < 20; ++c)
                if (ub(a, c) > std::max(ub(a, b), ub(b, c))) ++violations;
    CHECK(violations == 0);
}

TEST_CASE("invalid clouds and dendrograms") {
    CHECK_THROWS_AS(ward_cluster(line_cloud({1.0}, {"solo"})), InputError);
    PointCloud bad = line_cloud({1.0, 2.0}, {"a", "b"});
    bad.masses = Eigen::Vector2d(1.0, 0.0);
    CHECK_THROWS_AS(ward_cluster(bad), InputError);
    PointCloud unordered = line_cloud({1.0, 2.0}, {"a", "b"});
    unordered.order.reset();
    CHECK_THROWS_AS(constrained_cluster(unordered), InputError);
    unordered.order = std::vector<std::size_t>{0, 0};
    CHECK_THROWS_AS(constrained_cluster(unordered), InputError);

    Dendrogram d;
    d.leaf_labels = {"a", "b", "c"};
    d.merges = {{0, 1, 1.0, 1.0, 2}, {0, 2, 5.0, 5.0, 2}};
    CHECK_THROWS_AS(d.validate(), InputError);
}

TEST_CASE("constrained clustering merges only adjacent blocks") {
    const PointCloud c = line_cloud({0, 1, 100, 101}, {"s1", "s2", "s3", "s4"});
    const Dendrogram d = constrained_cluster(c);
    CHECK(d.constrained);
    const auto mem = members(d);
    CHECK(mem[4] == std::set<long>{0, 1});
    CHECK(mem[5] == std::set<long>{2, 3});
    CHECK(matches_oracle(d, oracle::ward_oracle(c.coords, c.effective_masses(), c.labels, true)));
    CHECK(d.leaf_order() == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("constrained clustering respects a shuffled sequence order") {
    oracle::Rng rng(34);
    for (int rep = 0; rep < 30; ++rep) {
        PointCloud c = random_cloud(rng, rng.uniform_int(2, 12), 2, rep % 2 == 0);
        auto& order = *c.order;
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<long>(i) - 1))]);
        const Dendrogram d = constrained_cluster(c);
        d.validate();
        CHECK(d.leaf_order() == order);

        std::vector<std::size_t> pos(order.size());
        for (std::size_t s = 0; s < order.size(); ++s) pos[order[s]] = s;
        for (const auto& mset : members(d)) {
            std::size_t lo = order.size(), hi = 0;
            for (long leaf : mset) {
                lo = std::min(lo, pos[static_cast<std::size_t>(leaf)]);
                hi = std::max(hi, pos[static_cast<std::size_t>(leaf)]);
            }
            CHECK(hi - lo + 1 == mset.size());
        }
        for (std::size_t m = 1; m < d.merges.size(); ++m) CHECK(d.merges[m].height >= d.merges[m - 1].height);

        // Oracle over points listed in sequence order.
        Eigen::MatrixXd xs(static_cast<Eigen::Index>(order.size()), c.coords.cols());
        Eigen::VectorXd ws(static_cast<Eigen::Index>(order.size()));
        std::vector<std::string> names;
        const Eigen::VectorXd w = c.effective_masses();
        for (std::size_t s = 0; s < order.size(); ++s) {
            xs.row(static_cast<Eigen::Index>(s)) = c.coords.row(static_cast<Eigen::Index>(order[s]));
            ws(static_cast<Eigen::Index>(s)) = w(static_cast<Eigen::Index>(order[s]));
            names.push_back(c.labels[order[s]]);
        }
        const auto ref = oracle::ward_oracle(xs, ws, names, true);
        for (std::size_t m = 0; m < ref.size(); ++m)
            CHECK(std::abs(d.merges[m].raw_height - ref[m].height) <= 1e-10 * std::max(1.0, ref[m].height));
    }
}

TEST_CASE("equidistant sorted points pair left to right") {
    const Dendrogram d = constrained_cluster(line_cloud({0, 1, 2, 3}, {"a", "b", "c", "d"}));
    const auto mem = members(d);
    CHECK(mem[4] == std::set<long>{0, 1});
    CHECK(mem[5] == std::set<long>{2, 3});
    CHECK(mem[6] == std::set<long>{0, 1, 2, 3});
}

TEST_CASE("change points of two planted regimes") {
    oracle::Rng rng(35);
    PointCloud c;
    c.labels = oracle::labels("day", 10);
    c.coords.resize(10, 2);
    for (long i = 0; i < 10; ++i) {
        c.coords(i, 0) = (i < 5 ? 0.0 : 10.0) + 0.3 * rng.normal();
        c.coords(i, 1) = 0.3 * rng.normal();
    }
    std::vector<std::size_t> order(10);
    for (std::size_t s = 0; s < 10; ++s) order[s] = s;
    c.order = order;
    const Dendrogram d = constrained_cluster(c);
    const auto cps = change_points(d, 3);
    REQUIRE(cps.size() == 3);
    CHECK(cps[0].position == 5);
    CHECK(cps[0].before == "day004");
    CHECK(cps[0].after == "day005");
    CHECK(change_points(d, 100).size() == 9);
    CHECK_THROWS_AS(change_points(d, 0), InputError);
    CHECK_THROWS_AS(change_points(ward_cluster(c), 1), InputError);
}

TEST_CASE("homogeneous sequence gives uniform boundaries ordered by position") {
    PointCloud c;
    c.labels = oracle::labels("s", 4);
    c.coords = Eigen::MatrixXd::Zero(4, 1);
    c.order = std::vector<std::size_t>{0, 1, 2, 3};
    const auto cps = change_points(constrained_cluster(c), 10);
    REQUIRE(cps.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(cps[i].height == 0.0);
        CHECK(cps[i].position == i + 1);
    }
}
