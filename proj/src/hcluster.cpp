#include "gda/hcluster.hpp"

#include "gda/error.hpp"

#include <algorithm>
#include <limits>

namespace gda {

Eigen::VectorXd PointCloud::effective_masses() const {
    if (masses.size() == 0) return Eigen::VectorXd::Ones(static_cast<Eigen::Index>(size()));
    return masses;
}

void PointCloud::validate() const {
    const auto p = static_cast<Eigen::Index>(labels.size());
    if (coords.rows() != p) throw InputError("point cloud: coordinate rows do not match labels");
    if (masses.size() != 0 && masses.size() != p)
        throw InputError("point cloud: mass count does not match labels");
    if (!coords.allFinite()) throw InputError("point cloud: non-finite coordinate");
    if (masses.size() != 0 && !(masses.array() > 0.0).all())
        throw InputError("point cloud: masses must be positive");
    if (order) {
        if (order->size() != labels.size())
            throw InputError("point cloud: sequence order is not a permutation");
        std::vector<bool> seen(labels.size(), false);
        for (const auto idx : *order) {
            if (idx >= labels.size() || seen[idx])
                throw InputError("point cloud: sequence order is not a permutation");
            seen[idx] = true;
        }
    }
}

PointCloud cloud_from_model(const FactorModel& model, PointKind kind, int dimensions) {
    const Eigen::Index k = model.factors();
    if (k == 0) throw DegenerateError("model has no factors; nothing to cluster on");
    const Eigen::Index keep = dimensions <= 0 ? k : std::min<Eigen::Index>(k, dimensions);
    PointCloud cloud;
    cloud.labels = model.labels(kind);
    cloud.coords = model.coords(kind).leftCols(keep);
    cloud.masses = model.masses(kind);
    std::vector<std::size_t> order(cloud.labels.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    cloud.order = std::move(order);
    return cloud;
}

std::vector<std::size_t> Dendrogram::leaf_order() const {
    const std::size_t p = leaves();
    if (merges.empty()) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < p; ++i) out.push_back(i);
        return out;
    }
    std::vector<std::size_t> out;
    std::vector<std::size_t> stack{p + merges.size() - 1};
    while (!stack.empty()) {
        const std::size_t node = stack.back();
        stack.pop_back();
        if (node < p) {
            out.push_back(node);
            continue;
        }
        const Merge& m = merges[node - p];
        stack.push_back(m.right);
        stack.push_back(m.left);
    }
    return out;
}

void Dendrogram::validate() const {
    const std::size_t p = leaves();
    if (p == 0) throw InputError("dendrogram has no leaves");
    if (merges.size() != p - 1)
        throw InputError("dendrogram with " + std::to_string(p) + " leaves needs " +
                         std::to_string(p - 1) + " merges, has " + std::to_string(merges.size()));
    std::vector<bool> used(p + merges.size(), false);
    std::vector<std::size_t> size(p + merges.size(), 1);
    for (std::size_t m = 0; m < merges.size(); ++m) {
        const Merge& mg = merges[m];
        for (const std::size_t child : {mg.left, mg.right}) {
            if (child >= p + m || used[child])
                throw InputError("dendrogram merge " + std::to_string(m) + " has an invalid child");
            used[child] = true;
        }
        size[p + m] = size[mg.left] + size[mg.right];
        if (mg.size != size[p + m])
            throw InputError("dendrogram merge " + std::to_string(m) + " has a wrong size");
        if (m > 0 && mg.height < merges[m - 1].height)
            throw InputError("dendrogram heights are not monotone");
    }
}

namespace {

struct PairKey {
    double cost;
    const std::string* lo;
    const std::string* hi;
};

bool before(const PairKey& a, const PairKey& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (*a.lo != *b.lo) return *a.lo < *b.lo;
    return *a.hi < *b.hi;
}

PairKey make_key(double cost, const std::string& x, const std::string& y) {
    return x < y ? PairKey{cost, &x, &y} : PairKey{cost, &y, &x};
}

double ward_cost(double ma, double mb, const Eigen::VectorXd& ga, const Eigen::VectorXd& gb) {
    return ma * mb / (ma + mb) * (ga - gb).squaredNorm();
}

void monotonize(Dendrogram& d) {
    double running = 0.0;
    for (auto& m : d.merges) {
        running = std::max(running, m.raw_height);
        m.height = running;
    }
}

void require_clusterable(const PointCloud& cloud) {
    cloud.validate();
    if (cloud.size() < 2) throw InputError("clustering needs at least 2 points");
    if (cloud.coords.cols() < 1) throw InputError("clustering needs at least 1 dimension");
}

}  // namespace

Dendrogram ward_cluster(const PointCloud& cloud) {
    require_clusterable(cloud);
    const std::size_t p = cloud.size();
    const Eigen::VectorXd mass0 = cloud.effective_masses();

    // Slot i holds a live cluster; its key is its smallest leaf label.
    std::vector<double> mass(mass0.data(), mass0.data() + p);
    std::vector<std::size_t> node(p), size(p, 1);
    std::vector<const std::string*> key(p);
    std::vector<bool> alive(p, true);
    for (std::size_t i = 0; i < p; ++i) {
        node[i] = i;
        key[i] = &cloud.labels[i];
    }

    Eigen::MatrixXd dist(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        dist(i, i) = 0.0;
        for (std::size_t j = i + 1; j < p; ++j) {
            const double d = ward_cost(mass[i], mass[j], cloud.coords.row(i).transpose(),
                                       cloud.coords.row(j).transpose());
            dist(i, j) = dist(j, i) = d;
        }
    }

    auto pair_key = [&](std::size_t i, std::size_t j) { return make_key(dist(i, j), *key[i], *key[j]); };
    std::vector<std::size_t> nearest(p, 0);
    auto refresh = [&](std::size_t i) {
        std::size_t best = p;
        for (std::size_t j = 0; j < p; ++j) {
            if (j == i || !alive[j]) continue;
            if (best == p || before(pair_key(i, j), pair_key(i, best))) best = j;
        }
        nearest[i] = best;
    };
    for (std::size_t i = 0; i < p; ++i) refresh(i);

    Dendrogram out;
    out.leaf_labels = cloud.labels;
    for (std::size_t step = 0; step + 1 < p; ++step) {
        std::size_t a = p;
        for (std::size_t i = 0; i < p; ++i) {
            if (!alive[i]) continue;
            if (a == p || before(pair_key(i, nearest[i]), pair_key(a, nearest[a]))) a = i;
        }
        std::size_t b = nearest[a];
        if (*key[b] < *key[a]) std::swap(a, b);  // a keeps the smaller key

        const double dab = dist(a, b);
        out.merges.push_back({node[a], node[b], 0.0, dab, size[a] + size[b]});

        for (std::size_t k = 0; k < p; ++k) {
            if (!alive[k] || k == a || k == b) continue;
            const double mk = mass[k];
            const double d = ((mass[a] + mk) * dist(a, k) + (mass[b] + mk) * dist(b, k) - mk * dab) /
                             (mass[a] + mass[b] + mk);
            dist(a, k) = dist(k, a) = std::max(d, 0.0);
        }
        mass[a] += mass[b];
        size[a] += size[b];
        node[a] = p + step;
        alive[b] = false;

        if (step + 2 == p) break;
        refresh(a);
        for (std::size_t k = 0; k < p; ++k) {
            if (!alive[k] || k == a) continue;
            if (nearest[k] == a || nearest[k] == b)
                refresh(k);
            else if (before(pair_key(k, a), pair_key(k, nearest[k])))
                nearest[k] = a;
        }
    }
    monotonize(out);
    return out;
}

Dendrogram constrained_cluster(const PointCloud& cloud) {
    require_clusterable(cloud);
    if (!cloud.order) throw InputError("constrained clustering needs a sequence order");
    const std::size_t p = cloud.size();
    const Eigen::VectorXd mass0 = cloud.effective_masses();

    struct Block {
        std::size_t node;
        std::size_t size;
        double mass;
        Eigen::VectorXd centroid;
        const std::string* key;
    };
    std::vector<Block> blocks;
    for (const std::size_t idx : *cloud.order)
        blocks.push_back({idx, 1, mass0(static_cast<Eigen::Index>(idx)),
                          cloud.coords.row(static_cast<Eigen::Index>(idx)).transpose(),
                          &cloud.labels[idx]});

    auto cost_at = [&](std::size_t t) {
        return ward_cost(blocks[t].mass, blocks[t + 1].mass, blocks[t].centroid, blocks[t + 1].centroid);
    };
    std::vector<double> costs;
    for (std::size_t t = 0; t + 1 < blocks.size(); ++t) costs.push_back(cost_at(t));

    Dendrogram out;
    out.leaf_labels = cloud.labels;
    out.constrained = true;
    for (std::size_t step = 0; step + 1 < p; ++step) {
        std::size_t best = 0;
        for (std::size_t t = 1; t < costs.size(); ++t) {
            if (before(make_key(costs[t], *blocks[t].key, *blocks[t + 1].key),
                       make_key(costs[best], *blocks[best].key, *blocks[best + 1].key)))
                best = t;
        }
        Block& l = blocks[best];
        const Block& r = blocks[best + 1];
        out.merges.push_back({l.node, r.node, 0.0, costs[best], l.size + r.size});

        const double m = l.mass + r.mass;
        l.centroid = (l.mass * l.centroid + r.mass * r.centroid) / m;
        l.mass = m;
        l.size += r.size;
        l.node = p + step;
        if (*r.key < *l.key) l.key = r.key;
        blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(best) + 1);
        costs.erase(costs.begin() + static_cast<std::ptrdiff_t>(best));
        if (best > 0) costs[best - 1] = cost_at(best - 1);
        if (best < costs.size()) costs[best] = cost_at(best);
    }
    monotonize(out);
    return out;
}

namespace {

std::vector<std::vector<std::size_t>> node_members(const Dendrogram& dend) {
    const std::size_t p = dend.leaves();
    std::vector<std::vector<std::size_t>> members(p + dend.merges.size());
    for (std::size_t i = 0; i < p; ++i) members[i] = {i};
    for (std::size_t m = 0; m < dend.merges.size(); ++m) {
        auto& dst = members[p + m];
        dst = members[dend.merges[m].left];
        const auto& r = members[dend.merges[m].right];
        dst.insert(dst.end(), r.begin(), r.end());
    }
    return members;
}

}  // namespace

Eigen::MatrixXd ultrametric(const Dendrogram& dend) {
    dend.validate();
    const std::size_t p = dend.leaves();
    const auto members = node_members(dend);
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(p, p);
    for (std::size_t m = 0; m < dend.merges.size(); ++m) {
        const Merge& mg = dend.merges[m];
        for (const auto a : members[mg.left])
            for (const auto b : members[mg.right])
                u(a, b) = u(b, a) = mg.height;
    }
    return u;
}

double ultrametric_distance(const Dendrogram& dend, const std::string& a, const std::string& b) {
    const Eigen::Index ia = find_label(dend.leaf_labels, a);
    const Eigen::Index ib = find_label(dend.leaf_labels, b);
    if (ia < 0) throw InputError("unknown leaf '" + a + "'");
    if (ib < 0) throw InputError("unknown leaf '" + b + "'");
    return ultrametric(dend)(ia, ib);
}

std::vector<ChangePoint> change_points(const Dendrogram& dend, std::size_t top_m) {
    if (top_m < 1) throw InputError("top_m must be at least 1");
    if (!dend.constrained) throw InputError("change points need a sequence-constrained dendrogram");
    dend.validate();
    const std::size_t p = dend.leaves();
    const auto order = dend.leaf_order();
    std::vector<std::size_t> position(p);
    for (std::size_t s = 0; s < p; ++s) position[order[s]] = s;
    const auto members = node_members(dend);

    std::vector<ChangePoint> out;
    for (const Merge& mg : dend.merges) {
        std::size_t last_left = 0;
        for (const auto leaf : members[mg.left]) last_left = std::max(last_left, position[leaf]);
        out.push_back({last_left + 1, dend.leaf_labels[order[last_left]],
                       dend.leaf_labels[order[last_left + 1]], mg.height, mg.raw_height});
    }
    std::sort(out.begin(), out.end(), [](const ChangePoint& a, const ChangePoint& b) {
        if (a.height != b.height) return a.height > b.height;
        if (a.raw_height != b.raw_height) return a.raw_height > b.raw_height;
        return a.position < b.position;
    });
    if (top_m < out.size()) out.resize(top_m);
    return out;
}

}  // namespace gda
