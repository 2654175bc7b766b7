#include "graphdr/quality.hpp"

#include "graphdr/relate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace graphdr {

namespace {

Eigen::MatrixXd layout_distances(const Layout& layout) {
    const Eigen::MatrixXd& Y = layout.coords();
    const Eigen::Index n = Y.rows();
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            D(i, j) = D(j, i) = (Y.row(i) - Y.row(j)).norm();
    return D;
}

}  // namespace

RelationGraph shape_graph(const Layout& layout, int k) {
    Eigen::MatrixXd D = layout_distances(layout);
    auto nn = knn_indices(D, k);
    const int n = static_cast<int>(D.rows());
    RelationGraph g(n, WeightSemantics::Dissimilarity);
    for (int i = 0; i < n; ++i)
        for (int j : nn[i])
            if (!g.has_edge(i, j)) g.add_edge(i, j, D(i, j));
    return g;
}

double faithfulness(const RelationGraph& g1, const RelationGraph& g2) {
    if (g1.n_vertices() != g2.n_vertices())
        throw DataError("faithfulness requires graphs over the same vertex set");
    if (g1.n_edges() == 0 && g2.n_edges() == 0) return 1.0;
    std::size_t common = 0;
    for (const Edge& e : g1.edges())
        if (g2.has_edge(e.u, e.v)) ++common;
    std::size_t unions = g1.n_edges() + g2.n_edges() - common;
    return static_cast<double>(common) / static_cast<double>(unions);
}

double stress(const Layout& layout, const Eigen::MatrixXd& D) {
    const Eigen::Index n = D.rows();
    if (layout.n_points() != n) throw DataError("layout/matrix size mismatch");
    const Eigen::MatrixXd& Y = layout.coords();
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double d = (Y.row(i) - Y.row(j)).norm();
            double w = D(i, j);
            num += (d - w) * (d - w);
            den += w * w;
        }
    }
    if (den == 0.0) throw DataError("stress undefined for an all-zero distance matrix");
    return std::sqrt(num / den);
}

double neighborhood_preservation(const DataMatrix& data, const Layout& layout, int k) {
    if (data.rows() != layout.n_points()) throw DataError("data/layout size mismatch");
    auto nn_data = knn_indices(distance_matrix(data, Metric::Euclidean), k);
    auto nn_layout = knn_indices(layout_distances(layout), k);
    const int n = static_cast<int>(data.rows());
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        std::vector<int> a = nn_data[i], b = nn_layout[i];
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        std::vector<int> shared;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                              std::back_inserter(shared));
        sum += static_cast<double>(shared.size()) / k;
    }
    return sum / n;
}

double trustworthiness(const DataMatrix& data, const Layout& layout, int k) {
    const int n = static_cast<int>(data.rows());
    if (layout.n_points() != n) throw DataError("data/layout size mismatch");
    if (k < 1 || 2 * k >= n) throw ConfigError("trustworthiness requires 1 <= k < N/2");

    Eigen::MatrixXd Dd = distance_matrix(data, Metric::Euclidean);
    auto nn_data = knn_indices(Dd, k);
    auto nn_layout = knn_indices(layout_distances(layout), k);

    // Data-space rank of j relative to i (1 = nearest), same tie rule as knn.
    auto rank_of = [&](int i, int j) {
        int r = 1;
        for (int a = 0; a < n; ++a) {
            if (a == i || a == j) continue;
            if (std::tie(Dd(i, a), a) < std::tie(Dd(i, j), j)) ++r;
        }
        return r;
    };

    double penalty = 0.0;
    for (int i = 0; i < n; ++i) {
        std::vector<char> in_data(n, 0);
        for (int j : nn_data[i]) in_data[j] = 1;
        for (int j : nn_layout[i]) {
            if (in_data[j]) continue;
            penalty += rank_of(i, j) - k;
        }
    }
    double norm = 2.0 / (static_cast<double>(n) * k * (2.0 * n - 3.0 * k - 1.0));
    return 1.0 - norm * penalty;
}

double neighbor_hit(const Layout& layout, const std::vector<int>& labels, int k) {
    const int n = static_cast<int>(layout.n_points());
    if (static_cast<int>(labels.size()) != n)
        throw DataError("neighbor_hit requires one label per point");
    auto nn = knn_indices(layout_distances(layout), k);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        int hits = 0;
        for (int j : nn[i])
            if (labels[j] == labels[i]) ++hits;
        sum += static_cast<double>(hits) / k;
    }
    return sum / n;
}

CentralityVector centrality_overlay(const RelationGraph& g, CentralityKind kind, EdgeCost cost) {
    return kind == CentralityKind::Closeness ? closeness_centrality(g, cost)
                                             : betweenness_centrality(g, cost);
}

}  // namespace graphdr
