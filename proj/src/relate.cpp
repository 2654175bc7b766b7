#include "graphdr/relate.hpp"

#include "graphdr/graphalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace graphdr {

RelationGraph pairwise_distance_graph(const DataMatrix& data, Metric metric) {
    return graph_from_matrix(distance_matrix(data, metric), WeightSemantics::Dissimilarity);
}

std::vector<std::vector<int>> knn_indices(const Eigen::MatrixXd& D, int k) {
    const int n = static_cast<int>(D.rows());
    if (k < 1 || k >= n) throw ConfigError("k must satisfy 1 <= k < N");
    std::vector<std::vector<int>> result(n);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) {
        order.resize(n);
        std::iota(order.begin(), order.end(), 0);
        order.erase(order.begin() + i);
        std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
            return std::tie(D(i, a), a) < std::tie(D(i, b), b);
        });
        result[i].assign(order.begin(), order.begin() + k);
    }
    return result;
}

namespace {

RelationGraph knn_union_graph(const Eigen::MatrixXd& D, int k) {
    auto nn = knn_indices(D, k);
    const int n = static_cast<int>(D.rows());
    RelationGraph g(n, WeightSemantics::Dissimilarity);
    for (int i = 0; i < n; ++i)
        for (int j : nn[i])
            if (!g.has_edge(i, j)) g.add_edge(i, j, D(i, j));
    return g;
}

}  // namespace

RelationGraph knn_graph(const DataMatrix& data, int k, Metric metric) {
    return knn_union_graph(distance_matrix(data, metric), k);
}

RelationGraph similarity_flip(const RelationGraph& g) {
    if (g.n_edges() == 0) throw DataError("similarity_flip needs at least one edge");
    const double wmax = g.max_weight();
    if (wmax <= 0.0) throw DataError("similarity_flip undefined when max weight is zero");
    return g.map_weights(WeightSemantics::Similarity,
                         [wmax](const Edge& e) { return 1.0 - e.w / wmax; });
}

RelationGraph snn_reweight(const DataMatrix& data, int k, Metric metric) {
    Eigen::MatrixXd D = distance_matrix(data, metric);
    auto nn = knn_indices(D, k);
    const int n = static_cast<int>(D.rows());

    std::vector<std::vector<char>> is_nn(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j : nn[i]) is_nn[i][j] = 1;

    RelationGraph g(n, WeightSemantics::Similarity);
    for (int i = 0; i < n; ++i) {
        for (int j : nn[i]) {
            if (g.has_edge(i, j)) continue;
            int shared = 0;
            for (int a : nn[i])
                if (is_nn[j][a]) ++shared;
            g.add_edge(i, j, static_cast<double>(shared));
        }
    }
    return g;
}

CalibrationResult perplexity_calibrate(const Eigen::VectorXd& distance_row, int self_index,
                                       double target_perplexity) {
    const int n = static_cast<int>(distance_row.size());
    if (target_perplexity < 1.0 || target_perplexity > n - 1)
        throw ConfigError("target perplexity must lie in [1, N-1]");

    const double log2_target = std::log2(target_perplexity);

    // Row entropy at a given sigma; returns (log2 perplexity, probabilities).
    auto evaluate = [&](double sigma) {
        Eigen::VectorXd logits(n);
        for (int j = 0; j < n; ++j)
            logits[j] = (j == self_index)
                            ? -std::numeric_limits<double>::infinity()
                            : -(distance_row[j] * distance_row[j]) / (2.0 * sigma * sigma);
        double mx = logits.maxCoeff();
        Eigen::VectorXd p(n);
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            p[j] = std::isinf(logits[j]) ? 0.0 : std::exp(logits[j] - mx);
            sum += p[j];
        }
        p /= sum;
        double h = 0.0;
        for (int j = 0; j < n; ++j)
            if (p[j] > 0.0) h -= p[j] * std::log2(p[j]);
        return std::make_pair(h, p);
    };

    double lo = 1e-10, hi = 1e10;
    double sigma = 1.0;
    constexpr int max_steps = 100;
    constexpr double tol = 1e-5;
    for (int step = 0; step < max_steps; ++step) {
        sigma = std::sqrt(lo * hi);  // geometric midpoint over 20 decades
        auto [h, p] = evaluate(sigma);
        if (std::abs(h - log2_target) <= tol)
            return {sigma, std::exp2(h), std::move(p)};
        if (h > log2_target)
            hi = sigma;
        else
            lo = sigma;
    }
    auto [h, p] = evaluate(sigma);
    if (std::abs(h - log2_target) <= 1e-3)  // flat entropy profile; close enough
        return {sigma, std::exp2(h), std::move(p)};
    throw NumericError("perplexity calibration did not converge (degenerate distance row)");
}

RelationGraph tsne_probability_graph(const DataMatrix& data, double perplexity,
                                     double prune_epsilon, Metric metric,
                                     PerplexityCalibration* calibration_out) {
    if (prune_epsilon < 0.0) throw ConfigError("prune_epsilon must be >= 0");
    Eigen::MatrixXd D = distance_matrix(data, metric);
    const int n = static_cast<int>(D.rows());

    Eigen::MatrixXd P(n, n);
    if (calibration_out) {
        calibration_out->sigma.resize(n);
        calibration_out->achieved_perplexity.resize(n);
    }
    for (int i = 0; i < n; ++i) {
        auto res = perplexity_calibrate(D.row(i), i, perplexity);
        P.row(i) = res.p_conditional;
        if (calibration_out) {
            calibration_out->sigma[i] = res.sigma;
            calibration_out->achieved_perplexity[i] = res.achieved_perplexity;
        }
    }

    RelationGraph g(n, WeightSemantics::Probability);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double w = (P(i, j) + P(j, i)) / 2.0;
            if (w > 0.0 && w >= prune_epsilon) g.add_edge(i, j, w);
        }
    }
    return g;
}

RelationGraph umap_fuzzy_graph(const DataMatrix& data, int n_neighbors, Metric metric) {
    const int n = static_cast<int>(data.rows());
    if (n_neighbors < 2 || n_neighbors >= n)
        throw ConfigError("n_neighbors must satisfy 2 <= n_neighbors < N");
    Eigen::MatrixXd D = distance_matrix(data, metric);
    auto nn = knn_indices(D, n_neighbors);

    const double target = std::log2(static_cast<double>(n_neighbors));
    Eigen::MatrixXd membership = Eigen::MatrixXd::Zero(n, n);  // directed w_{j|i}

    for (int i = 0; i < n; ++i) {
        std::vector<double> d(n_neighbors);
        for (int a = 0; a < n_neighbors; ++a) d[a] = D(i, nn[i][a]);
        const double rho = d.front();  // local connectivity = 1 nearest neighbor

        auto member_sum = [&](double sigma) {
            double s = 0.0;
            for (double dj : d) s += std::exp(-std::max(0.0, dj - rho) / sigma);
            return s;
        };

        // Expand-then-bisect search for sigma; sum is increasing in sigma.
        double lo = 0.0, hi = 1.0;
        int expand = 0;
        while (member_sum(hi) < target && expand++ < 64) hi *= 2.0;
        double sigma = hi;
        bool converged = false;
        for (int step = 0; step < 64; ++step) {
            sigma = (lo + hi) / 2.0;
            double s = member_sum(sigma);
            if (std::abs(s - target) < 1e-5) {
                converged = true;
                break;
            }
            if (s > target)
                hi = sigma;
            else
                lo = sigma;
        }
        if (!converged && member_sum(sigma) < target * 0.5) {
            // Duplicate-heavy neighborhood; fall back to the mean distance.
            sigma = std::max(std::accumulate(d.begin(), d.end(), 0.0) / n_neighbors, 1e-12);
        }
        if (sigma <= 0.0) sigma = 1e-12;
        for (int a = 0; a < n_neighbors; ++a)
            membership(i, nn[i][a]) = std::exp(-std::max(0.0, d[a] - rho) / sigma);
    }

    RelationGraph g(n, WeightSemantics::Probability);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double a = membership(i, j), b = membership(j, i);
            double w = a + b - a * b;  // fuzzy union
            if (w > 0.0) g.add_edge(i, j, std::min(w, 1.0));
        }
    }
    return g;
}

RelationGraph geodesic_complete_graph(const RelationGraph& knn) {
    int ncomp = count_components(knn);
    if (ncomp != 1)
        throw DataError("geodesic transform requires a connected graph (" +
                        std::to_string(ncomp) + " components)");
    const int n = knn.n_vertices();
    RelationGraph g(n, WeightSemantics::Dissimilarity);
    for (int i = 0; i < n; ++i) {
        auto dist = single_source_shortest_paths(knn, i, EdgeCost::Weight);
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j, dist[j]);
    }
    return g;
}

RelationGraph mst_backbone(const RelationGraph& g) {
    auto tree = minimum_spanning_tree(g);
    return RelationGraph(g.n_vertices(), g.semantics(), std::move(tree));
}

RelationGraph backbone_strengthen(const RelationGraph& g, const RelationGraph& backbone,
                                  double factor) {
    if (factor <= 0.0) throw ConfigError("strengthen factor must be positive");
    for (const Edge& e : backbone.edges())
        if (!g.has_edge(e.u, e.v))
            throw DataError("backbone edge (" + std::to_string(e.u) + "," +
                            std::to_string(e.v) + ") missing from graph");
    return g.map_weights(g.semantics(), [&](const Edge& e) {
        return backbone.has_edge(e.u, e.v) ? e.w / factor : e.w;
    });
}

}  // namespace graphdr
