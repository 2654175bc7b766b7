#include "graphdr/core.hpp"

#include <algorithm>
#include <cmath>

namespace graphdr {

std::string to_string(WeightSemantics s) {
    switch (s) {
        case WeightSemantics::Dissimilarity: return "dissimilarity";
        case WeightSemantics::Similarity: return "similarity";
        case WeightSemantics::Probability: return "probability";
    }
    throw std::logic_error("unknown semantics");
}

WeightSemantics semantics_from_string(const std::string& s) {
    if (s == "dissimilarity") return WeightSemantics::Dissimilarity;
    if (s == "similarity") return WeightSemantics::Similarity;
    if (s == "probability") return WeightSemantics::Probability;
    throw ConfigError("unknown weight semantics: " + s);
}

std::string to_string(Metric m) {
    return m == Metric::Euclidean ? "euclidean" : "cosine";
}

Metric metric_from_string(const std::string& s) {
    if (s == "euclidean") return Metric::Euclidean;
    if (s == "cosine") return Metric::Cosine;
    throw ConfigError("unknown metric: " + s);
}

DataMatrix::DataMatrix(Eigen::MatrixXd values, std::optional<std::vector<int>> labels)
    : values_(std::move(values)), labels_(std::move(labels)) {
    if (values_.rows() < 2 || values_.cols() < 1)
        throw DataError("DataMatrix requires at least 2 rows and 1 column");
    if (!values_.allFinite()) throw DataError("DataMatrix contains NaN or Inf");
    if (labels_ && static_cast<Eigen::Index>(labels_->size()) != values_.rows())
        throw DataError("label count does not match row count");
}

RelationGraph::RelationGraph(int n_vertices, WeightSemantics semantics)
    : n_vertices_(n_vertices), semantics_(semantics) {
    if (n_vertices < 1) throw DataError("RelationGraph requires at least one vertex");
}

RelationGraph::RelationGraph(int n_vertices, WeightSemantics semantics, std::vector<Edge> edges)
    : RelationGraph(n_vertices, semantics) {
    edges_.reserve(edges.size());
    for (const Edge& e : edges) add_edge(e.u, e.v, e.w);
}

void RelationGraph::check_edge(int i, int j, double w) const {
    if (i == j) throw DataError("self loop rejected");
    if (i < 0 || j < 0 || i >= n_vertices_ || j >= n_vertices_)
        throw DataError("vertex id out of range");
    if (!std::isfinite(w)) throw DataError("non-finite edge weight");
    if (semantics_ == WeightSemantics::Probability && (w < 0.0 || w > 1.0))
        throw DataError("probability weight outside [0,1]");
}

void RelationGraph::add_edge(int i, int j, double w) {
    check_edge(i, j, w);
    if (i > j) std::swap(i, j);
    auto [it, inserted] = weight_by_pair_.emplace(pair_key(i, j), w);
    if (!inserted) throw DataError("duplicate edge");
    edges_.push_back({i, j, w});
    adj_built_ = false;
}

std::optional<double> RelationGraph::weight(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n_vertices_) return std::nullopt;
    auto it = weight_by_pair_.find(pair_key(i, j));
    if (it == weight_by_pair_.end()) return std::nullopt;
    return it->second;
}

const std::vector<std::vector<std::pair<int, double>>>& RelationGraph::adjacency() const {
    if (!adj_built_) {
        adj_.assign(n_vertices_, {});
        for (const Edge& e : edges_) {
            adj_[e.u].emplace_back(e.v, e.w);
            adj_[e.v].emplace_back(e.u, e.w);
        }
        for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
        adj_built_ = true;
    }
    return adj_;
}

double RelationGraph::total_weight() const {
    double total = 0.0;
    for (const Edge& e : edges_) total += e.w;
    return total;
}

double RelationGraph::max_weight() const {
    if (edges_.empty()) throw DataError("max_weight on edgeless graph");
    double m = edges_.front().w;
    for (const Edge& e : edges_) m = std::max(m, e.w);
    return m;
}

Layout::Layout(Eigen::MatrixXd coords) : coords_(std::move(coords)) {
    if (coords_.cols() != 2 && coords_.cols() != 3)
        throw DataError("Layout dimension must be 2 or 3");
    if (!coords_.allFinite()) throw NumericError("Layout contains NaN or Inf");
}

Eigen::MatrixXd distance_matrix(const DataMatrix& data, Metric metric) {
    const Eigen::MatrixXd& X = data.values();
    const Eigen::Index n = X.rows();
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);

    if (metric == Metric::Euclidean) {
        Eigen::VectorXd sq = X.rowwise().squaredNorm();
        D = sq.replicate(1, n) + sq.transpose().replicate(n, 1) - 2.0 * X * X.transpose();
        D = D.cwiseMax(0.0).cwiseSqrt();
    } else {
        Eigen::VectorXd norms = X.rowwise().norm();
        for (Eigen::Index i = 0; i < n; ++i)
            if (norms[i] == 0.0)
                throw DataError("cosine distance undefined for zero vector at row " +
                                std::to_string(i));
        Eigen::MatrixXd G = X * X.transpose();
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                D(i, j) = 1.0 - G(i, j) / (norms[i] * norms[j]);
        D = D.cwiseMax(0.0);
    }
    // Exact symmetry and zero diagonal regardless of rounding.
    D = ((D + D.transpose()) / 2.0).eval();
    D.diagonal().setZero();
    return D;
}

RelationGraph graph_from_matrix(const Eigen::MatrixXd& D, WeightSemantics semantics) {
    const Eigen::Index n = D.rows();
    if (D.cols() != n) throw DataError("matrix must be square");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (D(i, i) != 0.0) throw DataError("matrix diagonal must be zero");
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (D(i, j) != D(j, i)) throw DataError("matrix must be symmetric");
    }
    RelationGraph g(static_cast<int>(n), semantics);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            g.add_edge(static_cast<int>(i), static_cast<int>(j), D(i, j));
    return g;
}

Eigen::MatrixXd matrix_from_graph(const RelationGraph& g, double fill) {
    const int n = g.n_vertices();
    Eigen::MatrixXd D = Eigen::MatrixXd::Constant(n, n, fill);
    D.diagonal().setZero();
    for (const Edge& e : g.edges()) {
        D(e.u, e.v) = e.w;
        D(e.v, e.u) = e.w;
    }
    return D;
}

}  // namespace graphdr
