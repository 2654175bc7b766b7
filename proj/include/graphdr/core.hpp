#ifndef GRAPHDR_CORE_HPP
#define GRAPHDR_CORE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace graphdr {

// Error categories map to CLI exit codes (config=2, data=3, numeric=4).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Metric { Euclidean, Cosine };

enum class WeightSemantics { Dissimilarity, Similarity, Probability };

std::string to_string(WeightSemantics s);
WeightSemantics semantics_from_string(const std::string& s);
std::string to_string(Metric m);
Metric metric_from_string(const std::string& s);

/// N x m feature table with optional integer class labels.
class DataMatrix {
  public:
    DataMatrix(Eigen::MatrixXd values, std::optional<std::vector<int>> labels = std::nullopt);

    Eigen::Index rows() const { return values_.rows(); }
    Eigen::Index cols() const { return values_.cols(); }
    const Eigen::MatrixXd& values() const { return values_; }
    const std::optional<std::vector<int>>& labels() const { return labels_; }
    Eigen::RowVectorXd row(Eigen::Index i) const { return values_.row(i); }

  private:
    Eigen::MatrixXd values_;
    std::optional<std::vector<int>> labels_;
};

/// Undirected weighted edge, canonically stored with u < v.
struct Edge {
    int u;
    int v;
    double w;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected weighted graph over data-item indices. Vertex ids are the
/// stable row indices of the DataMatrix the graph was built from.
class RelationGraph {
  public:
    RelationGraph(int n_vertices, WeightSemantics semantics);
    RelationGraph(int n_vertices, WeightSemantics semantics, std::vector<Edge> edges);

    int n_vertices() const { return n_vertices_; }
    WeightSemantics semantics() const { return semantics_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t n_edges() const { return edges_.size(); }

    // Rejects self loops, out-of-range ids, duplicates and non-finite weights.
    void add_edge(int i, int j, double w);

    // Symmetric lookup; nullopt when the pair is not connected.
    std::optional<double> weight(int i, int j) const;
    bool has_edge(int i, int j) const { return weight(i, j).has_value(); }

    // Adjacency lists (neighbor, weight), built once on demand.
    const std::vector<std::vector<std::pair<int, double>>>& adjacency() const;

    double total_weight() const;
    double max_weight() const;

    /// Same topology, new weights produced by fn(edge).
    template <class Fn>
    RelationGraph map_weights(WeightSemantics new_semantics, Fn&& fn) const {
        RelationGraph out(n_vertices_, new_semantics);
        out.edges_.reserve(edges_.size());
        for (const Edge& e : edges_) out.add_edge(e.u, e.v, fn(e));
        return out;
    }

  private:
    void check_edge(int i, int j, double w) const;
    std::uint64_t pair_key(int i, int j) const {
        return static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n_vertices_) +
               static_cast<std::uint64_t>(j);
    }

    int n_vertices_;
    WeightSemantics semantics_;
    std::vector<Edge> edges_;
    std::unordered_map<std::uint64_t, double> weight_by_pair_;
    mutable std::vector<std::vector<std::pair<int, double>>> adj_;
    mutable bool adj_built_ = false;
};

/// N x dim visual-space coordinates, dim in {2, 3}.
class Layout {
  public:
    Layout(Eigen::MatrixXd coords);

    Eigen::Index n_points() const { return coords_.rows(); }
    int dim() const { return static_cast<int>(coords_.cols()); }
    const Eigen::MatrixXd& coords() const { return coords_; }
    Eigen::MatrixXd& coords() { return coords_; }

  private:
    Eigen::MatrixXd coords_;
};

struct QualityReport {
    std::map<std::string, double> scalars;
    std::map<std::string, std::vector<double>> per_node;
};

/// Pairwise dissimilarities; symmetric, zero diagonal, nonnegative.
Eigen::MatrixXd distance_matrix(const DataMatrix& data, Metric metric);

/// Complete graph from a symmetric zero-diagonal matrix.
RelationGraph graph_from_matrix(const Eigen::MatrixXd& D, WeightSemantics semantics);

/// Dense matrix view of a graph; missing edges become fill (default 0).
Eigen::MatrixXd matrix_from_graph(const RelationGraph& g, double fill = 0.0);

}  // namespace graphdr

#endif
