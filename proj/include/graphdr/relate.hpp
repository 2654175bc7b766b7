#ifndef GRAPHDR_RELATE_HPP
#define GRAPHDR_RELATE_HPP

#include "graphdr/core.hpp"

namespace graphdr {

/// Complete dissimilarity graph, w(i,j) = delta_ij.
RelationGraph pairwise_distance_graph(const DataMatrix& data, Metric metric);

/// Indices of the k nearest neighbors of each row, self excluded.
/// Ties broken by (distance, smaller index).
std::vector<std::vector<int>> knn_indices(const Eigen::MatrixXd& D, int k);

/// Symmetrized-union k-NN graph: edge (i,j) iff j in kNN(i) or i in kNN(j).
RelationGraph knn_graph(const DataMatrix& data, int k, Metric metric);

/// w' = 1 - w / w_max. Rejects graphs whose max weight is zero.
RelationGraph similarity_flip(const RelationGraph& g);

/// Shared-nearest-neighbor weights over the symmetrized k-NN edge set:
/// w(i,j) = |kNN(i) intersect kNN(j)|, an integer in [0, k].
RelationGraph snn_reweight(const DataMatrix& data, int k, Metric metric);

struct CalibrationResult {
    double sigma;
    double achieved_perplexity;
    Eigen::VectorXd p_conditional;  // p_{j|i}; p_{i|i} = 0; sums to 1
};

struct PerplexityCalibration {
    std::vector<double> sigma;
    std::vector<double> achieved_perplexity;
};

/// Bisection on the Gaussian bandwidth so that 2^H(P_i) hits the target.
/// Tolerance 1e-5 on log2-perplexity, at most 100 steps.
CalibrationResult perplexity_calibrate(const Eigen::VectorXd& distance_row, int self_index,
                                       double target_perplexity);

/// Symmetrized conditional probabilities p_ij = (p_{j|i} + p_{i|j}) / 2,
/// edges below prune_epsilon dropped.
RelationGraph tsne_probability_graph(const DataMatrix& data, double perplexity,
                                     double prune_epsilon = 1e-8,
                                     Metric metric = Metric::Euclidean,
                                     PerplexityCalibration* calibration_out = nullptr);

/// Fuzzy k-NN membership graph: directed memberships
/// exp(-max(0, d - rho_i) / sigma_i) with sigma_i solved so the row sums to
/// log2(n_neighbors); symmetrized by fuzzy union a + b - ab.
RelationGraph umap_fuzzy_graph(const DataMatrix& data, int n_neighbors,
                               Metric metric = Metric::Euclidean);

/// Complete graph of shortest-path lengths within `knn`.
RelationGraph geodesic_complete_graph(const RelationGraph& knn);

/// Minimum spanning tree of a connected dissimilarity graph.
RelationGraph mst_backbone(const RelationGraph& g);

/// Divide backbone edge weights by `factor` (shorter = stronger for
/// dissimilarities); other edges untouched.
RelationGraph backbone_strengthen(const RelationGraph& g, const RelationGraph& backbone,
                                  double factor);

}  // namespace graphdr

#endif
