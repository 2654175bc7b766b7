#ifndef GRAPHDR_EMBED_HPP
#define GRAPHDR_EMBED_HPP

#include "graphdr/core.hpp"

namespace graphdr {

enum class InitMethod { Random, PCA, Given };
enum class RepulsionMode { Exact, BarnesHut };

struct EmbedParams {
    int iterations = 500;
    double learning_rate = 200.0;
    std::uint64_t seed = 42;
    InitMethod init = InitMethod::Random;
    std::optional<Eigen::MatrixXd> given_init;  // used when init == Given
    double exaggeration_factor = 12.0;
    int exaggeration_duration = 250;
    int negative_samples = 5;
    RepulsionMode repulsion = RepulsionMode::Exact;
    double theta = 0.5;
    int dim = 2;

    void validate() const;
};

/// Double-center -1/2 J D^2 J and take the top-dim eigenpairs. Deterministic
/// up to the fixed sign convention (largest-magnitude entry positive). Pads
/// with zero coordinates when fewer than dim positive eigenvalues exist.
Layout classical_mds(const Eigen::MatrixXd& D, int dim);

/// Projection onto the top-dim principal components of the mean-centered
/// data, same sign convention as classical_mds.
Layout pca_init(const DataMatrix& data, int dim);

/// Fruchterman-Reingold. Attraction along edges scaled by weight, repulsion
/// between all pairs, displacement capped by a linearly cooling temperature.
Layout spring_layout(const RelationGraph& g, const EmbedParams& params,
                     const DataMatrix* data = nullptr);

/// Gradient descent on the Sammon stress with backtracking step control;
/// the stress is monotone non-increasing across iterations.
Layout sammon_embed(const Eigen::MatrixXd& D, const EmbedParams& params,
                    const DataMatrix* data = nullptr);

/// Symmetric SNE: Gaussian low-dimensional kernel, KL divergence objective.
Layout sne_embed(const RelationGraph& g, const EmbedParams& params,
                 const DataMatrix* data = nullptr);

/// t-SNE: Student-t low-dimensional kernel with early exaggeration and
/// optional Barnes-Hut repulsion.
Layout tsne_embed(const RelationGraph& g, const EmbedParams& params,
                  const DataMatrix* data = nullptr);

/// Edge-wise stochastic optimization with uniform negative sampling and a
/// learning rate decaying linearly to zero.
Layout negative_sampling_embed(const RelationGraph& g, const EmbedParams& params,
                               const DataMatrix* data = nullptr);

struct RepulsionResult {
    Eigen::MatrixXd forces;  // per point: sum_j q'_ij^2 (y_i - y_j), q' = (1+d^2)^-1
    double z;                // sum over ordered pairs of q'_ij
};

/// Quadtree/octree approximation of Student-t repulsion; cells with
/// size/distance < theta are treated as point masses at their centroid.
RepulsionResult barnes_hut_repulsion(const Layout& layout, double theta);

/// Exact O(N^2) counterpart of barnes_hut_repulsion.
RepulsionResult exact_repulsion(const Layout& layout);

// Objectives, exposed for gradient checking and convergence reporting.
double sammon_stress(const Eigen::MatrixXd& coords, const Eigen::MatrixXd& D);
double sne_kl_divergence(const Eigen::MatrixXd& coords, const Eigen::MatrixXd& P);
double tsne_kl_divergence(const Eigen::MatrixXd& coords, const Eigen::MatrixXd& P);

/// Ordered-pair probability matrix from a probability graph, normalized so
/// the off-diagonal entries sum to 1.
Eigen::MatrixXd normalized_probabilities(const RelationGraph& g);

Eigen::MatrixXd sammon_gradient(const Eigen::MatrixXd& coords, const Eigen::MatrixXd& D);
Eigen::MatrixXd sne_gradient(const Eigen::MatrixXd& coords, const Eigen::MatrixXd& P);
Eigen::MatrixXd tsne_gradient(const Eigen::MatrixXd& coords, const Eigen::MatrixXd& P);

}  // namespace graphdr

#endif
