#ifndef GRAPHDR_QUALITY_HPP
#define GRAPHDR_QUALITY_HPP

#include "graphdr/core.hpp"
#include "graphdr/graphalg.hpp"

namespace graphdr {

/// Symmetrized-union k-NN graph over layout coordinates.
RelationGraph shape_graph(const Layout& layout, int k);

/// Jaccard similarity of the two edge sets, weights ignored.
/// Two empty edge sets count as identical (1.0).
double faithfulness(const RelationGraph& g1, const RelationGraph& g2);

/// Kruskal stress-1 between layout distances and source dissimilarities.
double stress(const Layout& layout, const Eigen::MatrixXd& D);

/// Mean fraction of data-space k-NN retained among layout k-NN.
double neighborhood_preservation(const DataMatrix& data, const Layout& layout, int k);

/// Venna-Kaski trustworthiness; penalizes layout neighbors that rank far
/// away in data space. Requires k < N/2.
double trustworthiness(const DataMatrix& data, const Layout& layout, int k);

/// Mean fraction of layout k-NN sharing each item's label.
double neighbor_hit(const Layout& layout, const std::vector<int>& labels, int k);

/// Centrality scores attached to a report for rendering.
CentralityVector centrality_overlay(const RelationGraph& g, CentralityKind kind,
                                    EdgeCost cost = EdgeCost::HopCount);

}  // namespace graphdr

#endif
