#ifndef GRAPHDR_GRAPHALG_HPP
#define GRAPHDR_GRAPHALG_HPP

#include "graphdr/core.hpp"

namespace graphdr {

enum class CentralityKind { Closeness, Betweenness };

struct CentralityVector {
    std::vector<double> values;
    CentralityKind kind;
};

/// Edge-weight interpretation for shortest-path based algorithms.
/// Similarity/probability weights are not path costs; callers pick the
/// conversion explicitly.
enum class EdgeCost {
    Weight,        // use edge weight as-is (dissimilarity graphs)
    HopCount,      // every edge costs 1
    OneMinusWeight // cost = 1 - w (similarity/probability graphs)
};

double edge_cost(double w, EdgeCost mode);

/// Dijkstra. Unreachable vertices get +infinity. Negative costs rejected.
std::vector<double> single_source_shortest_paths(const RelationGraph& g, int source,
                                                 EdgeCost cost = EdgeCost::Weight);

/// Component ids, contiguous from 0 in order of first appearance.
std::vector<int> connected_components(const RelationGraph& g);
int count_components(const RelationGraph& g);

/// Kruskal MST; edges of the tree. Ties broken by (weight, u, v) so the
/// result is independent of input edge order.
std::vector<Edge> minimum_spanning_tree(const RelationGraph& g);

/// (n_reach - 1) / sum of distances to reachable vertices; 0 for isolated
/// vertices. Component-local normalization when the graph is disconnected.
CentralityVector closeness_centrality(const RelationGraph& g, EdgeCost cost = EdgeCost::HopCount);

/// Brandes accumulation; unordered-pair counting. Exact, not sampled.
CentralityVector betweenness_centrality(const RelationGraph& g, EdgeCost cost = EdgeCost::HopCount);

}  // namespace graphdr

#endif
