#include "graphdr/graphalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

namespace graphdr {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double edge_cost(double w, EdgeCost mode) {
    switch (mode) {
        case EdgeCost::Weight: return w;
        case EdgeCost::HopCount: return 1.0;
        case EdgeCost::OneMinusWeight: return 1.0 - w;
    }
    throw std::logic_error("unknown edge cost mode");
}

std::vector<double> single_source_shortest_paths(const RelationGraph& g, int source,
                                                 EdgeCost cost) {
    const int n = g.n_vertices();
    if (source < 0 || source >= n) throw DataError("source vertex out of range");
    for (const Edge& e : g.edges())
        if (edge_cost(e.w, cost) < 0.0) throw DataError("negative edge cost rejected");

    const auto& adj = g.adjacency();
    std::vector<double> dist(n, kInf);
    dist[source] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0.0, source});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (auto [v, w] : adj[u]) {
            double nd = d + edge_cost(w, cost);
            if (nd < dist[v]) {
                dist[v] = nd;
                pq.push({nd, v});
            }
        }
    }
    return dist;
}

std::vector<int> connected_components(const RelationGraph& g) {
    const int n = g.n_vertices();
    const auto& adj = g.adjacency();
    std::vector<int> comp(n, -1);
    int next_id = 0;
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
        if (comp[s] != -1) continue;
        comp[s] = next_id;
        stack.push_back(s);
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (auto [v, w] : adj[u]) {
                if (comp[v] == -1) {
                    comp[v] = next_id;
                    stack.push_back(v);
                }
            }
        }
        ++next_id;
    }
    return comp;
}

int count_components(const RelationGraph& g) {
    auto comp = connected_components(g);
    return comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
}

std::vector<Edge> minimum_spanning_tree(const RelationGraph& g) {
    const int n = g.n_vertices();
    int ncomp = count_components(g);
    if (ncomp != 1)
        throw DataError("MST requires a connected graph (" + std::to_string(ncomp) +
                        " components)");

    std::vector<Edge> sorted = g.edges();
    std::sort(sorted.begin(), sorted.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.w, a.u, a.v) < std::tie(b.w, b.u, b.v);
    });

    // Union-find with path halving.
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    std::vector<Edge> tree;
    tree.reserve(n - 1);
    for (const Edge& e : sorted) {
        int ru = find(e.u), rv = find(e.v);
        if (ru == rv) continue;
        parent[ru] = rv;
        tree.push_back(e);
        if (static_cast<int>(tree.size()) == n - 1) break;
    }
    return tree;
}

CentralityVector closeness_centrality(const RelationGraph& g, EdgeCost cost) {
    const int n = g.n_vertices();
    std::vector<double> values(n, 0.0);
    for (int i = 0; i < n; ++i) {
        auto dist = single_source_shortest_paths(g, i, cost);
        double sum = 0.0;
        int reach = 0;
        for (int j = 0; j < n; ++j) {
            if (j == i || dist[j] == kInf) continue;
            sum += dist[j];
            ++reach;
        }
        values[i] = (reach > 0 && sum > 0.0) ? reach / sum : 0.0;
    }
    return {std::move(values), CentralityKind::Closeness};
}

CentralityVector betweenness_centrality(const RelationGraph& g, EdgeCost cost) {
    const int n = g.n_vertices();
    const auto& adj = g.adjacency();
    for (const Edge& e : g.edges())
        if (edge_cost(e.w, cost) < 0.0) throw DataError("negative edge cost rejected");

    std::vector<double> bc(n, 0.0);
    std::vector<double> dist(n), sigma(n), delta(n);
    std::vector<std::vector<int>> pred(n);
    std::vector<int> order;
    order.reserve(n);

    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), kInf);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto& p : pred) p.clear();
        order.clear();

        dist[s] = 0.0;
        sigma[s] = 1.0;
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        pq.push({0.0, s});
        std::vector<char> settled(n, 0);
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (settled[u]) continue;
            settled[u] = 1;
            order.push_back(u);
            for (auto [v, w] : adj[u]) {
                double c = edge_cost(w, cost);
                double nd = d + c;
                constexpr double eps = 1e-12;
                if (nd < dist[v] - eps) {
                    dist[v] = nd;
                    sigma[v] = sigma[u];
                    pred[v] = {u};
                    pq.push({nd, v});
                } else if (std::abs(nd - dist[v]) <= eps) {
                    sigma[v] += sigma[u];
                    pred[v].push_back(u);
                }
            }
        }

        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            int w = *it;
            for (int v : pred[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            if (w != s) bc[w] += delta[w];
        }
    }
    // Each unordered pair was counted from both endpoints.
    for (double& v : bc) v /= 2.0;
    return {std::move(bc), CentralityKind::Betweenness};
}

}  // namespace graphdr
