#include "graphdr/relate.hpp"

#include "graphdr/graphalg.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace graphdr;

TEST_CASE("pairwise_distance_graph") {
    Eigen::MatrixXd two(2, 2);
    two << 0, 0, 3, 4;
    auto g = pairwise_distance_graph(DataMatrix(two), Metric::Euclidean);
    CHECK(g.n_edges() == 1);
    CHECK(g.weight(0, 1) == doctest::Approx(5.0));

    auto X = oracles::random_matrix(10, 4, 3);
    DataMatrix data(X);
    auto D = distance_matrix(data, Metric::Euclidean);
    auto full = pairwise_distance_graph(data, Metric::Euclidean);
    CHECK(full.n_edges() == 45);
    for (const Edge& e : full.edges()) CHECK(e.w == D(e.u, e.v));
}

TEST_CASE("knn_graph union symmetrization") {
    Eigen::MatrixXd X(3, 1);
    X << 0.0, 1.0, 2.0;  // collinear, equally spaced
    auto g = knn_graph(DataMatrix(X), 1, Metric::Euclidean);
    CHECK(g.adjacency()[1].size() == 2);  // middle point picked by both ends
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(1, 2));
    CHECK(!g.has_edge(0, 2));

    CHECK_THROWS_AS(knn_graph(DataMatrix(X), 3, Metric::Euclidean), ConfigError);
}

TEST_CASE("knn_graph matches the brute-force rank-then-union oracle") {
    auto X = oracles::random_matrix(30, 5, 8);
    DataMatrix data(X);
    const int k = 5;
    auto g = knn_graph(data, k, Metric::Euclidean);
    auto D = distance_matrix(data, Metric::Euclidean);
    auto nn = oracles::brute_knn(D, k);

    std::set<std::pair<int, int>> expected;
    for (int i = 0; i < 30; ++i)
        for (int j : nn[i]) expected.insert({std::min(i, j), std::max(i, j)});
    CHECK(g.n_edges() == expected.size());
    for (auto [i, j] : expected) {
        CHECK(g.has_edge(i, j));
        CHECK(g.weight(i, j) == D(i, j));
    }
    for (int i = 0; i < 30; ++i) CHECK(g.adjacency()[i].size() >= k);
}

TEST_CASE("similarity_flip") {
    RelationGraph g(3, WeightSemantics::Dissimilarity);
    g.add_edge(0, 1, 2.0);
    g.add_edge(1, 2, 4.0);
    auto f = similarity_flip(g);
    CHECK(f.semantics() == WeightSemantics::Similarity);
    CHECK(f.weight(0, 1) == doctest::Approx(0.5));
    CHECK(f.weight(1, 2) == doctest::Approx(0.0));  // max weight maps to 0

    RelationGraph zeros(2, WeightSemantics::Dissimilarity);
    zeros.add_edge(0, 1, 0.0);
    CHECK_THROWS_AS(similarity_flip(zeros), DataError);
}

TEST_CASE("similarity_flip applied twice against a scalar oracle") {
    auto g = oracles::random_connected_graph(8, 0.6, 12);
    auto once = similarity_flip(g);
    auto twice = similarity_flip(once);
    double wmax1 = g.max_weight();
    double wmax2 = once.max_weight();
    for (const Edge& e : g.edges()) {
        double w1 = 1.0 - e.w / wmax1;
        double w2 = 1.0 - w1 / wmax2;
        CHECK(*twice.weight(e.u, e.v) == doctest::Approx(w2).epsilon(1e-12));
    }
}

TEST_CASE("snn_reweight") {
    // Cluster of 7 points far from everything else: the two closest share
    // all their neighbors.
    auto X = oracles::random_matrix(25, 4, 77);
    DataMatrix data(X);
    const int k = 6;
    auto g = snn_reweight(data, k, Metric::Euclidean);
    CHECK(g.semantics() == WeightSemantics::Similarity);

    auto D = distance_matrix(data, Metric::Euclidean);
    auto nn = oracles::brute_knn(D, k);
    for (const Edge& e : g.edges()) {
        int shared = 0;
        for (int a : nn[e.u])
            for (int b : nn[e.v])
                if (a == b) ++shared;
        CHECK(e.w == static_cast<double>(shared));
        CHECK(e.w <= k);
        CHECK(e.w == std::floor(e.w));  // integer weights
    }
}

TEST_CASE("snn extreme overlap cases") {
    // Two tight twin points inside a cluster share the full neighbor set.
    Eigen::MatrixXd X(8, 1);
    X << 0.0, 0.01, 0.02, 0.03, 0.04, 0.05, 100.0, 100.01;
    DataMatrix data(X);
    auto g = snn_reweight(data, 5, Metric::Euclidean);
    // 6 and 7 are each other's neighbors but share only cluster-far neighbors.
    auto D = distance_matrix(data, Metric::Euclidean);
    auto nn = oracles::brute_knn(D, 5);
    int shared67 = 0;
    for (int a : nn[6])
        for (int b : nn[7])
            if (a == b) ++shared67;
    CHECK(*g.weight(6, 7) == static_cast<double>(shared67));
}

TEST_CASE("perplexity calibration") {
    SUBCASE("equidistant neighbors give uniform probabilities") {
        Eigen::VectorXd row(4);
        row << 0.0, 1.0, 1.0, 1.0;
        auto res = perplexity_calibrate(row, 0, 3.0);
        for (int j = 1; j < 4; ++j) CHECK(res.p_conditional[j] == doctest::Approx(1.0 / 3.0));
        CHECK(res.p_conditional[0] == 0.0);
        CHECK(res.achieved_perplexity == doctest::Approx(3.0).epsilon(1e-3));
    }
    SUBCASE("achieved perplexity recomputed from the output row") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            auto X = oracles::random_matrix(20, 3, seed);
            auto D = oracles::naive_euclidean_distances(X);
            auto res = perplexity_calibrate(D.row(0), 0, 7.0);
            double h = 0.0, sum = 0.0;
            for (int j = 0; j < 20; ++j) {
                if (res.p_conditional[j] > 0) h -= res.p_conditional[j] * std::log2(res.p_conditional[j]);
                sum += res.p_conditional[j];
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(std::exp2(h) == doctest::Approx(7.0).epsilon(1e-3 / 7.0));
        }
    }
    SUBCASE("small perplexity concentrates on the near neighbor") {
        Eigen::VectorXd row(5);
        row << 0.0, 0.1, 10.0, 11.0, 12.0;
        auto res = perplexity_calibrate(row, 0, 1.01);
        CHECK(res.p_conditional[1] > 0.99);
        // Direct evaluation at the returned sigma reproduces the row.
        double s = res.sigma;
        double denom = 0.0;
        for (int j = 1; j < 5; ++j) denom += std::exp(-row[j] * row[j] / (2 * s * s));
        for (int j = 1; j < 5; ++j)
            CHECK(res.p_conditional[j] ==
                  doctest::Approx(std::exp(-row[j] * row[j] / (2 * s * s)) / denom));
    }
    SUBCASE("invalid targets rejected") {
        Eigen::VectorXd row(4);
        row << 0, 1, 2, 3;
        CHECK_THROWS_AS(perplexity_calibrate(row, 0, 0.5), ConfigError);
        CHECK_THROWS_AS(perplexity_calibrate(row, 0, 5.0), ConfigError);
    }
}

TEST_CASE("tsne_probability_graph") {
    auto X = oracles::random_matrix(15, 4, 31);
    DataMatrix data(X);
    auto g = tsne_probability_graph(data, 5.0, 0.0);
    CHECK(g.semantics() == WeightSemantics::Probability);
    CHECK(g.n_edges() == 15 * 14 / 2);  // epsilon 0: only exact zeros dropped

    // Per-pair recomputation from independent calibrations.
    auto D = distance_matrix(data, Metric::Euclidean);
    Eigen::MatrixXd P(15, 15);
    for (int i = 0; i < 15; ++i) P.row(i) = perplexity_calibrate(D.row(i), i, 5.0).p_conditional;
    for (const Edge& e : g.edges()) {
        CHECK(e.w == doctest::Approx((P(e.u, e.v) + P(e.v, e.u)) / 2.0).epsilon(1e-12));
        CHECK(*g.weight(e.u, e.v) == *g.weight(e.v, e.u));
    }

    // Weight total is the symmetrization identity: each conditional row sums
    // to 1, so the unpruned total is N/2... divided over ordered pairs.
    CHECK(g.total_weight() == doctest::Approx(15.0 / 2.0).epsilon(1e-9));

    auto pruned = tsne_probability_graph(data, 5.0, 1e-2);
    CHECK(pruned.n_edges() < g.n_edges());
    for (const Edge& e : pruned.edges()) CHECK(e.w >= 1e-2);
}

TEST_CASE("umap_fuzzy_graph") {
    auto X = oracles::random_matrix(20, 3, 9);
    DataMatrix data(X);
    auto g = umap_fuzzy_graph(data, 5);
    CHECK(g.semantics() == WeightSemantics::Probability);
    for (const Edge& e : g.edges()) {
        CHECK(e.w > 0.0);
        CHECK(e.w <= 1.0);
    }

    // The edge to each point's nearest neighbor carries the absorbing
    // membership 1: union(1, x) == 1.
    auto D = distance_matrix(data, Metric::Euclidean);
    auto nn = oracles::brute_knn(D, 1);
    for (int i = 0; i < 20; ++i) CHECK(*g.weight(i, nn[i][0]) == doctest::Approx(1.0));

    CHECK_THROWS_AS(umap_fuzzy_graph(data, 1), ConfigError);
    CHECK_THROWS_AS(umap_fuzzy_graph(data, 20), ConfigError);
}

TEST_CASE("fuzzy union arithmetic") {
    // a + b - ab with a == 1 absorbs any b in [0,1].
    for (double b : {0.0, 0.3, 0.99, 1.0}) CHECK(1.0 + b - 1.0 * b == doctest::Approx(1.0));
}

TEST_CASE("geodesic_complete_graph") {
    RelationGraph path(3, WeightSemantics::Dissimilarity);
    path.add_edge(0, 1, 1.0);
    path.add_edge(1, 2, 1.0);
    auto geo = geodesic_complete_graph(path);
    CHECK(geo.n_edges() == 3);
    CHECK(*geo.weight(0, 2) == doctest::Approx(2.0));
    CHECK(*geo.weight(0, 1) == doctest::Approx(1.0));  // direct edge is shortest

    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto g = oracles::random_connected_graph(12, 0.3, seed + 200);
        auto geod = geodesic_complete_graph(g);
        auto ref = oracles::floyd_warshall(g);
        CHECK(geod.n_edges() == 12 * 11 / 2);
        for (const Edge& e : geod.edges())
            CHECK(e.w == doctest::Approx(ref(e.u, e.v)).epsilon(1e-12));
        // Shortest-path metric satisfies the triangle inequality exactly.
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 12; ++j)
                for (int k = 0; k < 12; ++k)
                    if (i != j && j != k && i != k)
                        CHECK(*geod.weight(i, j) <=
                              *geod.weight(i, k) + *geod.weight(k, j) + 1e-12);
    }

    RelationGraph split(4, WeightSemantics::Dissimilarity);
    split.add_edge(0, 1, 1.0);
    split.add_edge(2, 3, 1.0);
    CHECK_THROWS_WITH_AS(geodesic_complete_graph(split),
                         doctest::Contains("2 components"), DataError);
}

TEST_CASE("mst_backbone") {
    RelationGraph tri(3, WeightSemantics::Dissimilarity);
    tri.add_edge(0, 1, 1.0);
    tri.add_edge(1, 2, 2.0);
    tri.add_edge(0, 2, 3.0);
    auto backbone = mst_backbone(tri);
    CHECK(backbone.n_edges() == 2);
    CHECK(backbone.has_edge(0, 1));
    CHECK(backbone.has_edge(1, 2));

    // A tree maps to itself.
    auto again = mst_backbone(backbone);
    CHECK(again.n_edges() == backbone.n_edges());
    for (const Edge& e : backbone.edges()) CHECK(again.has_edge(e.u, e.v));

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto g = oracles::random_connected_graph(7, 1.0, seed + 300);
        auto t = mst_backbone(g);
        CHECK(t.total_weight() ==
              doctest::Approx(oracles::exhaustive_mst_weight(g)).epsilon(1e-12));
    }
}

TEST_CASE("backbone_strengthen") {
    auto g = oracles::random_connected_graph(10, 0.7, 17);
    auto backbone = mst_backbone(g);

    auto identity = backbone_strengthen(g, backbone, 1.0);
    for (const Edge& e : g.edges()) CHECK(*identity.weight(e.u, e.v) == e.w);

    auto strengthened = backbone_strengthen(g, backbone, 2.0);
    for (const Edge& e : g.edges()) {
        double expected = backbone.has_edge(e.u, e.v) ? e.w / 2.0 : e.w;
        CHECK(*strengthened.weight(e.u, e.v) == doctest::Approx(expected));
    }

    // After strengthening, the backbone is still (the) MST of the result.
    auto new_backbone = mst_backbone(strengthened);
    CHECK(new_backbone.n_edges() == backbone.n_edges());
    for (const Edge& e : backbone.edges()) CHECK(new_backbone.has_edge(e.u, e.v));

    RelationGraph other(10, WeightSemantics::Dissimilarity);
    other.add_edge(0, 9, 1.0);
    if (!g.has_edge(0, 9))
        CHECK_THROWS_AS(backbone_strengthen(g, other, 2.0), DataError);
    CHECK_THROWS_AS(backbone_strengthen(g, backbone, 0.0), ConfigError);
}
