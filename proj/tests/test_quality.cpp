#include "graphdr/quality.hpp"

#include "graphdr/relate.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace graphdr;

TEST_CASE("shape graph of a layout equals the knn graph of its coordinates") {
    auto Y = oracles::random_matrix(25, 2, 2000);
    Layout layout(Y);
    auto shape = shape_graph(layout, 4);
    auto ref = knn_graph(DataMatrix(Y), 4, Metric::Euclidean);
    CHECK(shape.n_edges() == ref.n_edges());
    for (const Edge& e : ref.edges()) CHECK(shape.has_edge(e.u, e.v));
}

TEST_CASE("faithfulness basics") {
    RelationGraph a(4, WeightSemantics::Dissimilarity);
    a.add_edge(0, 1, 1.0);
    a.add_edge(2, 3, 1.0);
    CHECK(faithfulness(a, a) == 1.0);

    RelationGraph b(4, WeightSemantics::Dissimilarity);
    b.add_edge(0, 2, 1.0);
    CHECK(faithfulness(a, b) == 0.0);  // disjoint edge sets

    RelationGraph c(4, WeightSemantics::Dissimilarity);
    c.add_edge(0, 1, 9.0);  // weights are ignored
    CHECK(faithfulness(a, c) == doctest::Approx(0.5));
    CHECK(faithfulness(a, c) == faithfulness(c, a));  // symmetric

    RelationGraph empty1(4, WeightSemantics::Dissimilarity);
    RelationGraph empty2(4, WeightSemantics::Similarity);
    CHECK(faithfulness(empty1, empty2) == 1.0);
    CHECK(faithfulness(empty1, a) == 0.0);

    RelationGraph other_n(5, WeightSemantics::Dissimilarity);
    CHECK_THROWS_AS(faithfulness(a, other_n), DataError);
}

TEST_CASE("faithfulness matches the set oracle on random graph pairs") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto a = oracles::random_connected_graph(10, 0.3, seed * 2 + 2100);
        auto b = oracles::random_connected_graph(10, 0.3, seed * 2 + 2101);
        CHECK(faithfulness(a, b) ==
              doctest::Approx(oracles::brute_faithfulness(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("stress closed forms") {
    auto X = oracles::random_matrix(10, 3, 2200);
    auto D = oracles::naive_euclidean_distances(X);
    // Perfect layout: embed the points themselves (needs dim <= 3).
    CHECK(stress(Layout(X), D) == doctest::Approx(0.0));
    // Uniform doubling of every layout distance: sqrt(sum(2d-d)^2/sum d^2) = 1.
    CHECK(stress(Layout(Eigen::MatrixXd(2.0 * X)), D) == doctest::Approx(1.0));
    // Collapsing the layout to a point also gives exactly 1.
    CHECK(stress(Layout(Eigen::MatrixXd::Zero(10, 2)), D) == doctest::Approx(1.0));

    CHECK_THROWS_AS(stress(Layout(X), Eigen::MatrixXd::Zero(10, 10)), DataError);
}

TEST_CASE("stress matches the brute oracle") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto X = oracles::random_matrix(12, 5, seed + 2300);
        auto Y = oracles::random_matrix(12, 2, seed + 2350);
        auto D = oracles::naive_euclidean_distances(X);
        CHECK(stress(Layout(Y), D) ==
              doctest::Approx(oracles::brute_stress(Y, D)).epsilon(1e-12));
    }
}

TEST_CASE("neighborhood preservation extremes") {
    auto X = oracles::random_matrix(12, 2, 2400);
    DataMatrix data(X);
    // The layout equal to the data preserves every neighborhood.
    CHECK(neighborhood_preservation(data, Layout(X), 3) == doctest::Approx(1.0));

    // A layout that reverses the ranking along a line destroys small
    // neighborhoods: with k=1 nothing is preserved for interior points.
    Eigen::MatrixXd line(6, 1);
    line << 0, 1, 2, 3, 10, 11;
    Eigen::MatrixXd hostile(6, 2);
    // Pair 0 with 3, 1 with 4, 2 with 5: every nearest layout neighbor
    // differs from the nearest data neighbor.
    hostile << 0, 0, 10, 0, 20, 0, 0.1, 0, 10.1, 0, 20.1, 0;
    double np = neighborhood_preservation(DataMatrix(line), Layout(hostile), 1);
    CHECK(np == doctest::Approx(0.0));
}

TEST_CASE("neighborhood preservation matches the brute oracle") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto X = oracles::random_matrix(12, 4, seed + 2500);
        auto Y = oracles::random_matrix(12, 2, seed + 2550);
        auto Dd = oracles::naive_euclidean_distances(X);
        auto Dl = oracles::naive_euclidean_distances(Y);
        int k = 1 + static_cast<int>(seed % 5);
        CHECK(neighborhood_preservation(DataMatrix(X), Layout(Y), k) ==
              doctest::Approx(oracles::brute_neighborhood_preservation(Dd, Dl, k))
                  .epsilon(1e-12));
    }
}

TEST_CASE("trustworthiness extremes and validation") {
    auto X = oracles::random_matrix(14, 2, 2600);
    DataMatrix data(X);
    CHECK(trustworthiness(data, Layout(X), 3) == doctest::Approx(1.0));
    CHECK_THROWS_AS(trustworthiness(data, Layout(X), 7), ConfigError);  // k >= N/2
}

TEST_CASE("trustworthiness matches the brute oracle") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto X = oracles::random_matrix(12, 4, seed + 2700);
        auto Y = oracles::random_matrix(12, 2, seed + 2750);
        auto Dd = oracles::naive_euclidean_distances(X);
        auto Dl = oracles::naive_euclidean_distances(Y);
        int k = 1 + static_cast<int>(seed % 5);
        double got = trustworthiness(DataMatrix(X), Layout(Y), k);
        CHECK(got == doctest::Approx(oracles::brute_trustworthiness(Dd, Dl, k))
                         .epsilon(1e-12));
        CHECK(got >= 0.0);
        CHECK(got <= 1.0);
    }
}

TEST_CASE("neighbor hit extremes") {
    // Two well-separated blobs with matching labels score 1.
    Eigen::MatrixXd Y(8, 2);
    Y << 0, 0, 0.1, 0, 0, 0.1, 0.1, 0.1, 50, 50, 50.1, 50, 50, 50.1, 50.1, 50.1;
    std::vector<int> labels = {0, 0, 0, 0, 1, 1, 1, 1};
    CHECK(neighbor_hit(Layout(Y), labels, 3) == doctest::Approx(1.0));

    // Interleaved labels along a line with k=1 score 0.
    Eigen::MatrixXd line(6, 2);
    line << 0, 0, 1, 0, 2, 0, 3, 0, 4, 0, 5, 0;
    std::vector<int> alternating = {0, 1, 0, 1, 0, 1};
    CHECK(neighbor_hit(Layout(line), alternating, 1) == doctest::Approx(0.0));

    CHECK_THROWS_AS(neighbor_hit(Layout(Y), std::vector<int>{0, 1}, 3), DataError);
}

TEST_CASE("neighbor hit on random labels is near one half") {
    auto Y = oracles::random_matrix(400, 2, 2800);
    std::mt19937_64 rng(7);
    std::vector<int> labels(400);
    for (auto& l : labels) l = static_cast<int>(rng() % 2);
    double h = neighbor_hit(Layout(Y), labels, 10);
    CHECK(h > 0.4);
    CHECK(h < 0.6);
}

TEST_CASE("neighbor hit matches the brute oracle") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto Y = oracles::random_matrix(12, 2, seed + 2900);
        std::mt19937_64 rng(seed);
        std::vector<int> labels(12);
        for (auto& l : labels) l = static_cast<int>(rng() % 3);
        auto Dl = oracles::naive_euclidean_distances(Y);
        int k = 1 + static_cast<int>(seed % 4);
        CHECK(neighbor_hit(Layout(Y), labels, k) ==
              doctest::Approx(oracles::brute_neighbor_hit(Dl, labels, k)).epsilon(1e-12));
    }
}

TEST_CASE("metric ranges under fuzzing") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto X = oracles::random_matrix(15, 6, seed + 3000);
        auto Y = oracles::random_matrix(15, 2, seed + 3050);
        DataMatrix data(X);
        Layout layout(Y);
        auto D = distance_matrix(data, Metric::Euclidean);
        double f = faithfulness(knn_graph(data, 4, Metric::Euclidean), shape_graph(layout, 4));
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        CHECK(stress(layout, D) >= 0.0);
        double np = neighborhood_preservation(data, layout, 4);
        CHECK(np >= 0.0);
        CHECK(np <= 1.0);
    }
}

TEST_CASE("centrality overlay dispatch") {
    auto g = oracles::random_connected_graph(9, 0.4, 3100);
    auto cl = centrality_overlay(g, CentralityKind::Closeness);
    auto ref = closeness_centrality(g, EdgeCost::HopCount);
    CHECK(cl.values == ref.values);
    auto bt = centrality_overlay(g, CentralityKind::Betweenness);
    CHECK(bt.values == betweenness_centrality(g, EdgeCost::HopCount).values);
}
