#include "graphdr/graphalg.hpp"
#include "graphdr/io.hpp"
#include "graphdr/quality.hpp"
#include "graphdr/relate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

using namespace graphdr;

namespace {

void add_input_options(CLI::App* cmd, PipelineConfig& cfg, std::string& input) {
    cmd->add_option("-i,--input", input, "input CSV file")->required();
    cmd->add_flag("--has-header", cfg.has_header, "first CSV row is a header");
    cmd->add_option("--label-column", cfg.label_column,
                    "label column (header name or 0-based index)");
    cmd->add_option_function<std::string>(
           "--metric", [&cfg](const std::string& v) { cfg.metric = metric_from_string(v); },
           "distance metric: euclidean|cosine")
        ->default_str("euclidean");
}

void add_relate_options(CLI::App* cmd, PipelineConfig& cfg) {
    cmd->add_option("--recipe", cfg.recipe,
                    "relationship recipe: complete|knn|snn|tsne|umap|geodesic|mst")
        ->default_val(cfg.recipe);
    cmd->add_option("--k", cfg.k, "neighbor count for knn/snn/geodesic")->default_val(cfg.k);
    cmd->add_option("--perplexity", cfg.perplexity, "t-SNE perplexity")
        ->default_val(cfg.perplexity);
    cmd->add_option("--n-neighbors", cfg.n_neighbors, "UMAP neighborhood size")
        ->default_val(cfg.n_neighbors);
    cmd->add_option("--prune-epsilon", cfg.prune_epsilon,
                    "drop probability edges below this value")
        ->default_val(cfg.prune_epsilon);
    cmd->add_flag("--flip", cfg.flip, "convert dissimilarities to similarities (1 - w/w_max)");
    cmd->add_option("--strengthen-factor", cfg.strengthen_factor,
                    "divide MST backbone weights by this factor (0 = off)")
        ->default_val(cfg.strengthen_factor);
}

void add_embed_options(CLI::App* cmd, PipelineConfig& cfg, std::string& init) {
    cmd->add_option("--method", cfg.method,
                    "embedding method: none|mds|pca|spring|sammon|sne|tsne|negative_sampling")
        ->default_val(cfg.method);
    cmd->add_option("--iterations", cfg.embed.iterations, "optimization iterations")
        ->default_val(cfg.embed.iterations);
    cmd->add_option("--learning-rate", cfg.embed.learning_rate, "gradient step size")
        ->default_val(cfg.embed.learning_rate);
    cmd->add_option("--init", init, "initialization: random|pca|given")->default_val("random");
    cmd->add_option("--init-path", cfg.init_layout_path, "layout CSV used when --init given");
    cmd->add_option("--exaggeration-factor", cfg.embed.exaggeration_factor,
                    "early exaggeration multiplier (t-SNE)")
        ->default_val(cfg.embed.exaggeration_factor);
    cmd->add_option("--exaggeration-duration", cfg.embed.exaggeration_duration,
                    "early exaggeration iterations (t-SNE)")
        ->default_val(cfg.embed.exaggeration_duration);
    cmd->add_option("--negative-samples", cfg.embed.negative_samples,
                    "negative samples per edge")
        ->default_val(cfg.embed.negative_samples);
    cmd->add_option_function<std::string>(
           "--repulsion",
           [&cfg](const std::string& v) {
               if (v == "exact") cfg.embed.repulsion = RepulsionMode::Exact;
               else if (v == "barnes_hut") cfg.embed.repulsion = RepulsionMode::BarnesHut;
               else throw CLI::ValidationError("--repulsion", "must be exact or barnes_hut");
           },
           "repulsion evaluation: exact|barnes_hut")
        ->default_str("exact");
    cmd->add_option("--theta", cfg.embed.theta, "Barnes-Hut accuracy parameter")
        ->default_val(cfg.embed.theta);
    cmd->add_option("--dim", cfg.embed.dim, "embedding dimension (2 or 3)")
        ->default_val(cfg.embed.dim);
    cmd->add_option("--seed", cfg.seed, "random seed")->default_val(cfg.seed);
}

InitMethod parse_init(const std::string& init) {
    if (init == "random") return InitMethod::Random;
    if (init == "pca") return InitMethod::PCA;
    if (init == "given") return InitMethod::Given;
    throw ConfigError("unknown init method: " + init);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graphdr: graph-based dimensionality reduction pipeline"};
    app.require_subcommand(1);

    PipelineConfig cfg;
    std::string input, init = "random", out, graph_path, layout_path, color = "labels";
    std::string metrics_csv, config_path;

    auto* relate = app.add_subcommand("relate", "build a relationship graph from data");
    add_input_options(relate, cfg, input);
    add_relate_options(relate, cfg);
    relate->add_option("-o,--out", out, "output edge-list file")->required();

    auto* embed = app.add_subcommand("embed", "embed a relationship graph into 2D/3D");
    embed->add_option("-g,--graph", graph_path, "input edge-list graph")->required();
    embed->add_option("-i,--input", input, "data CSV (needed for pca init, sammon, mds)");
    embed->add_flag("--has-header", cfg.has_header, "first CSV row is a header");
    embed->add_option("--label-column", cfg.label_column, "label column in the data CSV");
    add_embed_options(embed, cfg, init);
    embed->add_option("-o,--out", out, "output layout CSV")->required();

    auto* quality = app.add_subcommand("quality", "score a layout against graph and data");
    quality->add_option("-g,--graph", graph_path, "edge-list graph")->required();
    quality->add_option("-l,--layout", layout_path, "layout CSV")->required();
    quality->add_option("-i,--input", input, "data CSV")->required();
    quality->add_flag("--has-header", cfg.has_header, "first CSV row is a header");
    quality->add_option("--label-column", cfg.label_column, "label column");
    quality->add_option("--metrics", metrics_csv,
                        "comma-separated: faithfulness,stress,neighborhood_preservation,"
                        "trustworthiness,neighbor_hit,closeness,betweenness");
    quality->add_option("--k", cfg.shape_k, "shape-graph neighborhood size (0 = relate k)")
        ->default_val(cfg.shape_k);
    quality->add_option("-o,--out", out, "report JSON path (optional)");

    auto* render = app.add_subcommand("render", "render a layout as SVG");
    render->add_option("-l,--layout", layout_path, "layout CSV")->required();
    render->add_option("-i,--input", input, "data CSV providing labels");
    render->add_flag("--has-header", cfg.has_header, "first CSV row is a header");
    render->add_option("--label-column", cfg.label_column, "label column");
    render->add_option("-g,--graph", graph_path, "graph for centrality coloring");
    render->add_option("--color", color, "coloring: labels|closeness|betweenness|none")
        ->default_val(color);
    render->add_option("-o,--out", out, "output SVG path")->required();

    auto* pipeline = app.add_subcommand("pipeline", "run relate -> embed -> quality from a config");
    pipeline->add_option("-c,--config", config_path, "pipeline config file")->required();
    pipeline->add_option("--seed", cfg.seed, "override the config seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*relate) {
            cfg.input = input;
            DataMatrix data = load_csv(cfg.input, cfg.has_header, cfg.label_column);
            RelationGraph g = build_relationship_graph(cfg, data);
            write_graph(g, out);
            std::cout << "wrote " << out << " (" << g.n_vertices() << " vertices, "
                      << g.n_edges() << " edges)\n";
        } else if (*embed) {
            cfg.embed.init = parse_init(init);
            cfg.embed.seed = cfg.seed;
            RelationGraph g = read_graph(graph_path);
            std::optional<DataMatrix> data;
            if (!input.empty()) {
                cfg.input = input;
                data = load_csv(cfg.input, cfg.has_header, cfg.label_column);
            }
            if (!data && (cfg.embed.init == InitMethod::PCA || cfg.method == "pca" ||
                          cfg.method == "mds" || cfg.method == "sammon"))
                throw ConfigError("this embed configuration requires --input data");
            // Placeholder 2-point data keeps build_layout's signature simple
            // for graph-only methods.
            DataMatrix fallback(Eigen::MatrixXd::Zero(2, 1));
            Layout layout = build_layout(cfg, data ? *data : fallback, g);
            write_layout(layout, out);
            std::cout << "wrote " << out << " (" << layout.n_points() << " points, dim "
                      << layout.dim() << ")\n";
        } else if (*quality) {
            cfg.input = input;
            DataMatrix data = load_csv(cfg.input, cfg.has_header, cfg.label_column);
            RelationGraph g = read_graph(graph_path);
            Layout layout = read_layout(layout_path);
            int k = cfg.shape_k > 0 ? cfg.shape_k : 10;
            std::vector<std::string> metrics;
            if (!metrics_csv.empty()) {
                std::istringstream ms(metrics_csv);
                std::string m;
                while (std::getline(ms, m, ',')) metrics.push_back(m);
            } else {
                metrics = {"faithfulness", "stress", "neighborhood_preservation"};
            }
            nlohmann::ordered_json j;
            for (const auto& m : metrics) {
                if (m == "faithfulness")
                    j[m] = faithfulness(g, shape_graph(layout, k));
                else if (m == "stress")
                    j[m] = stress(layout, distance_matrix(data, cfg.metric));
                else if (m == "neighborhood_preservation")
                    j[m] = neighborhood_preservation(data, layout, k);
                else if (m == "trustworthiness")
                    j[m] = trustworthiness(data, layout, k);
                else if (m == "neighbor_hit") {
                    if (!data.labels()) throw DataError("neighbor_hit requires labels");
                    j[m] = neighbor_hit(layout, *data.labels(), k);
                } else if (m == "closeness")
                    j[m] = centrality_overlay(g, CentralityKind::Closeness).values;
                else if (m == "betweenness")
                    j[m] = centrality_overlay(g, CentralityKind::Betweenness).values;
                else
                    throw ConfigError("unknown metric: " + m);
            }
            std::cout << j.dump(2) << "\n";
            if (!out.empty()) {
                std::ofstream f(out);
                f << j.dump(2) << "\n";
            }
        } else if (*render) {
            Layout layout = read_layout(layout_path);
            if (color == "labels") {
                if (input.empty())
                    throw ConfigError("--color labels requires --input with --label-column");
                cfg.input = input;
                DataMatrix data = load_csv(cfg.input, cfg.has_header, cfg.label_column);
                if (!data.labels()) throw DataError("no label column in input data");
                render_svg(layout, out, &*data.labels(), nullptr);
            } else if (color == "closeness" || color == "betweenness") {
                if (graph_path.empty())
                    throw ConfigError("centrality coloring requires --graph");
                RelationGraph g = read_graph(graph_path);
                auto kind = color == "closeness" ? CentralityKind::Closeness
                                                 : CentralityKind::Betweenness;
                auto scores = centrality_overlay(g, kind);
                render_svg(layout, out, nullptr, &scores.values);
            } else {
                render_svg(layout, out, nullptr, nullptr);
            }
            std::cout << "wrote " << out << "\n";
        } else if (*pipeline) {
            PipelineConfig loaded = parse_config(config_path);
            if (pipeline->count("--seed")) {
                loaded.seed = cfg.seed;
                loaded.embed.seed = cfg.seed;
            }
            PipelineResult result = run_pipeline(loaded);
            for (const auto& [name, value] : result.report.scalars)
                std::cout << name << " = " << value << "\n";
            std::cout << "artifacts in " << loaded.out_dir.string() << "\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
