#ifndef GRAPHDR_IO_HPP
#define GRAPHDR_IO_HPP

#include "graphdr/core.hpp"
#include "graphdr/embed.hpp"

#include <filesystem>

namespace graphdr {

/// Shortest decimal that round-trips the exact double.
std::string format_double(double v);

/// CSV ingestion. `label_column` may be a header name or a 0-based column
/// index; empty string means no labels.
DataMatrix load_csv(const std::filesystem::path& path, bool has_header,
                    const std::string& label_column = "");

// Edge-list text format:
//   #graphdr v1 N=<n> semantics=<s>
//   i<TAB>j<TAB>w        (one edge per line, i < j)
void write_graph(const RelationGraph& g, const std::filesystem::path& path);
RelationGraph read_graph(const std::filesystem::path& path);

// Coordinate CSV with header x,y(,z), full round-trip precision.
void write_layout(const Layout& layout, const std::filesystem::path& path);
Layout read_layout(const std::filesystem::path& path);

/// Scatter plot. Labels get a categorical palette, scores a sequential
/// colormap; exactly one of the two may be null. Output bytes are a pure
/// function of the inputs.
void render_svg(const Layout& layout, const std::filesystem::path& path,
                const std::vector<int>* labels = nullptr,
                const std::vector<double>* scores = nullptr);

struct PipelineConfig {
    // [input]
    std::filesystem::path input;
    bool has_header = false;
    std::string label_column;
    Metric metric = Metric::Euclidean;

    // [relate]
    std::string recipe = "knn";  // complete|knn|snn|tsne|umap|geodesic|mst
    int k = 10;
    double perplexity = 10.0;
    int n_neighbors = 10;
    double prune_epsilon = 1e-8;
    bool flip = false;                 // apply similarity_flip afterwards
    double strengthen_factor = 0.0;    // > 0: strengthen the MST backbone

    // [embed]
    std::string method = "spring";  // none|mds|pca|spring|sammon|sne|tsne|negative_sampling
    EmbedParams embed;
    std::filesystem::path init_layout_path;  // init = given

    // [quality]
    std::vector<std::string> metrics;  // empty = all applicable
    int shape_k = 0;                   // 0 = reuse relate k

    // [output]
    std::filesystem::path out_dir = "out";
    std::string color = "labels";  // labels|closeness|betweenness|none
    bool emit_timings = true;

    std::uint64_t seed = 42;
};

PipelineConfig parse_config(const std::filesystem::path& path);

struct PipelineResult {
    RelationGraph graph;
    Layout layout;
    QualityReport report;
    std::filesystem::path graph_path, layout_path, report_path, svg_path;
};

/// relate -> embed -> quality; writes graph, layout, report JSON and SVG
/// under config.out_dir. All writes are atomic (temp file + rename).
PipelineResult run_pipeline(const PipelineConfig& config);

// Stage entry points shared by run_pipeline and the CLI subcommands.
RelationGraph build_relationship_graph(const PipelineConfig& config, const DataMatrix& data);
Layout build_layout(const PipelineConfig& config, const DataMatrix& data,
                    const RelationGraph& g);

}  // namespace graphdr

#endif
