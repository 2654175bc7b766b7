#include "graphdr/io.hpp"

#include "graphdr/graphalg.hpp"
#include "graphdr/quality.hpp"
#include "graphdr/relate.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace graphdr {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

namespace {

double parse_double_strict(const std::string& s, int row, int col) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
    double v;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw DataError("non-numeric cell at row " + std::to_string(row) + ", column " +
                        std::to_string(col) + ": '" + s + "'");
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Write to a sibling temp file, then rename; readers never observe a
// partially written artifact.
void atomic_write(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw DataError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace

DataMatrix load_csv(const fs::path& path, bool has_header, const std::string& label_column) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        if (!trim(line).empty()) lines.push_back(line);
    if (lines.empty()) throw DataError("empty CSV file: " + path.string());

    std::size_t body_start = has_header ? 1 : 0;
    std::vector<std::string> header;
    if (has_header) header = split_csv_line(lines[0]);

    if (lines.size() <= body_start) throw DataError("CSV has no data rows: " + path.string());
    std::size_t ncols = split_csv_line(lines[body_start]).size();

    int label_idx = -1;
    if (!label_column.empty()) {
        int idx;
        auto [p, ec] = std::from_chars(label_column.data(),
                                       label_column.data() + label_column.size(), idx);
        if (ec == std::errc{} && p == label_column.data() + label_column.size()) {
            label_idx = idx;
        } else if (has_header) {
            for (std::size_t c = 0; c < header.size(); ++c)
                if (trim(header[c]) == label_column) label_idx = static_cast<int>(c);
            if (label_idx < 0)
                throw DataError("label column '" + label_column + "' not found in header");
        } else {
            throw ConfigError("label column by name requires a header row");
        }
        if (label_idx < 0 || label_idx >= static_cast<int>(ncols))
            throw DataError("label column index out of range");
    }

    const std::size_t nfeat = ncols - (label_idx >= 0 ? 1 : 0);
    const std::size_t nrows = lines.size() - body_start;
    Eigen::MatrixXd X(nrows, nfeat);
    std::vector<int> labels;

    for (std::size_t r = 0; r < nrows; ++r) {
        auto cells = split_csv_line(lines[body_start + r]);
        int report_row = static_cast<int>(body_start + r + 1);  // 1-based, incl. header
        if (cells.size() != ncols)
            throw DataError("ragged CSV: row " + std::to_string(report_row) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(ncols));
        std::size_t f = 0;
        for (std::size_t c = 0; c < ncols; ++c) {
            double v = parse_double_strict(cells[c], report_row, static_cast<int>(c + 1));
            if (static_cast<int>(c) == label_idx)
                labels.push_back(static_cast<int>(v));
            else
                X(r, f++) = v;
        }
    }

    std::optional<std::vector<int>> label_opt;
    if (label_idx >= 0) label_opt = std::move(labels);
    return DataMatrix(std::move(X), std::move(label_opt));
}

void write_graph(const RelationGraph& g, const fs::path& path) {
    std::ostringstream out;
    out << "#graphdr v1 N=" << g.n_vertices() << " semantics=" << to_string(g.semantics())
        << "\n";
    std::vector<Edge> edges = g.edges();
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });
    for (const Edge& e : edges)
        out << e.u << '\t' << e.v << '\t' << format_double(e.w) << '\n';
    atomic_write(path, out.str());
}

RelationGraph read_graph(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::string header;
    if (!std::getline(in, header)) throw DataError("empty graph file: " + path.string());

    int n = -1;
    std::string sem_str;
    {
        std::istringstream hs(header);
        std::string magic, tok;
        hs >> magic;
        if (magic != "#graphdr") throw DataError("missing #graphdr header in " + path.string());
        while (hs >> tok) {
            if (tok.rfind("N=", 0) == 0)
                n = std::stoi(tok.substr(2));
            else if (tok.rfind("semantics=", 0) == 0)
                sem_str = tok.substr(10);
            else if (tok != "v1")
                throw DataError("unrecognized graph header token: " + tok);
        }
    }
    if (n < 1 || sem_str.empty())
        throw DataError("graph header must carry N= and semantics=: " + header);

    WeightSemantics sem;
    try {
        sem = semantics_from_string(sem_str);
    } catch (const std::exception&) {
        throw DataError("graph header has unknown semantics: " + sem_str);
    }
    RelationGraph g(n, sem);
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::istringstream ls(line);
        int i, j;
        double w;
        if (!(ls >> i >> j >> w))
            throw DataError("malformed edge at line " + std::to_string(lineno));
        if (i >= j)
            throw DataError("edge must satisfy i < j at line " + std::to_string(lineno));
        g.add_edge(i, j, w);  // rejects duplicates and out-of-range ids
    }
    return g;
}

void write_layout(const Layout& layout, const fs::path& path) {
    std::ostringstream out;
    out << (layout.dim() == 3 ? "x,y,z\n" : "x,y\n");
    const Eigen::MatrixXd& Y = layout.coords();
    for (Eigen::Index i = 0; i < Y.rows(); ++i) {
        for (int d = 0; d < layout.dim(); ++d) {
            if (d) out << ',';
            out << format_double(Y(i, d));
        }
        out << '\n';
    }
    atomic_write(path, out.str());
}

Layout read_layout(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::string header;
    if (!std::getline(in, header)) throw DataError("empty layout file: " + path.string());
    std::string h = trim(header);
    int dim;
    if (h == "x,y")
        dim = 2;
    else if (h == "x,y,z")
        dim = 3;
    else
        throw DataError("layout header must be x,y or x,y,z, got: " + h);

    std::vector<std::array<double, 3>> rows;
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) != dim)
            throw DataError("layout row " + std::to_string(lineno) + " has " +
                            std::to_string(cells.size()) + " columns, expected " +
                            std::to_string(dim));
        std::array<double, 3> row{0.0, 0.0, 0.0};
        for (int d = 0; d < dim; ++d) row[d] = parse_double_strict(cells[d], lineno, d + 1);
        rows.push_back(row);
    }
    Eigen::MatrixXd Y(rows.size(), dim);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int d = 0; d < dim; ++d) Y(i, d) = rows[i][d];
    return Layout(Y);
}

// --- SVG ------------------------------------------------------------------

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
constexpr int kPaletteSize = 10;

struct Rgb {
    double r, g, b;
};

// Sequential colormap, low = dark purple, high = yellow.
std::string sequential_color(double t) {
    static const Rgb anchors[] = {{0x44, 0x01, 0x54},
                                  {0x3b, 0x52, 0x8b},
                                  {0x21, 0x91, 0x8c},
                                  {0x5e, 0xc9, 0x62},
                                  {0xfd, 0xe7, 0x25}};
    t = std::clamp(t, 0.0, 1.0);
    double pos = t * 4.0;
    int lo = std::min(static_cast<int>(pos), 3);
    double f = pos - lo;
    auto mix = [&](double a, double b) { return a + (b - a) * f; };
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                  static_cast<int>(std::lround(mix(anchors[lo].r, anchors[lo + 1].r))),
                  static_cast<int>(std::lround(mix(anchors[lo].g, anchors[lo + 1].g))),
                  static_cast<int>(std::lround(mix(anchors[lo].b, anchors[lo + 1].b))));
    return buf;
}

std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace

void render_svg(const Layout& layout, const fs::path& path, const std::vector<int>* labels,
                const std::vector<double>* scores) {
    const Eigen::MatrixXd& Y = layout.coords();
    const Eigen::Index n = Y.rows();
    if (labels && static_cast<Eigen::Index>(labels->size()) != n)
        throw DataError("label count does not match layout size");
    if (scores && static_cast<Eigen::Index>(scores->size()) != n)
        throw DataError("score count does not match layout size");

    double xmin = Y.col(0).minCoeff(), xmax = Y.col(0).maxCoeff();
    double ymin = Y.col(1).minCoeff(), ymax = Y.col(1).maxCoeff();
    double w = std::max(xmax - xmin, 1e-9), h = std::max(ymax - ymin, 1e-9);
    double margin = 0.05 * std::max(w, h);
    double vx = xmin - margin, vy = ymin - margin;
    double vw = w + 2 * margin, vh = h + 2 * margin;
    double r = 0.006 * std::max(vw, vh);

    double smin = 0.0, smax = 1.0;
    if (scores && n > 0) {
        smin = *std::min_element(scores->begin(), scores->end());
        smax = *std::max_element(scores->begin(), scores->end());
        if (smax == smin) smax = smin + 1.0;
    }

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
        << "width=\"800\" height=\"800\" viewBox=\"" << svg_num(vx) << ' ' << svg_num(vy)
        << ' ' << svg_num(vw) << ' ' << svg_num(vh) << "\">\n";

    for (Eigen::Index i = 0; i < n; ++i) {
        std::string fill = "#1f77b4";
        if (labels)
            fill = kPalette[((*labels)[i] % kPaletteSize + kPaletteSize) % kPaletteSize];
        else if (scores)
            fill = sequential_color(((*scores)[i] - smin) / (smax - smin));
        // SVG y axis grows downward; flip so the plot reads like a chart.
        double cy = ymin + ymax - Y(i, 1);
        out << "<circle cx=\"" << svg_num(Y(i, 0)) << "\" cy=\"" << svg_num(cy) << "\" r=\""
            << svg_num(r) << "\" fill=\"" << fill << "\" fill-opacity=\"0.8\"/>\n";
    }

    // Legend block.
    double lx = vx + 0.02 * vw, ly = vy + 0.02 * vh, lstep = 0.03 * vh;
    double fontsize = 0.022 * vh;
    out << "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"" << svg_num(fontsize)
        << "\">\n";
    if (labels) {
        std::set<int> distinct(labels->begin(), labels->end());
        int row = 0;
        for (int lab : distinct) {
            std::string fill = kPalette[(lab % kPaletteSize + kPaletteSize) % kPaletteSize];
            double y = ly + row * lstep;
            out << "<rect x=\"" << svg_num(lx) << "\" y=\"" << svg_num(y) << "\" width=\""
                << svg_num(lstep * 0.6) << "\" height=\"" << svg_num(lstep * 0.6)
                << "\" fill=\"" << fill << "\"/>\n";
            out << "<text x=\"" << svg_num(lx + lstep * 0.8) << "\" y=\""
                << svg_num(y + lstep * 0.5) << "\">" << lab << "</text>\n";
            ++row;
        }
    } else if (scores) {
        for (int step = 0; step <= 4; ++step) {
            double t = step / 4.0;
            double y = ly + step * lstep;
            out << "<rect x=\"" << svg_num(lx) << "\" y=\"" << svg_num(y) << "\" width=\""
                << svg_num(lstep * 0.6) << "\" height=\"" << svg_num(lstep * 0.6)
                << "\" fill=\"" << sequential_color(t) << "\"/>\n";
            out << "<text x=\"" << svg_num(lx + lstep * 0.8) << "\" y=\""
                << svg_num(y + lstep * 0.5) << "\">" << format_double(smin + t * (smax - smin))
                << "</text>\n";
        }
    }
    out << "</g>\n</svg>\n";
    atomic_write(path, out.str());
}

// --- Config ---------------------------------------------------------------

namespace {

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("expected boolean for " + key + ", got: " + v);
}

const std::set<std::string> kRecipes = {"complete", "knn", "snn",      "tsne",
                                        "umap",     "mst", "geodesic"};
const std::set<std::string> kMethods = {"none",   "mds", "pca", "spring",
                                        "sammon", "sne", "tsne", "negative_sampling"};
const std::set<std::string> kMetrics = {"faithfulness",  "stress",
                                        "neighborhood_preservation", "trustworthiness",
                                        "neighbor_hit",  "closeness", "betweenness"};

}  // namespace

PipelineConfig parse_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());

    PipelineConfig cfg;
    std::string section, line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = t.substr(1, t.size() - 2);
            if (section != "input" && section != "relate" && section != "embed" &&
                section != "quality" && section != "output")
                throw ConfigError("unknown config section [" + section + "]");
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key=value at line " + std::to_string(lineno));
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        std::string qual = section + "." + key;

        try {
            if (qual == "input.path") cfg.input = val;
            else if (qual == "input.has_header") cfg.has_header = parse_bool(val, qual);
            else if (qual == "input.label_column") cfg.label_column = val;
            else if (qual == "input.metric") cfg.metric = metric_from_string(val);
            else if (qual == "relate.recipe") {
                if (!kRecipes.count(val)) throw ConfigError("unknown relate recipe: " + val);
                cfg.recipe = val;
            }
            else if (qual == "relate.k") cfg.k = std::stoi(val);
            else if (qual == "relate.perplexity") cfg.perplexity = std::stod(val);
            else if (qual == "relate.n_neighbors") cfg.n_neighbors = std::stoi(val);
            else if (qual == "relate.prune_epsilon") cfg.prune_epsilon = std::stod(val);
            else if (qual == "relate.flip") cfg.flip = parse_bool(val, qual);
            else if (qual == "relate.strengthen_factor") cfg.strengthen_factor = std::stod(val);
            else if (qual == "embed.method") {
                if (!kMethods.count(val)) throw ConfigError("unknown embed method: " + val);
                cfg.method = val;
            }
            else if (qual == "embed.iterations") cfg.embed.iterations = std::stoi(val);
            else if (qual == "embed.learning_rate") cfg.embed.learning_rate = std::stod(val);
            else if (qual == "embed.init") {
                if (val == "random") cfg.embed.init = InitMethod::Random;
                else if (val == "pca") cfg.embed.init = InitMethod::PCA;
                else if (val == "given") cfg.embed.init = InitMethod::Given;
                else throw ConfigError("unknown init method: " + val);
            }
            else if (qual == "embed.init_path") cfg.init_layout_path = val;
            else if (qual == "embed.exaggeration_factor")
                cfg.embed.exaggeration_factor = std::stod(val);
            else if (qual == "embed.exaggeration_duration")
                cfg.embed.exaggeration_duration = std::stoi(val);
            else if (qual == "embed.negative_samples")
                cfg.embed.negative_samples = std::stoi(val);
            else if (qual == "embed.repulsion") {
                if (val == "exact") cfg.embed.repulsion = RepulsionMode::Exact;
                else if (val == "barnes_hut") cfg.embed.repulsion = RepulsionMode::BarnesHut;
                else throw ConfigError("unknown repulsion mode: " + val);
            }
            else if (qual == "embed.theta") cfg.embed.theta = std::stod(val);
            else if (qual == "embed.dim") cfg.embed.dim = std::stoi(val);
            else if (qual == "embed.seed" || qual == "input.seed" || key == "seed") {
                cfg.seed = std::stoull(val);
                cfg.embed.seed = cfg.seed;
            }
            else if (qual == "quality.metrics") {
                cfg.metrics.clear();
                std::istringstream ms(val);
                std::string m;
                while (std::getline(ms, m, ',')) {
                    m = trim(m);
                    if (!kMetrics.count(m)) throw ConfigError("unknown metric: " + m);
                    cfg.metrics.push_back(m);
                }
            }
            else if (qual == "quality.k") cfg.shape_k = std::stoi(val);
            else if (qual == "output.dir") cfg.out_dir = val;
            else if (qual == "output.color") {
                if (val != "labels" && val != "closeness" && val != "betweenness" &&
                    val != "none")
                    throw ConfigError("unknown color mode: " + val);
                cfg.color = val;
            }
            else if (qual == "output.timings") cfg.emit_timings = parse_bool(val, qual);
            else throw ConfigError("unknown config key: " + qual);
        } catch (const std::invalid_argument&) {
            throw ConfigError("bad value for " + qual + ": " + val);
        }
    }
    if (cfg.input.empty()) throw ConfigError("config must set input.path");
    return cfg;
}

// --- Pipeline -------------------------------------------------------------

RelationGraph build_relationship_graph(const PipelineConfig& cfg, const DataMatrix& data) {
    RelationGraph g = [&] {
        if (cfg.recipe == "complete") return pairwise_distance_graph(data, cfg.metric);
        if (cfg.recipe == "knn") return knn_graph(data, cfg.k, cfg.metric);
        if (cfg.recipe == "snn") return snn_reweight(data, cfg.k, cfg.metric);
        if (cfg.recipe == "tsne")
            return tsne_probability_graph(data, cfg.perplexity, cfg.prune_epsilon, cfg.metric);
        if (cfg.recipe == "umap") return umap_fuzzy_graph(data, cfg.n_neighbors, cfg.metric);
        if (cfg.recipe == "geodesic")
            return geodesic_complete_graph(knn_graph(data, cfg.k, cfg.metric));
        if (cfg.recipe == "mst")
            return mst_backbone(pairwise_distance_graph(data, cfg.metric));
        throw ConfigError("unknown relate recipe: " + cfg.recipe);
    }();
    if (cfg.strengthen_factor > 0.0)
        g = backbone_strengthen(g, mst_backbone(g), cfg.strengthen_factor);
    if (cfg.flip) g = similarity_flip(g);
    return g;
}

namespace {

bool is_complete(const RelationGraph& g) {
    std::size_t n = static_cast<std::size_t>(g.n_vertices());
    return g.n_edges() == n * (n - 1) / 2;
}

Eigen::MatrixXd dissimilarities_for(const PipelineConfig& cfg, const DataMatrix& data,
                                    const RelationGraph& g) {
    if (g.semantics() == WeightSemantics::Dissimilarity && is_complete(g))
        return matrix_from_graph(g);
    return distance_matrix(data, cfg.metric);
}

}  // namespace

Layout build_layout(const PipelineConfig& cfg, const DataMatrix& data,
                    const RelationGraph& g) {
    EmbedParams params = cfg.embed;
    params.seed = cfg.seed;
    if (params.init == InitMethod::Given) {
        if (cfg.init_layout_path.empty())
            throw ConfigError("embed.init=given requires embed.init_path");
        params.given_init = read_layout(cfg.init_layout_path).coords();
    }

    if (cfg.method == "none") {
        if (params.init == InitMethod::Given) return Layout(*params.given_init);
        if (params.init == InitMethod::PCA) return pca_init(data, params.dim);
        throw ConfigError("embed.method=none requires init=pca or init=given");
    }
    if (cfg.method == "mds") return classical_mds(dissimilarities_for(cfg, data, g), params.dim);
    if (cfg.method == "pca") return pca_init(data, params.dim);
    if (cfg.method == "spring") return spring_layout(g, params, &data);
    if (cfg.method == "sammon")
        return sammon_embed(dissimilarities_for(cfg, data, g), params, &data);
    if (cfg.method == "sne") return sne_embed(g, params, &data);
    if (cfg.method == "tsne") return tsne_embed(g, params, &data);
    if (cfg.method == "negative_sampling") return negative_sampling_embed(g, params, &data);
    throw ConfigError("unknown embed method: " + cfg.method);
}

namespace {

ordered_json config_json(const PipelineConfig& cfg) {
    ordered_json j;
    j["input"] = {{"path", cfg.input.string()},
                  {"has_header", cfg.has_header},
                  {"label_column", cfg.label_column},
                  {"metric", to_string(cfg.metric)}};
    j["relate"] = {{"recipe", cfg.recipe},
                   {"k", cfg.k},
                   {"perplexity", cfg.perplexity},
                   {"n_neighbors", cfg.n_neighbors},
                   {"prune_epsilon", cfg.prune_epsilon},
                   {"flip", cfg.flip},
                   {"strengthen_factor", cfg.strengthen_factor}};
    std::string init = cfg.embed.init == InitMethod::Random ? "random"
                       : cfg.embed.init == InitMethod::PCA  ? "pca"
                                                            : "given";
    j["embed"] = {{"method", cfg.method},
                  {"iterations", cfg.embed.iterations},
                  {"learning_rate", cfg.embed.learning_rate},
                  {"init", init},
                  {"exaggeration_factor", cfg.embed.exaggeration_factor},
                  {"exaggeration_duration", cfg.embed.exaggeration_duration},
                  {"negative_samples", cfg.embed.negative_samples},
                  {"repulsion",
                   cfg.embed.repulsion == RepulsionMode::Exact ? "exact" : "barnes_hut"},
                  {"theta", cfg.embed.theta},
                  {"dim", cfg.embed.dim}};
    j["quality"] = {{"metrics", cfg.metrics}, {"k", cfg.shape_k}};
    j["output"] = {{"dir", cfg.out_dir.string()}, {"color", cfg.color}};
    j["seed"] = cfg.seed;
    return j;
}

template <class Fn>
auto stage(const std::string& name, double& elapsed_ms, Fn&& fn) {
    auto start = std::chrono::steady_clock::now();
    try {
        auto result = fn();
        elapsed_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
        return result;
    } catch (const ConfigError& e) {
        throw ConfigError(name + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError(name + ": " + e.what());
    } catch (const NumericError& e) {
        throw NumericError(name + ": " + e.what());
    }
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg) {
    double t_data = 0, t_relate = 0, t_embed = 0, t_quality = 0;

    DataMatrix data = stage("data", t_data,
                            [&] { return load_csv(cfg.input, cfg.has_header, cfg.label_column); });
    RelationGraph graph =
        stage("relate", t_relate, [&] { return build_relationship_graph(cfg, data); });
    Layout layout = stage("embed", t_embed, [&] { return build_layout(cfg, data, graph); });

    const int shape_k = cfg.shape_k > 0 ? cfg.shape_k : cfg.k;
    std::vector<std::string> metrics = cfg.metrics;
    if (metrics.empty()) {
        metrics = {"faithfulness", "stress", "neighborhood_preservation"};
        if (2 * shape_k < data.rows()) metrics.push_back("trustworthiness");
        if (data.labels()) metrics.push_back("neighbor_hit");
    }

    QualityReport report = stage("quality", t_quality, [&] {
        QualityReport rep;
        for (const std::string& m : metrics) {
            if (m == "faithfulness")
                rep.scalars["faithfulness"] = faithfulness(graph, shape_graph(layout, shape_k));
            else if (m == "stress")
                rep.scalars["stress"] = stress(layout, distance_matrix(data, cfg.metric));
            else if (m == "neighborhood_preservation")
                rep.scalars["neighborhood_preservation"] =
                    neighborhood_preservation(data, layout, shape_k);
            else if (m == "trustworthiness")
                rep.scalars["trustworthiness"] = trustworthiness(data, layout, shape_k);
            else if (m == "neighbor_hit") {
                if (!data.labels())
                    throw DataError("neighbor_hit requires a label column");
                rep.scalars["neighbor_hit"] = neighbor_hit(layout, *data.labels(), shape_k);
            } else if (m == "closeness") {
                rep.per_node["closeness"] =
                    centrality_overlay(graph, CentralityKind::Closeness).values;
            } else if (m == "betweenness") {
                rep.per_node["betweenness"] =
                    centrality_overlay(graph, CentralityKind::Betweenness).values;
            } else {
                throw ConfigError("unknown metric: " + m);
            }
        }
        if ((cfg.color == "closeness" || cfg.color == "betweenness") &&
            !rep.per_node.count(cfg.color)) {
            auto kind = cfg.color == "closeness" ? CentralityKind::Closeness
                                                 : CentralityKind::Betweenness;
            rep.per_node[cfg.color] = centrality_overlay(graph, kind).values;
        }
        return rep;
    });

    PipelineResult result{std::move(graph), std::move(layout), std::move(report),
                          cfg.out_dir / "graph.edges", cfg.out_dir / "layout.csv",
                          cfg.out_dir / "report.json", cfg.out_dir / "plot.svg"};

    write_graph(result.graph, result.graph_path);
    write_layout(result.layout, result.layout_path);

    ordered_json j;
    j["config"] = config_json(cfg);
    j["metrics"] = result.report.scalars;
    j["per_node"] = result.report.per_node;
    if (cfg.emit_timings)
        j["timings_ms"] = {{"data", t_data},
                           {"relate", t_relate},
                           {"embed", t_embed},
                           {"quality", t_quality}};
    else
        j["timings_ms"] = ordered_json::object();
    atomic_write(result.report_path, j.dump(2) + "\n");

    const std::vector<int>* labels =
        (cfg.color == "labels" && data.labels()) ? &*data.labels() : nullptr;
    const std::vector<double>* scores = nullptr;
    if (cfg.color == "closeness" || cfg.color == "betweenness")
        scores = &result.report.per_node.at(cfg.color);
    render_svg(result.layout, result.svg_path, labels, scores);

    return result;
}

}  // namespace graphdr
