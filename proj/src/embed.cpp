#include "graphdr/embed.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>
#include <set>

namespace graphdr {

void EmbedParams::validate() const {
    // 0 iterations returns the (centered) initialization unchanged.
    if (iterations < 0) throw ConfigError("iterations must be >= 0");
    if (learning_rate <= 0.0) throw ConfigError("learning rate must be positive");
    if (exaggeration_factor < 1.0) throw ConfigError("exaggeration factor must be >= 1");
    if (exaggeration_duration < 0) throw ConfigError("exaggeration duration must be >= 0");
    if (negative_samples < 0) throw ConfigError("negative_samples must be >= 0");
    if (theta <= 0.0 || theta > 1.0) throw ConfigError("theta must lie in (0, 1]");
    if (dim != 2 && dim != 3) throw ConfigError("embedding dimension must be 2 or 3");
    if (init == InitMethod::Given && !given_init)
        throw ConfigError("init=given requires an initial layout");
}

namespace {

void fix_signs(Eigen::MatrixXd& axes) {
    for (Eigen::Index c = 0; c < axes.cols(); ++c) {
        Eigen::Index imax = 0;
        axes.col(c).cwiseAbs().maxCoeff(&imax);
        if (axes(imax, c) < 0) axes.col(c) = -axes.col(c);
    }
}

// Seeded noise on exact duplicates so force terms stay finite.
void jitter_duplicates(Eigen::MatrixXd& Y, std::uint64_t seed) {
    bool dup = false;
    for (Eigen::Index i = 0; i < Y.rows() && !dup; ++i)
        for (Eigen::Index j = i + 1; j < Y.rows() && !dup; ++j)
            if ((Y.row(i) - Y.row(j)).norm() == 0.0) dup = true;
    if (!dup) return;
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> noise(0.0, 1e-9);
    for (Eigen::Index i = 0; i < Y.rows(); ++i)
        for (Eigen::Index d = 0; d < Y.cols(); ++d) Y(i, d) += noise(rng);
}

Eigen::MatrixXd resolve_init(int n, const EmbedParams& params, const DataMatrix* data,
                             double random_scale) {
    Eigen::MatrixXd Y;
    switch (params.init) {
        case InitMethod::Random: {
            std::mt19937_64 rng(params.seed);
            std::normal_distribution<double> dist(0.0, random_scale);
            Y.resize(n, params.dim);
            for (Eigen::Index i = 0; i < n; ++i)
                for (int d = 0; d < params.dim; ++d) Y(i, d) = dist(rng);
            break;
        }
        case InitMethod::PCA: {
            if (!data) throw ConfigError("init=pca requires the data matrix");
            Y = pca_init(*data, params.dim).coords();
            break;
        }
        case InitMethod::Given: {
            Y = *params.given_init;
            if (Y.rows() != n || Y.cols() != params.dim)
                throw ConfigError("given init layout has wrong shape");
            break;
        }
    }
    jitter_duplicates(Y, params.seed);
    return Y;
}

}  // namespace

Layout classical_mds(const Eigen::MatrixXd& D, int dim) {
    const Eigen::Index n = D.rows();
    if (D.cols() != n) throw DataError("distance matrix must be square");
    if (dim != 2 && dim != 3) throw ConfigError("embedding dimension must be 2 or 3");

    Eigen::MatrixXd D2 = D.array().square();
    Eigen::MatrixXd J =
        Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    Eigen::MatrixXd B = -0.5 * J * D2 * J;
    B = ((B + B.transpose()) / 2.0).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(B);
    // Eigenvalues come back in ascending order.
    Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(n, dim);
    int filled = 0;
    for (int c = 0; c < dim; ++c) {
        Eigen::Index idx = n - 1 - c;
        double lambda = solver.eigenvalues()[idx];
        if (lambda <= 0.0) break;
        Y.col(c) = solver.eigenvectors().col(idx) * std::sqrt(lambda);
        ++filled;
    }
    if (filled < dim)
        std::cerr << "warning: classical_mds found only " << filled
                  << " positive eigenvalues; remaining coordinates set to zero\n";
    fix_signs(Y);
    return Layout(Y);
}

Layout pca_init(const DataMatrix& data, int dim) {
    if (dim != 2 && dim != 3) throw ConfigError("embedding dimension must be 2 or 3");
    Eigen::MatrixXd X = data.values();
    X.rowwise() -= X.colwise().mean();
    Eigen::MatrixXd C = X.transpose() * X / static_cast<double>(X.rows() - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(C);

    const Eigen::Index m = C.rows();
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(m, dim);
    for (int c = 0; c < dim && c < m; ++c) V.col(c) = solver.eigenvectors().col(m - 1 - c);
    fix_signs(V);
    return Layout(X * V);
}

Layout spring_layout(const RelationGraph& g, const EmbedParams& params, const DataMatrix* data) {
    params.validate();
    if (g.semantics() == WeightSemantics::Dissimilarity)
        throw ConfigError("spring_layout expects similarity or probability weights");

    const int n = g.n_vertices();
    Eigen::MatrixXd Y = resolve_init(n, params, data, 0.1);
    const double K = std::sqrt(1.0 / n);  // ideal length, area = 1
    const double t0 = 0.1;

    Eigen::MatrixXd disp(n, params.dim);
    for (int iter = 0; iter < params.iterations; ++iter) {
        disp.setZero();
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                Eigen::RowVectorXd delta = Y.row(i) - Y.row(j);
                double d = std::max(delta.norm(), 1e-12);
                Eigen::RowVectorXd push = delta / d * (K * K / d);
                disp.row(i) += push;
                disp.row(j) -= push;
            }
        }
        for (const Edge& e : g.edges()) {
            Eigen::RowVectorXd delta = Y.row(e.u) - Y.row(e.v);
            double d = std::max(delta.norm(), 1e-12);
            Eigen::RowVectorXd pull = delta / d * (e.w * d * d / K);
            disp.row(e.u) -= pull;
            disp.row(e.v) += pull;
        }
        double temp = t0 * (1.0 - static_cast<double>(iter) / params.iterations);
        for (int i = 0; i < n; ++i) {
            double len = disp.row(i).norm();
            if (len > 1e-12) Y.row(i) += disp.row(i) / len * std::min(len, temp);
        }
    }
    return Layout(Y);
}

double sammon_stress(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& D) {
    const Eigen::Index n = D.rows();
    double c = 0.0, e = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double w = D(i, j);
            double d = (Y.row(i) - Y.row(j)).norm();
            c += w;
            e += (w - d) * (w - d) / w;
        }
    }
    return e / c;
}

Eigen::MatrixXd sammon_gradient(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& D) {
    const Eigen::Index n = D.rows();
    double c = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) c += D(i, j);

    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, Y.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double w = D(i, j);
            Eigen::RowVectorXd delta = Y.row(i) - Y.row(j);
            double d = std::max(delta.norm(), 1e-12);
            Eigen::RowVectorXd term = (2.0 / c) * (d - w) / (d * w) * delta;
            grad.row(i) += term;
            grad.row(j) -= term;
        }
    }
    return grad;
}

Layout sammon_embed(const Eigen::MatrixXd& D, const EmbedParams& params, const DataMatrix* data) {
    params.validate();
    const Eigen::Index n = D.rows();
    if (D.cols() != n) throw DataError("distance matrix must be square");
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (D(i, j) == 0.0)
                throw NumericError("zero distance between items " + std::to_string(i) + " and " +
                                   std::to_string(j) +
                                   "; jitter the distances or deduplicate the data");

    Eigen::MatrixXd Y = resolve_init(static_cast<int>(n), params, data, 1.0);
    double energy = sammon_stress(Y, D);
    double step = params.learning_rate;
    for (int iter = 0; iter < params.iterations; ++iter) {
        Eigen::MatrixXd grad = sammon_gradient(Y, D);
        double gnorm = grad.norm();
        if (gnorm < 1e-14) break;

        // Backtracking keeps the stress monotone non-increasing.
        bool improved = false;
        for (int half = 0; half < 40; ++half) {
            Eigen::MatrixXd cand = Y - step * grad;
            double cand_energy = sammon_stress(cand, D);
            if (cand_energy <= energy) {
                Y = std::move(cand);
                energy = cand_energy;
                improved = true;
                step *= 1.5;  // regrow after a successful move
                break;
            }
            step /= 2.0;
        }
        if (!improved) break;
    }
    return Layout(Y);
}

Eigen::MatrixXd normalized_probabilities(const RelationGraph& g) {
    if (g.semantics() != WeightSemantics::Probability &&
        g.semantics() != WeightSemantics::Similarity)
        throw ConfigError("probability embedders expect similarity or probability weights");
    const int n = g.n_vertices();
    double total = g.total_weight();
    if (total <= 0.0) throw DataError("graph weights must have positive total");
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : g.edges()) {
        double p = e.w / (2.0 * total);  // ordered pairs sum to 1
        P(e.u, e.v) = p;
        P(e.v, e.u) = p;
    }
    return P;
}

namespace {

// Gaussian low-dim affinities, log-sum-exp stabilized. Returns q over
// ordered pairs (diagonal zero).
Eigen::MatrixXd sne_q(const Eigen::MatrixXd& Y) {
    const Eigen::Index n = Y.rows();
    Eigen::MatrixXd logits(n, n);
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        logits(i, i) = -std::numeric_limits<double>::infinity();
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double l = -(Y.row(i) - Y.row(j)).squaredNorm();
            logits(i, j) = logits(j, i) = l;
            mx = std::max(mx, l);
        }
    }
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
    double z = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            Q(i, j) = std::exp(logits(i, j) - mx);
            z += Q(i, j);
        }
    }
    Q /= z;
    return Q;
}

double kl_divergence(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q) {
    double kl = 0.0;
    for (Eigen::Index i = 0; i < P.rows(); ++i) {
        for (Eigen::Index j = 0; j < P.cols(); ++j) {
            if (i == j || P(i, j) <= 0.0) continue;
            kl += P(i, j) * std::log(P(i, j) / std::max(Q(i, j), 1e-300));
        }
    }
    return kl;
}

}  // namespace

double sne_kl_divergence(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& P) {
    return kl_divergence(P, sne_q(Y));
}

Eigen::MatrixXd sne_gradient(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& P) {
    Eigen::MatrixXd Q = sne_q(Y);
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(Y.rows(), Y.cols());
    for (Eigen::Index i = 0; i < Y.rows(); ++i)
        for (Eigen::Index j = 0; j < Y.rows(); ++j) {
            if (i == j) continue;
            grad.row(i) += 4.0 * (P(i, j) - Q(i, j)) * (Y.row(i) - Y.row(j));
        }
    return grad;
}

double tsne_kl_divergence(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& P) {
    const Eigen::Index n = Y.rows();
    Eigen::MatrixXd Qnum(n, n);
    double z = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        Qnum(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double q = 1.0 / (1.0 + (Y.row(i) - Y.row(j)).squaredNorm());
            Qnum(i, j) = Qnum(j, i) = q;
            z += 2.0 * q;
        }
    }
    return kl_divergence(P, Qnum / z);
}

Eigen::MatrixXd tsne_gradient(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& P) {
    const Eigen::Index n = Y.rows();
    Eigen::MatrixXd Qnum(n, n);
    double z = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        Qnum(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double q = 1.0 / (1.0 + (Y.row(i) - Y.row(j)).squaredNorm());
            Qnum(i, j) = Qnum(j, i) = q;
            z += 2.0 * q;
        }
    }
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, Y.cols());
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            grad.row(i) +=
                4.0 * (P(i, j) - Qnum(i, j) / z) * Qnum(i, j) * (Y.row(i) - Y.row(j));
        }
    return grad;
}

namespace {

Layout gradient_descent_embed(const RelationGraph& g, const EmbedParams& params,
                              const DataMatrix* data, bool student_t) {
    params.validate();
    Eigen::MatrixXd P = normalized_probabilities(g);
    const int n = g.n_vertices();
    Eigen::MatrixXd Y = resolve_init(n, params, data, 1e-4);
    Eigen::MatrixXd velocity = Eigen::MatrixXd::Zero(n, params.dim);

    const double exag = student_t ? params.exaggeration_factor : 1.0;

    for (int iter = 0; iter < params.iterations; ++iter) {
        bool exaggerated = student_t && iter < params.exaggeration_duration;
        double momentum = iter < 250 ? 0.5 : 0.8;

        Eigen::MatrixXd grad;
        if (student_t && params.repulsion == RepulsionMode::BarnesHut) {
            // Exact attraction over edges, tree-approximated repulsion.
            auto rep = barnes_hut_repulsion(Layout(Y), params.theta);
            grad = Eigen::MatrixXd::Zero(n, params.dim);
            const double scale = exaggerated ? exag : 1.0;
            double total = g.total_weight();
            for (const Edge& e : g.edges()) {
                double p = scale * e.w / (2.0 * total);
                Eigen::RowVectorXd delta = Y.row(e.u) - Y.row(e.v);
                double q = 1.0 / (1.0 + delta.squaredNorm());
                Eigen::RowVectorXd term = 4.0 * p * q * delta;
                grad.row(e.u) += term;
                grad.row(e.v) -= term;
            }
            grad -= (4.0 / rep.z) * rep.forces;
        } else {
            Eigen::MatrixXd Peff = exaggerated ? (exag * P).eval() : P;
            grad = student_t ? tsne_gradient(Y, Peff) : sne_gradient(Y, Peff);
        }

        velocity = momentum * velocity - params.learning_rate * grad;
        Y += velocity;
        Y.rowwise() -= Y.colwise().mean();  // keep the layout centered
    }
    return Layout(Y);
}

}  // namespace

Layout sne_embed(const RelationGraph& g, const EmbedParams& params, const DataMatrix* data) {
    return gradient_descent_embed(g, params, data, false);
}

Layout tsne_embed(const RelationGraph& g, const EmbedParams& params, const DataMatrix* data) {
    return gradient_descent_embed(g, params, data, true);
}

Layout negative_sampling_embed(const RelationGraph& g, const EmbedParams& params,
                               const DataMatrix* data) {
    params.validate();
    if (g.semantics() != WeightSemantics::Probability &&
        g.semantics() != WeightSemantics::Similarity)
        throw ConfigError("negative_sampling_embed expects similarity or probability weights");
    if (g.n_edges() == 0) throw DataError("negative_sampling_embed needs at least one edge");

    const int n = g.n_vertices();
    Eigen::MatrixXd Y = resolve_init(n, params, data, 10.0);

    std::vector<std::set<int>> neighbors(n);
    for (const Edge& e : g.edges()) {
        neighbors[e.u].insert(e.v);
        neighbors[e.v].insert(e.u);
    }

    // Weight-proportional edge schedule: an edge with weight w is processed
    // every w_max / w epochs.
    const auto& edges = g.edges();
    const double wmax = g.max_weight();
    std::vector<double> epochs_per_sample(edges.size()), next_due(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        epochs_per_sample[e] = edges[e].w > 0.0 ? wmax / edges[e].w
                                                : std::numeric_limits<double>::infinity();
        next_due[e] = epochs_per_sample[e];
    }

    std::mt19937_64 rng(params.seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    auto clip = [](Eigen::RowVectorXd v) {
        return v.cwiseMax(-4.0).cwiseMin(4.0).eval();
    };

    for (int epoch = 1; epoch <= params.iterations; ++epoch) {
        double alpha =
            params.learning_rate * (1.0 - static_cast<double>(epoch - 1) / params.iterations);
        for (std::size_t e = 0; e < edges.size(); ++e) {
            if (next_due[e] > epoch) continue;
            next_due[e] += epochs_per_sample[e];
            int i = edges[e].u, j = edges[e].v;

            Eigen::RowVectorXd delta = Y.row(i) - Y.row(j);
            double d2 = delta.squaredNorm();
            double attract = -2.0 / (1.0 + d2);
            Eigen::RowVectorXd move = clip(attract * delta);
            Y.row(i) += alpha * move;
            Y.row(j) -= alpha * move;

            for (int s = 0; s < params.negative_samples; ++s) {
                int k = pick(rng);
                int tries = 0;
                while ((k == i || neighbors[i].count(k)) && tries++ < 8) k = pick(rng);
                if (k == i || neighbors[i].count(k)) continue;
                Eigen::RowVectorXd dneg = Y.row(i) - Y.row(k);
                double dn2 = dneg.squaredNorm();
                double repel = 2.0 / ((0.001 + dn2) * (1.0 + dn2));
                Y.row(i) += alpha * clip(repel * dneg);
            }
        }
    }
    return Layout(Y);
}

// --- Barnes-Hut repulsion -------------------------------------------------

namespace {

struct BhNode {
    Eigen::RowVectorXd center;   // geometric center of the cell
    double half = 0.0;           // half of the cell width
    Eigen::RowVectorXd centroid; // running mean of contained points
    int count = 0;
    std::vector<int> children;   // empty for leaves
    std::vector<int> points;     // populated at leaves
};

class BhTree {
  public:
    BhTree(const Eigen::MatrixXd& Y) : Y_(Y), dim_(static_cast<int>(Y.cols())) {
        Eigen::RowVectorXd lo = Y.colwise().minCoeff();
        Eigen::RowVectorXd hi = Y.colwise().maxCoeff();
        Eigen::RowVectorXd center = (lo + hi) / 2.0;
        double half = std::max((hi - lo).maxCoeff() / 2.0, 1e-12) * 1.0000001;
        root_ = make_node(center, half);
        for (int i = 0; i < Y.rows(); ++i) insert(root_, i, 0);
    }

    void accumulate(int i, double theta, Eigen::RowVectorXd& force, double& z) const {
        walk(root_, i, theta, force, z);
    }

  private:
    static constexpr int kMaxDepth = 48;

    int make_node(const Eigen::RowVectorXd& center, double half) {
        nodes_.push_back({center, half, Eigen::RowVectorXd::Zero(dim_), 0, {}, {}});
        return static_cast<int>(nodes_.size()) - 1;
    }

    int child_for(int node, int point) {
        int quadrant = 0;
        for (int d = 0; d < dim_; ++d)
            if (Y_(point, d) > nodes_[node].center[d]) quadrant |= 1 << d;
        if (nodes_[node].children.empty()) {
            nodes_[node].children.reserve(1 << dim_);
            double h = nodes_[node].half / 2.0;
            Eigen::RowVectorXd c0 = nodes_[node].center;
            for (int q = 0; q < (1 << dim_); ++q) {
                Eigen::RowVectorXd c = c0;
                for (int d = 0; d < dim_; ++d) c[d] += (q & (1 << d)) ? h : -h;
                // make_node may reallocate nodes_, so sequence it before
                // touching nodes_[node] again.
                int child = make_node(c, h);
                nodes_[node].children.push_back(child);
            }
        }
        return nodes_[node].children[quadrant];
    }

    void insert(int node, int point, int depth) {
        BhNode& nd = nodes_[node];
        nd.centroid = (nd.centroid * nd.count + Y_.row(point)) / (nd.count + 1);
        nd.count += 1;
        if (depth == kMaxDepth) {
            nd.points.push_back(point);
            return;
        }
        if (nd.count == 1 && nd.children.empty()) {
            nd.points.push_back(point);
            return;
        }
        // Push down any point previously parked at this leaf.
        std::vector<int> parked = std::move(nd.points);
        nodes_[node].points.clear();
        for (int p : parked) insert(child_for(node, p), p, depth + 1);
        insert(child_for(node, point), point, depth + 1);
    }

    void walk(int node, int i, double theta, Eigen::RowVectorXd& force, double& z) const {
        const BhNode& nd = nodes_[node];
        if (nd.count == 0) return;
        if (!nd.points.empty()) {
            for (int j : nd.points) {
                if (j == i) continue;
                Eigen::RowVectorXd delta = Y_.row(i) - Y_.row(j);
                double q = 1.0 / (1.0 + delta.squaredNorm());
                force += q * q * delta;
                z += q;
            }
            return;
        }
        Eigen::RowVectorXd delta = Y_.row(i) - nd.centroid;
        double dist = delta.norm();
        if (dist > 0.0 && (2.0 * nd.half) / dist < theta) {
            double q = 1.0 / (1.0 + delta.squaredNorm());
            force += nd.count * q * q * delta;
            z += nd.count * q;
            return;
        }
        for (int c : nd.children) walk(c, i, theta, force, z);
    }

    const Eigen::MatrixXd& Y_;
    int dim_;
    std::vector<BhNode> nodes_;
    int root_;
};

}  // namespace

RepulsionResult barnes_hut_repulsion(const Layout& layout, double theta) {
    if (theta <= 0.0 || theta > 1.0) throw ConfigError("theta must lie in (0, 1]");
    const Eigen::MatrixXd& Y = layout.coords();
    const int n = static_cast<int>(Y.rows());
    BhTree tree(Y);
    Eigen::MatrixXd forces = Eigen::MatrixXd::Zero(n, Y.cols());
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        Eigen::RowVectorXd f = Eigen::RowVectorXd::Zero(Y.cols());
        tree.accumulate(i, theta, f, z);
        forces.row(i) = f;
    }
    return {forces, std::max(z, 1e-300)};
}

RepulsionResult exact_repulsion(const Layout& layout) {
    const Eigen::MatrixXd& Y = layout.coords();
    const int n = static_cast<int>(Y.rows());
    Eigen::MatrixXd forces = Eigen::MatrixXd::Zero(n, Y.cols());
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            Eigen::RowVectorXd delta = Y.row(i) - Y.row(j);
            double q = 1.0 / (1.0 + delta.squaredNorm());
            forces.row(i) += q * q * delta;
            z += q;
        }
    }
    return {forces, z};
}

}  // namespace graphdr
