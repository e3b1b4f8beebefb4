#include "graphok/builders.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

namespace gok {

Graph star(int n) {
    if (n < 3) fail(Err::TooSmall, "star graphs need n >= 3");
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int j = 1; j < n; ++j) w(0, j) = w(j, 0) = 1.0;
    return Graph(std::move(w));
}

Graph complete(int n) {
    if (n < 2) fail(Err::TooSmall, "complete graphs need n >= 2");
    Eigen::MatrixXd w = Eigen::MatrixXd::Ones(n, n);
    w.diagonal().setZero();
    return Graph(std::move(w));
}

Graph complete_bipartite(int n1, int n2) {
    if (n1 < 1 || n2 < 1) fail(Err::TooSmall, "both parts need at least one node");
    const int n = n1 + n2;
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n1; ++i)
        for (int j = n1; j < n; ++j) w(i, j) = w(j, i) = 1.0;
    return Graph(std::move(w));
}

Graph torus_grid(int n) {
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (side * side != n) fail(Err::NotSquare, std::to_string(n) + " is not a perfect square");
    if (side < 3) fail(Err::TooSmall, "torus grids need at least 3 x 3 nodes");
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    auto id = [side](int i, int j) { return ((i + side) % side) * side + (j + side) % side; };
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) {
            int a = id(i, j);
            w(a, id(i, j + 1)) = w(id(i, j + 1), a) = 1.0;
            w(a, id(i + 1, j)) = w(id(i + 1, j), a) = 1.0;
        }
    return Graph(std::move(w));
}

namespace {

constexpr int kStitchedRows = 67;
constexpr int kStitchedCols = 6;
constexpr int kStitchedSeam = 3; // cells with left node column >= 3 are triangular

} // namespace

Graph stitched(int n) {
    if (n != kStitchedRows * kStitchedCols)
        fail(Err::UnsupportedSize, "stitched graph is defined for n = 402 only");
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    auto id = [](int i, int j) { return i * kStitchedCols + j; };
    for (int i = 0; i < kStitchedRows; ++i)
        for (int j = 0; j < kStitchedCols; ++j) {
            int a = id(i, j);
            if (j + 1 < kStitchedCols) w(a, id(i, j + 1)) = w(id(i, j + 1), a) = 1.0;
            if (i + 1 < kStitchedRows) w(a, id(i + 1, j)) = w(id(i + 1, j), a) = 1.0;
            // triangular half: one diagonal per cell, orientation alternating
            // with the cell parity (isometric triangle tiling)
            if (j >= kStitchedSeam && i + 1 < kStitchedRows && j + 1 < kStitchedCols) {
                if ((i + j) % 2 == 0)
                    w(a, id(i + 1, j + 1)) = w(id(i + 1, j + 1), a) = 1.0;
                else
                    w(id(i + 1, j), id(i, j + 1)) = w(id(i, j + 1), id(i + 1, j)) = 1.0;
            }
        }
    return Graph(std::move(w));
}

void TwoMoonsParams::validate() const {
    if (samples_per_moon < 2) fail(Err::TooSmall, "need at least 2 samples per moon");
    if (ambient_dimension < 2) fail(Err::ConfigError, "ambient dimension must be >= 2");
    if (noise_sigma < 0.0) fail(Err::ConfigError, "noise sigma must be nonnegative");
    if (k_nearest < 1) fail(Err::ConfigError, "k-nearest must be >= 1");
    if (samples_per_moon < k_nearest + 1)
        fail(Err::ConfigError, "need samples >= k_nearest + 1");
}

namespace {

Eigen::MatrixXd sample_moons(const TwoMoonsParams& p) {
    const int m = p.samples_per_moon;
    Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(2 * m, p.ambient_dimension);
    std::mt19937_64 rng(p.rng_seed);
    std::uniform_real_distribution<double> angle(0.0, M_PI);
    std::normal_distribution<double> noise(0.0, p.noise_sigma);
    for (int i = 0; i < m; ++i) {
        double t = angle(rng);
        pts(i, 0) = std::cos(t);
        pts(i, 1) = std::sin(t);
    }
    for (int i = 0; i < m; ++i) {
        double t = angle(rng);
        pts(m + i, 0) = 1.0 - std::cos(t);
        pts(m + i, 1) = 0.5 - std::sin(t);
    }
    if (p.noise_sigma > 0.0)
        for (int i = 0; i < 2 * m; ++i)
            for (int d = 0; d < p.ambient_dimension; ++d) pts(i, d) += noise(rng);
    return pts;
}

// max-symmetrized Gaussian K-NN weights; empty optional stands for
// "came out disconnected"
bool knn_graph(const Eigen::MatrixXd& pts, int k, Eigen::MatrixXd& w_out) {
    const int n = static_cast<int>(pts.rows());
    Eigen::MatrixXd dist2(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double d2 = (pts.row(i) - pts.row(j)).squaredNorm();
            dist2(i, j) = dist2(j, i) = d2;
        }
        dist2(i, i) = 0.0;
    }

    std::vector<std::vector<int>> nearest(n);
    double mean_knn_dist = 0.0;
    for (int i = 0; i < n; ++i) {
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (dist2(i, a) != dist2(i, b)) return dist2(i, a) < dist2(i, b);
            return a < b;
        });
        // order[0] is i itself
        for (int s = 1; s <= k; ++s) {
            nearest[i].push_back(order[s]);
            mean_knn_dist += std::sqrt(dist2(i, order[s]));
        }
    }
    mean_knn_dist /= static_cast<double>(n) * k;
    const double sigma_w2 = mean_knn_dist * mean_knn_dist;

    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j : nearest[i]) {
            double wij = std::exp(-dist2(i, j) / sigma_w2);
            w(i, j) = std::max(w(i, j), wij);
            w(j, i) = w(i, j);
        }

    // connectivity probe before handing to Graph
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        for (int j = 0; j < n; ++j)
            if (w(i, j) > 0.0 && !seen[j]) {
                seen[j] = 1;
                ++reached;
                stack.push_back(j);
            }
    }
    if (reached != n) return false;
    w_out = std::move(w);
    return true;
}

} // namespace

Graph two_moons(const TwoMoonsParams& params) {
    params.validate();
    Eigen::MatrixXd pts = sample_moons(params);
    const int k_max = 2 * params.samples_per_moon - 1;
    int k = std::min(params.k_nearest, k_max);
    constexpr int kRetries = 5;
    for (int attempt = 0; attempt <= kRetries; ++attempt) {
        Eigen::MatrixXd w;
        if (knn_graph(pts, k, w)) return Graph(std::move(w));
        if (k == k_max) break;
        k = std::min(k + 5, k_max);
    }
    fail(Err::DisconnectedAfterRetries,
         "two-moons K-NN graph stayed disconnected after increasing k");
}

Graph load_weighted_edgelist(const std::string& path, bool symmetrize,
                             int* dropped_self_loops) {
    std::ifstream in(path);
    if (!in) fail(Err::ParseError, "cannot open " + path);

    struct Entry {
        int i, j;
        double w;
    };
    std::vector<Entry> entries;
    int max_node = -1;
    int dropped = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        int i, j;
        double w;
        if (!(ls >> i)) continue; // blank or comment-only line
        if (!(ls >> j >> w)) fail(Err::ParseError, path + ":" + std::to_string(line_no));
        std::string rest;
        if (ls >> rest) fail(Err::ParseError, path + ":" + std::to_string(line_no) +
                                                  ": trailing token '" + rest + "'");
        if (i < 0 || j < 0)
            fail(Err::ParseError, path + ":" + std::to_string(line_no) + ": negative index");
        if (i == j) {
            ++dropped;
            continue;
        }
        entries.push_back({i, j, w});
        max_node = std::max(max_node, std::max(i, j));
    }
    if (max_node < 1) fail(Err::ParseError, path + ": no edges found");

    const int n = max_node + 1;
    Eigen::MatrixXd w;
    if (symmetrize) {
        // directed reading followed by (A + A^T)/2
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        for (const auto& e : entries) a(e.i, e.j) = e.w;
        w = 0.5 * (a + a.transpose());
    } else {
        // undirected reading: each line is one edge; conflicting duplicates
        // are rejected
        w = Eigen::MatrixXd::Zero(n, n);
        for (const auto& e : entries) {
            if (w(e.i, e.j) != 0.0 && w(e.i, e.j) != e.w)
                fail(Err::ParseError, path + ": conflicting weights for edge (" +
                                          std::to_string(e.i) + "," + std::to_string(e.j) + ")");
            w(e.i, e.j) = w(e.j, e.i) = e.w;
        }
    }
    if (dropped_self_loops) *dropped_self_loops = dropped;
    return Graph(std::move(w));
}

void save_edgelist(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(Err::ParseError, "cannot open " + path + " for writing");
    out.precision(17);
    for (int i = 0; i < g.size(); ++i)
        for (int j : g.neighbours(i))
            if (j > i) out << i << ' ' << j << ' ' << g.weight(i, j) << '\n';
}

} // namespace gok
