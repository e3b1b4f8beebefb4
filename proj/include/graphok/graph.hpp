#pragma once

#include <Eigen/Dense>
#include <vector>

#include "graphok/errors.hpp"

namespace gok {

using NodeFunction = Eigen::VectorXd;
/// Skew-symmetric edge function, stored dense; zero where there is no edge.
using EdgeFunction = Eigen::MatrixXd;
/// Node subset as a list of 0-based indices (order irrelevant, no duplicates).
using NodeSet = std::vector<int>;

/// Finite, simple, connected, undirected, edge-weighted graph.
///
/// Weights are kept as a dense symmetric matrix with zero diagonal; an
/// adjacency-list view is derived once at construction. Instances are
/// immutable, so concurrent reads need no synchronization.
class Graph {
public:
    /// Validates all invariants (symmetry, zero diagonal, nonnegativity,
    /// positive degrees, connectivity) and throws Error on violation.
    explicit Graph(Eigen::MatrixXd weights);

    int size() const noexcept { return n_; }
    const Eigen::MatrixXd& weights() const noexcept { return weights_; }
    double weight(int i, int j) const { return weights_(i, j); }

    double degree(int i) const { return degrees_(i); }
    const Eigen::VectorXd& degrees() const noexcept { return degrees_; }
    double min_degree() const noexcept { return d_min_; }
    double max_degree() const noexcept { return d_max_; }

    /// Neighbours of node i (nodes j with w(i,j) > 0), ascending.
    const std::vector<int>& neighbours(int i) const { return adjacency_[i]; }

    bool has_edge(int i, int j) const { return weights_(i, j) > 0.0; }

private:
    int n_ = 0;
    Eigen::MatrixXd weights_;
    Eigen::VectorXd degrees_;
    double d_min_ = 0.0, d_max_ = 0.0;
    std::vector<std::vector<int>> adjacency_;
};

/// Inner-product / total-variation conventions: q in [1/2, 1], r in [0, 1].
/// Defaults match the usual experimental choice q = 1, r = 0.
struct CalculusParams {
    double q = 1.0;
    double r = 0.0;

    void validate() const {
        if (!(q >= 0.5 && q <= 1.0))
            fail(Err::ConfigError, "q must lie in [1/2, 1]");
        if (!(r >= 0.0 && r <= 1.0))
            fail(Err::ConfigError, "r must lie in [0, 1]");
    }
};

/// Re-runs the construction-time checks on an existing graph.
void validate(const Graph& g);

/// Indicator function of S on a graph with n nodes.
NodeFunction indicator(const NodeSet& s, int n);

/// Complement of S in {0, ..., n-1}.
NodeSet complement(const NodeSet& s, int n);

/// Recovers {i : u_i >= 1/2} from a (near-)binary function.
NodeSet support_set(const NodeFunction& u, double threshold = 0.5);

} // namespace gok
