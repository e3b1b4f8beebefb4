#pragma once

#include <cstdint>

#include "graphok/calculus.hpp"
#include "graphok/graph.hpp"

namespace gok {

/// Equilibrium measure of a proper subset: the unique nonnegative function
/// with Lap(nu) = 1 on S and nu = 0 off S; its support is exactly S.
struct EquilibriumMeasure {
    NodeSet subset;
    NodeFunction nu;
};

/// Direct dense solve of the S x S principal subsystem (an irreducible
/// M-matrix). S = {} gives the zero function; S = V is rejected since
/// Lap(u) = 1 has no solution there.
EquilibriumMeasure equilibrium_measure(const Graph& g, const CalculusParams& p,
                                       const NodeSet& s);

enum class GreensKind { Dirichlet, Poisson };

/// Green's function table. Dirichlet: values is n x |S|, column order
/// follows the sorted subset; Poisson: values is n x n with the pinned row
/// k identically zero.
struct GreensTable {
    GreensKind kind;
    NodeSet subset;       // Dirichlet column set; {k} for Poisson
    Eigen::MatrixXd values;

    /// Column of G belonging to source node j (Dirichlet: j must be in S).
    NodeFunction column(int j) const;
};

/// Dirichlet Green's function on S, built from equilibrium measures:
/// G^j = nu^S_j / (M(nu^S) - M(nu^(S\{j}))) * (nu^S - nu^(S\{j})).
GreensTable greens_dirichlet(const Graph& g, const CalculusParams& p, const NodeSet& s);

/// Poisson Green's function pinned at k:
/// G_ij = (nu^(V\{k})_i + nu^(V\{j})_k - nu^(V\{j})_i) / vol(V).
GreensTable greens_poisson(const Graph& g, const CalculusParams& p, int k);

/// u_i = sum_(j in S) d_j^r G_ij f_j; solves the associated problem.
NodeFunction greens_solve(const Graph& g, const CalculusParams& p, const GreensTable& table,
                          const NodeFunction& f);

struct RandomWalkEstimate {
    NodeFunction probability;  // Monte-Carlo estimate of P[hit a before b | start i]
    NodeFunction exact;        // Green's-function value G^a_i / c_ab
    NodeFunction std_error;    // binomial standard error per node
    std::int64_t walks;
};

/// Discrete-time random walk with transition probabilities w_ij / d_i,
/// absorbed at a or b. The exact reference value uses the Poisson Green's
/// function pinned at b.
RandomWalkEstimate random_walk_green_estimate(const Graph& g, const CalculusParams& p, int a,
                                              int b, std::int64_t walks, std::uint64_t seed);

} // namespace gok
