#pragma once

#include <optional>
#include <vector>

#include "graphok/potential.hpp"
#include "graphok/spectral.hpp"

namespace gok {

// Sign classes of graphs built from the centred equilibrium measures
// f^j = nu^(V\{j}) - A(nu^(V\{j})):
//   class C        : f^j_i >= 0 for all i != j
//   class C0       : f^j_i >= 0 wherever w_ij = 0
//   class C_gamma  : in C0 and w_ij/d_i^r + gamma d_j^r f^j_i / vol V > 0
//                    on every edge (gamma = 0 imposes nothing extra).
// On such graphs L acts as a graph Laplacian of a reweighted graph.

struct PairWitness {
    int i = -1, j = -1;
    double value = 0.0;
};

struct ClassReport {
    bool in_c = false;
    bool in_c0 = false;
    bool in_c_gamma = false;
    double gamma = 0.0;
    std::optional<double> gamma_star;  // only when in C0 \ C
    PairWitness worst_f;               // min of f^j_i over i != j
    PairWitness worst_offdiagonal;     // min of f^j_i over non-edges
    PairWitness worst_edge_expr;       // min of the C_gamma edge expression
    PairWitness worst_pair_expr;       // min of the expression over all i != j
};

/// f^j for every j, by direct equilibrium-measure solves (n dense solves).
std::vector<NodeFunction> f_functions(const Graph& g, const CalculusParams& p);

/// Matrix with column j equal to the zero-mass potential of chi_{j}
/// (phi^j = -d_j^r f^j / vol V), via one spectral triple product.
Eigen::MatrixXd potential_columns(const Spectrum& spec);

/// Membership scan of all ordered pairs, using the spectral route.
/// Sign tests treat anything within 1e-12 of zero as zero.
ClassReport classify(const Graph& g, const CalculusParams& p, const Spectrum& spec,
                     double gamma);

/// gamma_star = vol V * min over pairs with f^j_i < 0 of
/// w_ij / (d_i^r d_j^r |f^j_i|); infinite (nullopt) when G is in C.
std::optional<double> gamma_star(const Graph& g, const CalculusParams& p, const Spectrum& spec);

struct SufficientConditions {
    bool cond_c = false;   // w_ij M(nu^(V\{j})) <= vol V d_i^r on edges
    bool cond_c0 = false;  // shared-neighbour variant on non-edges
};

SufficientConditions sufficient_conditions(const Graph& g, const CalculusParams& p);

/// Shared-neighbour weight  N_s(i,j) = sum_(k adjacent to j) w_ik.
double shared_neighbour_weight(const Graph& g, int i, int j);

/// The reweighted graph whose (unnormalized) Laplacian equals L. Requires
/// r = 0 and membership in C_gamma; roundoff-scale negative weights are
/// clamped to zero.
Graph tilde_graph(const Graph& g, const CalculusParams& p, const Spectrum& spec, double gamma);

/// F0(chi_S) read off the transformed graph: the energy becomes the plain
/// cut weight sum_{i in S, j not in S} w~_ij there (its total variation at
/// q = 1).
double f0_via_tilde(const Graph& tilde, const NodeSet& s);

/// Same value through the transformed graph's curvature, <kappa~_S, chi_S>.
double f0_via_tilde_curvature(const Graph& tilde, const NodeSet& s);

/// Bracketing interval for w~_ij - w_ij at r = 0 (i != j).
std::pair<double, double> weight_increase_bounds(const Spectrum& spec, double gamma, int i,
                                                 int j);

} // namespace gok
