#pragma once

#include <vector>

#include "graphok/graph.hpp"

namespace gok {

// Discrete (q, r)-calculus. Node inner product weighs node i by d_i^r;
// the edge inner product carries w^(2q-1), the gradient w^(1-q), with the
// convention w^0 := 0 on non-edges so nothing becomes nonlocal.

/// d_i^r for every node, as a vector.
Eigen::VectorXd degree_weights(const Graph& g, const CalculusParams& p);

double volume(const Graph& g, const CalculusParams& p, const NodeSet& s);
double total_volume(const Graph& g, const CalculusParams& p);

/// M(u) = sum_i d_i^r u_i.
double mass(const Graph& g, const CalculusParams& p, const NodeFunction& u);

/// A(u) = M(u)/vol(V) * chi_V; the constant function with M(u - A(u)) = 0.
NodeFunction average(const Graph& g, const CalculusParams& p, const NodeFunction& u);

double v_inner(const Graph& g, const CalculusParams& p, const NodeFunction& u,
               const NodeFunction& v);
double e_inner(const Graph& g, const CalculusParams& p, const EdgeFunction& phi,
               const EdgeFunction& psi);
double v_norm(const Graph& g, const CalculusParams& p, const NodeFunction& u);
double e_norm(const Graph& g, const CalculusParams& p, const EdgeFunction& phi);
double v_inf_norm(const NodeFunction& u);

/// (grad u)_ij = w_ij^(1-q) (u_j - u_i) on edges, 0 elsewhere.
EdgeFunction gradient(const Graph& g, const CalculusParams& p, const NodeFunction& u);

/// (div phi)_i = d_i^-r sum_j w_ij^q phi_ji; adjoint of the gradient.
NodeFunction divergence(const Graph& g, const CalculusParams& p, const EdgeFunction& phi);

/// (Lap u)_i = d_i^-r sum_j w_ij (u_i - u_j).
NodeFunction laplacian_apply(const Graph& g, const CalculusParams& p, const NodeFunction& u);

/// Dense matrix of the Laplacian, row i scaled by d_i^-r.
Eigen::MatrixXd laplacian_matrix(const Graph& g, const CalculusParams& p);

/// TV(u) = 1/2 sum_ij w_ij^q |u_i - u_j|. Depends on q, not on r.
double total_variation(const Graph& g, const CalculusParams& p, const NodeFunction& u);

/// 1/2 ||grad u||_E^2 = 1/4 sum_ij w_ij (u_i - u_j)^2. Independent of q and r.
double dirichlet_energy(const Graph& g, const NodeFunction& u);

/// Graph curvature of S: positive on S, negative off S, so that for q = 1
/// it satisfies Lap(chi_S) = kappa_S.
NodeFunction curvature(const Graph& g, const CalculusParams& p, const NodeSet& s);
double curvature_max(const Graph& g, const CalculusParams& p, const NodeSet& s);

/// All masses realizable by binary functions, ascending. Exponential in the
/// worst case; refuses n beyond the cap.
std::vector<double> admissible_masses(const Graph& g, const CalculusParams& p, int cap = 25);

} // namespace gok
