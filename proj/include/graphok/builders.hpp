#pragma once

#include <cstdint>
#include <string>

#include "graphok/graph.hpp"

namespace gok {

/// Unweighted star: node 0 is the centre, nodes 1..n-1 are leaves.
Graph star(int n);

Graph complete(int n);

/// Complete bipartite on parts {0..n1-1} and {n1..n1+n2-1}.
Graph complete_bipartite(int n1, int n2);

/// 4-regular sqrt(n) x sqrt(n) grid with periodic boundary, row-major
/// node order. n must be a perfect square.
Graph torus_grid(int n);

/// Square lattice stitched to a triangulated lattice along one column.
///
/// Layout (row-major, 67 x 6 plane, no periodic boundary): every lattice
/// cell keeps its horizontal and vertical edges; cells whose left node
/// column is >= 3 additionally carry one diagonal, oriented by cell parity
/// so the right half is tiled entirely by triangles (tetrakis style,
/// interior degrees alternating 4 and 8). Only n = 402 is supported; see
/// docs/graphs.md for a sketch.
Graph stitched(int n);

struct TwoMoonsParams {
    int samples_per_moon = 300;
    int ambient_dimension = 100;
    double noise_sigma = 0.02;
    int k_nearest = 10;
    std::uint64_t rng_seed = 1;

    void validate() const;
};

/// Weighted symmetric K-NN graph on two noisy half-circles embedded in
/// R^ambient_dimension. Weights are exp(-dist^2/sigma_w^2) with sigma_w the
/// mean K-NN distance; the directed K-NN relation is symmetrized by max.
/// Deterministic for a fixed seed. Retries with a larger k when the K-NN
/// graph comes out disconnected.
Graph two_moons(const TwoMoonsParams& params);

/// Text edge list: one "i j w" triple per line, 0-based indices, '#' starts
/// a comment, blank lines ignored. With symmetrize set the parsed matrix A
/// is replaced by (A + A^T)/2. Self-loops are dropped and counted.
Graph load_weighted_edgelist(const std::string& path, bool symmetrize,
                             int* dropped_self_loops = nullptr);

/// Inverse of load_weighted_edgelist (upper triangle, one line per edge).
void save_edgelist(const Graph& g, const std::string& path);

} // namespace gok
