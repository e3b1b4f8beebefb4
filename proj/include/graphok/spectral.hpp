#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "graphok/calculus.hpp"
#include "graphok/graph.hpp"

namespace gok {

/// Full eigendecomposition of the graph Laplacian for one (graph, r) pair.
///
/// Eigenvalues ascend, eigenvalue 0 is stored exactly as 0 and its
/// eigenfunction replaced by the exact constant (vol V)^(-1/2) chi_V.
/// Eigenfunctions are V-orthonormal: for r != 0 the solve runs on the
/// conjugated matrix D^(r/2) Lap D^(-r/2) (Euclidean-symmetric) and maps
/// back, which keeps the orthonormality exact up to roundoff.
///
/// Determinism: the basis of every degenerate eigenspace is replaced by
/// the Gram-Schmidt orthonormalization of the coordinate-axis projections
/// onto that eigenspace (a function of the spectral projector alone, so
/// identical across eigensolver backends), and every eigenvector is
/// flipped to make its inner product with a fixed generic reference
/// vector positive (falling back to "largest-magnitude entry positive"
/// when that product vanishes).
class Spectrum {
public:
    static Spectrum compute(const Graph& g, const CalculusParams& p);

    int size() const noexcept { return static_cast<int>(eigenvalues_.size()); }
    const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
    double eigenvalue(int m) const { return eigenvalues_(m); }
    /// Columns are the V-orthonormal eigenfunctions.
    const Eigen::MatrixXd& eigenfunctions() const noexcept { return basis_; }
    NodeFunction eigenfunction(int m) const { return basis_.col(m); }
    const CalculusParams& params() const noexcept { return params_; }
    const Eigen::VectorXd& node_weights() const noexcept { return dr_; }
    double volume() const noexcept { return vol_; }

    /// V-inner products of u against every eigenfunction.
    Eigen::VectorXd coefficients(const NodeFunction& u) const {
        return basis_.transpose() * (dr_.asDiagonal() * u);
    }
    NodeFunction synthesize(const Eigen::VectorXd& coeffs) const { return basis_ * coeffs; }

private:
    friend Spectrum load_spectrum(const Graph& g, const CalculusParams& p,
                                  const std::string& path);

    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd basis_;
    Eigen::VectorXd dr_;
    double vol_ = 0.0;
    CalculusParams params_;
};

/// phi with Lap(phi) = u - A(u) and M(phi) = 0, via the spectral expansion.
NodeFunction poisson_zero_mass(const Spectrum& spec, const NodeFunction& u);

/// L u = Lap(u) + gamma * phi with phi the zero-mass potential of u.
/// Diagonalized by the Laplacian eigenbasis with eigenvalues
/// Lambda_m = lambda_m + gamma/lambda_m (Lambda_0 = 0).
class OperatorL {
public:
    OperatorL(std::shared_ptr<const Spectrum> spec, double gamma);

    const Spectrum& spectrum() const noexcept { return *spec_; }
    std::shared_ptr<const Spectrum> spectrum_ptr() const noexcept { return spec_; }
    double gamma() const noexcept { return gamma_; }
    const Eigen::VectorXd& eigenvalues() const noexcept { return lambdas_; }

    /// Smallest nonzero eigenvalue of L.
    double lambda_minus() const;
    /// Spectral radius of L.
    double lambda_plus() const;

    NodeFunction apply(const NodeFunction& u) const;
    /// e^(-tau L) u0 by full spectral expansion; tau = 0 is the identity.
    NodeFunction semigroup(double tau, const NodeFunction& u0) const;
    /// Dense matrix of L (for oracles and the transformed-graph checks).
    Eigen::MatrixXd matrix() const;

private:
    std::shared_ptr<const Spectrum> spec_;
    double gamma_;
    Eigen::VectorXd lambdas_;
};

OperatorL build_L(std::shared_ptr<const Spectrum> spec, double gamma);

/// FNV-1a over (n, r, weight bytes); keys the spectrum cache.
std::uint64_t graph_hash(const Graph& g, const CalculusParams& p);

/// Versioned text dump of a spectrum ("graphok-spectrum 1" header, hash,
/// eigenvalues, eigenfunctions). load verifies the stored hash against the
/// given graph and fails on mismatch.
void save_spectrum(const Spectrum& spec, const Graph& g, const std::string& path);
Spectrum load_spectrum(const Graph& g, const CalculusParams& p, const std::string& path);

} // namespace gok
