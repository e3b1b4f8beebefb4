#pragma once

#include <optional>

#include "graphok/spectral.hpp"

namespace gok {

/// ||u - A(u)||_{H^-1}^2 = sum_{m>=1} <u, phi^m>^2 / lambda_m.
/// Equals the Dirichlet energy of the zero-mass Poisson potential of u;
/// independent of q and of the pinning node.
double hminus1_norm_sq(const Spectrum& spec, const NodeFunction& u);

/// Sharp-interface energy  F0(u) = TV(u) + gamma * ||u - A(u)||_{H^-1}^2.
///
/// The gamma coefficient is chosen so that on binary inputs with q = 1 the
/// value coincides with the spectral form sum (lambda_m + gamma/lambda_m)
/// <chi_S, phi^m>^2 and with the star-graph closed form; those two fix the
/// H^-1 weight as gamma, not gamma/2.
double f0(const Graph& g, const CalculusParams& p, const Spectrum& spec, double gamma,
          const NodeFunction& u);

/// Spectral form of F0 for binary inputs (q = 1).
double f0_spectral(const Spectrum& spec, double gamma, const NodeFunction& chi);

/// Double-well potential x^2 (x-1)^2 and its derivative.
double double_well(double x);
double double_well_prime(double x);

/// Diffuse-interface energy
/// F_eps(u) = 1/2 ||grad u||_E^2 + 1/eps * sum_i W(u_i)
///            + gamma/2 * ||u - A(u)||_{H^-1}^2.
/// The gamma/2 coefficient keeps the mass-constrained gradient flows in
/// flows.hpp exact: their H^-1 term differentiates to gamma * phi.
double f_eps(const Graph& g, const CalculusParams& p, const Spectrum& spec, double gamma,
             double eps, const NodeFunction& u);

/// Lyapunov functional J_tau(u) = <chi_V - u, e^(-tau L) u>_V.
double j_tau(const OperatorL& op, double tau, const NodeFunction& u);

/// Directional derivative dJ_tau^u(v) = <chi_V - 2 e^(-tau L) u, v>_V.
double dj_tau(const OperatorL& op, double tau, const NodeFunction& u, const NodeFunction& v);

/// | (1/tau) J_tau(chi_S) - F0(chi_S) |; O(tau) for binary inputs at q = 1.
double gamma_limit_gap(const OperatorL& op, double tau, const NodeFunction& chi);

/// One evaluation bundle of the energies at a state.
struct EnergyReport {
    double tv = 0.0;
    double hminus1 = 0.0;
    double f0 = 0.0;
    std::optional<double> feps;
    std::optional<double> jtau;
    double q = 1.0, r = 0.0, gamma = 0.0;
    std::optional<double> eps, tau;
};

EnergyReport energy_report(const Graph& g, const CalculusParams& p, const Spectrum& spec,
                           double gamma, const NodeFunction& u,
                           std::optional<double> eps = std::nullopt,
                           const OperatorL* op = nullptr,
                           std::optional<double> tau = std::nullopt);

} // namespace gok
