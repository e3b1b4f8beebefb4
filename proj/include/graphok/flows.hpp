#pragma once

#include <vector>

#include "graphok/functionals.hpp"

namespace gok {

enum class FlowKind { AllenCahnConstrained, CahnHilliard };

struct FlowConfig {
    double eps = 1.0;
    double gamma = 0.0;
    double step = 1e-3;
    int steps = 100;
    FlowKind kind = FlowKind::AllenCahnConstrained;

    void validate() const {
        if (eps <= 0.0) fail(Err::NonpositiveEpsilon, "eps must be positive");
        if (gamma < 0.0) fail(Err::ConfigError, "gamma must be nonnegative");
        if (step <= 0.0) fail(Err::ConfigError, "step size must be positive");
        if (steps < 1) fail(Err::ConfigError, "need at least one step");
    }
};

/// Right-hand side of the mass-conserving gradient flows of the diffuse
/// energy. Allen-Cahn (V metric, mass projected):
///   -Lap u - (1/eps)(d^-r W'(u) - A(d^-r W'(u))) - gamma (phi - A(phi)),
/// Cahn-Hilliard (H^-1 metric):
///   -Lap(Lap u) - (1/eps) Lap(d^-r W'(u)) - gamma (u - A(u)),
/// with phi the zero-mass Poisson potential of u. Both have zero mass.
NodeFunction flow_rhs(const Graph& g, const CalculusParams& p, const Spectrum& spec,
                      const FlowConfig& config, const NodeFunction& u);

struct FlowTrajectory {
    std::vector<double> f_eps;
    std::vector<double> mass;
    NodeFunction final_state;
    int accepted_steps = 0;
    int halvings = 0;
};

/// Forward Euler with energy-monitored step halving: a step that increases
/// F_eps is retried with half the step size (at most 20 halvings in a row).
FlowTrajectory flow_integrate(const Graph& g, const CalculusParams& p, const Spectrum& spec,
                              const FlowConfig& config, const NodeFunction& u0);

/// CSV with columns k, F_eps, mass.
void save_trajectory_csv(const FlowTrajectory& traj, const std::string& path);

} // namespace gok
