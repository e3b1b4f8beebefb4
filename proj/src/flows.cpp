#include "graphok/flows.hpp"

#include <cmath>
#include <fstream>

namespace gok {

NodeFunction flow_rhs(const Graph& g, const CalculusParams& p, const Spectrum& spec,
                      const FlowConfig& config, const NodeFunction& u) {
    config.validate();
    const int n = g.size();
    NodeFunction wprime(n);
    for (int i = 0; i < n; ++i)
        wprime(i) = double_well_prime(u(i)) * std::pow(g.degree(i), -p.r);

    if (config.kind == FlowKind::AllenCahnConstrained) {
        NodeFunction phi = poisson_zero_mass(spec, u); // already zero mass
        return -laplacian_apply(g, p, u) - (wprime - average(g, p, wprime)) / config.eps -
               config.gamma * (phi - average(g, p, phi));
    }
    NodeFunction lap_u = laplacian_apply(g, p, u);
    return -laplacian_apply(g, p, lap_u) - laplacian_apply(g, p, wprime) / config.eps -
           config.gamma * (u - average(g, p, u));
}

FlowTrajectory flow_integrate(const Graph& g, const CalculusParams& p, const Spectrum& spec,
                              const FlowConfig& config, const NodeFunction& u0) {
    config.validate();
    constexpr int kMaxHalvings = 20;

    FlowTrajectory traj;
    NodeFunction u = u0;
    double energy = f_eps(g, p, spec, config.gamma, config.eps, u);
    traj.f_eps.push_back(energy);
    traj.mass.push_back(mass(g, p, u));

    for (int k = 0; k < config.steps; ++k) {
        NodeFunction rhs = flow_rhs(g, p, spec, config, u);
        double h = config.step;
        int halvings = 0;
        while (true) {
            NodeFunction candidate = u + h * rhs;
            double cand_energy = f_eps(g, p, spec, config.gamma, config.eps, candidate);
            if (cand_energy <= energy) {
                u = std::move(candidate);
                energy = cand_energy;
                break;
            }
            if (++halvings > kMaxHalvings)
                fail(Err::StepSizeUnderflow,
                     "energy refused to decrease after 20 step halvings");
            h *= 0.5;
            ++traj.halvings;
        }
        ++traj.accepted_steps;
        traj.f_eps.push_back(energy);
        traj.mass.push_back(mass(g, p, u));
    }
    traj.final_state = std::move(u);
    return traj;
}

void save_trajectory_csv(const FlowTrajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(Err::ParseError, "cannot open " + path + " for writing");
    out.precision(17);
    out << "k,F_eps,mass\n";
    for (std::size_t k = 0; k < traj.f_eps.size(); ++k)
        out << k << ',' << traj.f_eps[k] << ',' << traj.mass[k] << '\n';
}

} // namespace gok
