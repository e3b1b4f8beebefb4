#include "graphok/functionals.hpp"

#include <cmath>

namespace gok {

double hminus1_norm_sq(const Spectrum& spec, const NodeFunction& u) {
    Eigen::VectorXd c = spec.coefficients(u);
    double acc = 0.0;
    for (int m = 1; m < spec.size(); ++m) acc += c(m) * c(m) / spec.eigenvalue(m);
    return acc;
}

double f0(const Graph& g, const CalculusParams& p, const Spectrum& spec, double gamma,
          const NodeFunction& u) {
    return total_variation(g, p, u) + gamma * hminus1_norm_sq(spec, u);
}

double f0_spectral(const Spectrum& spec, double gamma, const NodeFunction& chi) {
    Eigen::VectorXd c = spec.coefficients(chi);
    double acc = 0.0;
    for (int m = 1; m < spec.size(); ++m) {
        double lam = spec.eigenvalue(m);
        acc += (lam + gamma / lam) * c(m) * c(m);
    }
    return acc;
}

double double_well(double x) {
    double y = x * (x - 1.0);
    return y * y;
}

double double_well_prime(double x) { return 2.0 * x * (x - 1.0) * (2.0 * x - 1.0); }

double f_eps(const Graph& g, const CalculusParams& /*p: no term depends on q or r*/,
             const Spectrum& spec, double gamma, double eps, const NodeFunction& u) {
    if (eps <= 0.0) fail(Err::NonpositiveEpsilon, "the interface parameter must be positive");
    double well = 0.0;
    for (int i = 0; i < u.size(); ++i) well += double_well(u(i));
    return dirichlet_energy(g, u) + well / eps + 0.5 * gamma * hminus1_norm_sq(spec, u);
}

double j_tau(const OperatorL& op, double tau, const NodeFunction& u) {
    const Spectrum& spec = op.spectrum();
    NodeFunction diffused = op.semigroup(tau, u);
    NodeFunction ones = NodeFunction::Ones(u.size());
    return (ones - u).dot(spec.node_weights().asDiagonal() * diffused);
}

double dj_tau(const OperatorL& op, double tau, const NodeFunction& u, const NodeFunction& v) {
    const Spectrum& spec = op.spectrum();
    NodeFunction diffused = op.semigroup(tau, u);
    NodeFunction ones = NodeFunction::Ones(u.size());
    return (ones - 2.0 * diffused).dot(spec.node_weights().asDiagonal() * v);
}

double gamma_limit_gap(const OperatorL& op, double tau, const NodeFunction& chi) {
    if (tau <= 0.0) fail(Err::ConfigError, "tau must be positive");
    return std::abs(j_tau(op, tau, chi) / tau - f0_spectral(op.spectrum(), op.gamma(), chi));
}

EnergyReport energy_report(const Graph& g, const CalculusParams& p, const Spectrum& spec,
                           double gamma, const NodeFunction& u, std::optional<double> eps,
                           const OperatorL* op, std::optional<double> tau) {
    EnergyReport rep;
    rep.q = p.q;
    rep.r = p.r;
    rep.gamma = gamma;
    rep.tv = total_variation(g, p, u);
    rep.hminus1 = hminus1_norm_sq(spec, u);
    rep.f0 = rep.tv + gamma * rep.hminus1;
    if (eps) {
        rep.eps = eps;
        rep.feps = f_eps(g, p, spec, gamma, *eps, u);
    }
    if (op && tau) {
        rep.tau = tau;
        rep.jtau = j_tau(*op, *tau, u);
    }
    return rep;
}

} // namespace gok
