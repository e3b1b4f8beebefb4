#include "graphok/classes.hpp"

#include <cmath>
#include <limits>

namespace gok {

namespace {

constexpr double kSignTol = 1e-12;

} // namespace

std::vector<NodeFunction> f_functions(const Graph& g, const CalculusParams& p) {
    const int n = g.size();
    std::vector<NodeFunction> fs(n);
    for (int j = 0; j < n; ++j) {
        NodeSet all_but;
        all_but.reserve(n - 1);
        for (int i = 0; i < n; ++i)
            if (i != j) all_but.push_back(i);
        NodeFunction nu = equilibrium_measure(g, p, all_but).nu;
        fs[j] = nu - average(g, p, nu);
    }
    return fs;
}

Eigen::MatrixXd potential_columns(const Spectrum& spec) {
    const int n = spec.size();
    Eigen::MatrixXd phi = spec.eigenfunctions().rightCols(n - 1);
    Eigen::VectorXd inv_lam(n - 1);
    for (int m = 1; m < n; ++m) inv_lam(m - 1) = 1.0 / spec.eigenvalue(m);
    return phi * inv_lam.asDiagonal() * phi.transpose() *
           Eigen::MatrixXd(spec.node_weights().asDiagonal());
}

ClassReport classify(const Graph& g, const CalculusParams& p, const Spectrum& spec,
                     double gamma) {
    const int n = g.size();
    const double vol = spec.volume();
    const Eigen::VectorXd& dr = spec.node_weights();
    Eigen::MatrixXd phi_cols = potential_columns(spec);
    // f^j_i = -(vol / d_j^r) phi^j_i

    ClassReport rep;
    rep.gamma = gamma;
    rep.worst_f.value = std::numeric_limits<double>::infinity();
    rep.worst_offdiagonal.value = std::numeric_limits<double>::infinity();
    rep.worst_edge_expr.value = std::numeric_limits<double>::infinity();
    rep.worst_pair_expr.value = std::numeric_limits<double>::infinity();

    bool c_ok = true, c0_ok = true, cg_ok = true;
    std::optional<double> gstar;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            const double f_ji = -vol / dr(j) * phi_cols(i, j);
            const double wij = g.weight(i, j);
            const double expr =
                wij * std::pow(g.degree(i), -p.r) + gamma * dr(j) / vol * f_ji;

            if (f_ji < rep.worst_f.value) rep.worst_f = {i, j, f_ji};
            if (expr < rep.worst_pair_expr.value) rep.worst_pair_expr = {i, j, expr};

            if (f_ji < -kSignTol) {
                c_ok = false;
                if (wij > 0.0) {
                    double candidate =
                        vol * wij / (std::pow(g.degree(i), p.r) * dr(j) * std::abs(f_ji));
                    if (!gstar || candidate < *gstar) gstar = candidate;
                }
            }
            if (wij == 0.0) {
                if (f_ji < rep.worst_offdiagonal.value) rep.worst_offdiagonal = {i, j, f_ji};
                if (f_ji < -kSignTol) c0_ok = false;
            } else {
                if (expr < rep.worst_edge_expr.value) rep.worst_edge_expr = {i, j, expr};
                if (gamma > 0.0 && expr <= kSignTol) cg_ok = false;
            }
        }
    }

    rep.in_c = c_ok;
    rep.in_c0 = c0_ok;
    rep.in_c_gamma = gamma == 0.0 ? true : (c0_ok && cg_ok);
    if (!c_ok && c0_ok) rep.gamma_star = gstar;
    return rep;
}

std::optional<double> gamma_star(const Graph& g, const CalculusParams& p, const Spectrum& spec) {
    return classify(g, p, spec, 0.0).gamma_star;
}

double shared_neighbour_weight(const Graph& g, int i, int j) {
    double acc = 0.0;
    for (int k : g.neighbours(j)) acc += g.weight(i, k);
    return acc;
}

SufficientConditions sufficient_conditions(const Graph& g, const CalculusParams& p) {
    const int n = g.size();
    const double vol = total_volume(g, p);
    SufficientConditions out;
    out.cond_c = true;
    out.cond_c0 = true;
    for (int j = 0; j < n; ++j) {
        NodeSet all_but;
        for (int i = 0; i < n; ++i)
            if (i != j) all_but.push_back(i);
        double nu_mass = mass(g, p, equilibrium_measure(g, p, all_but).nu);
        for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            double cap = vol * std::pow(g.degree(i), p.r);
            if (g.has_edge(i, j)) {
                if (g.weight(i, j) * nu_mass > cap + kSignTol) out.cond_c = false;
            } else {
                if (shared_neighbour_weight(g, i, j) * nu_mass > cap + kSignTol)
                    out.cond_c0 = false;
            }
        }
    }
    return out;
}

Graph tilde_graph(const Graph& g, const CalculusParams& p, const Spectrum& spec, double gamma) {
    if (p.r != 0.0)
        fail(Err::RequiresRZero, "the transformed graph is undirected only for r = 0");
    ClassReport rep = classify(g, p, spec, gamma);
    if (!rep.in_c_gamma)
        fail(Err::NotInCgamma, "graph is outside the class for this gamma; worst pair (" +
                                   std::to_string(rep.worst_pair_expr.i) + "," +
                                   std::to_string(rep.worst_pair_expr.j) + ") = " +
                                   std::to_string(rep.worst_pair_expr.value));

    const int n = g.size();
    const auto& phi = spec.eigenfunctions();
    Eigen::VectorXd lambdas = Eigen::VectorXd::Zero(n);
    for (int m = 1; m < n; ++m)
        lambdas(m) = spec.eigenvalue(m) + (gamma > 0.0 ? gamma / spec.eigenvalue(m) : 0.0);

    Eigen::MatrixXd tw = -(phi * lambdas.asDiagonal() * phi.transpose());
    tw.diagonal().setZero();
    tw = 0.5 * (tw + tw.transpose().eval());
    constexpr double kClampTol = 1e-9;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (tw(i, j) < 0.0) {
                if (tw(i, j) < -kClampTol)
                    fail(Err::NotInCgamma, "transformed weight (" + std::to_string(i) + "," +
                                               std::to_string(j) + ") is negative");
                tw(i, j) = 0.0;
            }
    return Graph(std::move(tw));
}

double f0_via_tilde(const Graph& tilde, const NodeSet& s) {
    // F0 on the original graph turns into plain total variation on the
    // transformed one: the weight of the cut between S and its complement.
    std::vector<char> in(tilde.size(), 0);
    for (int i : s) in[i] = 1;
    double acc = 0.0;
    for (int i : s)
        for (int j : tilde.neighbours(i))
            if (!in[j]) acc += tilde.weight(i, j);
    return acc;
}

double f0_via_tilde_curvature(const Graph& tilde, const NodeSet& s) {
    CalculusParams tp{1.0, 0.0};
    NodeFunction kappa = curvature(tilde, tp, s);
    double acc = 0.0;
    for (int i : s) acc += kappa(i);
    return acc;
}

std::pair<double, double> weight_increase_bounds(const Spectrum& spec, double gamma, int i,
                                                 int j) {
    if (spec.params().r != 0.0) fail(Err::RequiresRZero, "the bracket is derived for r = 0");
    if (i == j) fail(Err::ConfigError, "need two distinct nodes");
    const int n = spec.size();
    double quad = 0.0;
    for (int m = 1; m < n; ++m) {
        double diff = spec.eigenfunctions()(i, m) - spec.eigenfunctions()(j, m);
        quad += diff * diff / spec.eigenvalue(m);
    }
    double shared = (1.0 - 1.0 / n);
    double lower = gamma * (0.5 * quad - shared / spec.eigenvalue(1));
    double upper = gamma * (0.5 * quad - shared / spec.eigenvalue(n - 1));
    return {lower, upper};
}

} // namespace gok
