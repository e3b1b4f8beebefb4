#include "graphok/potential.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <random>

namespace gok {

EquilibriumMeasure equilibrium_measure(const Graph& g, const CalculusParams& p,
                                       const NodeSet& s) {
    const int n = g.size();
    NodeSet sorted = s;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (!sorted.empty() && (sorted.front() < 0 || sorted.back() >= n))
        fail(Err::ConfigError, "subset contains out-of-range nodes");
    if (static_cast<int>(sorted.size()) == n)
        fail(Err::FullSubset, "the equilibrium equation has no solution on all of V");

    EquilibriumMeasure out;
    out.subset = sorted;
    out.nu = NodeFunction::Zero(n);
    if (sorted.empty()) return out;

    // (D - W) restricted to S is symmetric positive definite for proper S
    const int m = static_cast<int>(sorted.size());
    Eigen::MatrixXd sys(m, m);
    Eigen::VectorXd rhs(m);
    for (int a = 0; a < m; ++a) {
        int i = sorted[a];
        for (int b = 0; b < m; ++b) {
            int j = sorted[b];
            sys(a, b) = (a == b ? g.degree(i) : 0.0) - g.weight(i, j);
        }
        rhs(a) = std::pow(g.degree(i), p.r);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(sys);
    if (llt.info() != Eigen::Success)
        fail(Err::EigensolverFailure, "equilibrium subsystem is not positive definite");
    Eigen::VectorXd x = llt.solve(rhs);
    for (int a = 0; a < m; ++a) out.nu(sorted[a]) = x(a);
    return out;
}

NodeFunction GreensTable::column(int j) const {
    if (kind == GreensKind::Poisson) return values.col(j);
    auto it = std::lower_bound(subset.begin(), subset.end(), j);
    if (it == subset.end() || *it != j)
        fail(Err::ConfigError, "node " + std::to_string(j) + " is not a Dirichlet source");
    return values.col(static_cast<int>(it - subset.begin()));
}

GreensTable greens_dirichlet(const Graph& g, const CalculusParams& p, const NodeSet& s) {
    EquilibriumMeasure full = equilibrium_measure(g, p, s);
    if (full.subset.empty()) fail(Err::EmptySet, "Dirichlet Green's function needs S nonempty");

    const int n = g.size();
    const int m = static_cast<int>(full.subset.size());
    double mass_full = mass(g, p, full.nu);

    GreensTable table;
    table.kind = GreensKind::Dirichlet;
    table.subset = full.subset;
    table.values.resize(n, m);
    for (int c = 0; c < m; ++c) {
        int j = full.subset[c];
        NodeSet reduced = full.subset;
        reduced.erase(reduced.begin() + c);
        EquilibriumMeasure drop = equilibrium_measure(g, p, reduced);
        double scale = full.nu(j) / (mass_full - mass(g, p, drop.nu));
        table.values.col(c) = scale * (full.nu - drop.nu);
    }
    return table;
}

GreensTable greens_poisson(const Graph& g, const CalculusParams& p, int k) {
    const int n = g.size();
    if (k < 0 || k >= n) fail(Err::ConfigError, "pinning node out of range");

    std::vector<NodeFunction> nu(n);
    for (int j = 0; j < n; ++j) {
        NodeSet all_but;
        all_but.reserve(n - 1);
        for (int i = 0; i < n; ++i)
            if (i != j) all_but.push_back(i);
        nu[j] = equilibrium_measure(g, p, all_but).nu;
    }
    double vol = total_volume(g, p);

    GreensTable table;
    table.kind = GreensKind::Poisson;
    table.subset = {k};
    table.values.resize(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            table.values(i, j) = (nu[k](i) + nu[j](k) - nu[j](i)) / vol;
    return table;
}

NodeFunction greens_solve(const Graph& g, const CalculusParams& p, const GreensTable& table,
                          const NodeFunction& f) {
    const int n = g.size();
    NodeFunction u = NodeFunction::Zero(n);
    if (table.kind == GreensKind::Dirichlet) {
        for (int c = 0; c < static_cast<int>(table.subset.size()); ++c) {
            int j = table.subset[c];
            u += std::pow(g.degree(j), p.r) * f(j) * table.values.col(c);
        }
    } else {
        Eigen::VectorXd dr = degree_weights(g, p);
        u = table.values * (dr.asDiagonal() * f);
    }
    return u;
}

RandomWalkEstimate random_walk_green_estimate(const Graph& g, const CalculusParams& p, int a,
                                              int b, std::int64_t walks, std::uint64_t seed) {
    const int n = g.size();
    if (a == b) fail(Err::ConfigError, "absorbing nodes must differ");
    if (walks < 1) fail(Err::ConfigError, "need at least one walk");

    // cumulative transition distributions, plain degrees (r plays no role
    // in the walk itself)
    std::vector<std::vector<double>> cumulative(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j : g.neighbours(i)) {
            acc += g.weight(i, j) / g.degree(i);
            cumulative[i].push_back(acc);
        }
        cumulative[i].back() = 1.0;
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    RandomWalkEstimate out;
    out.walks = walks;
    out.probability = NodeFunction::Zero(n);
    out.std_error = NodeFunction::Zero(n);

    for (int start = 0; start < n; ++start) {
        if (start == a) {
            out.probability(start) = 1.0;
            continue;
        }
        if (start == b) continue;
        std::int64_t hits = 0;
        for (std::int64_t w = 0; w < walks; ++w) {
            int node = start;
            while (node != a && node != b) {
                double x = unif(rng);
                const auto& cum = cumulative[node];
                const auto& nbr = g.neighbours(node);
                int pick = static_cast<int>(
                    std::lower_bound(cum.begin(), cum.end(), x) - cum.begin());
                if (pick >= static_cast<int>(nbr.size())) pick = static_cast<int>(nbr.size()) - 1;
                node = nbr[pick];
            }
            if (node == a) ++hits;
        }
        double h = static_cast<double>(hits) / static_cast<double>(walks);
        out.probability(start) = h;
        out.std_error(start) = std::sqrt(h * (1.0 - h) / static_cast<double>(walks));
    }

    GreensTable green = greens_poisson(g, p, b);
    NodeSet all_but_b = complement({b}, n);
    NodeSet all_but_a = complement({a}, n);
    double c_ab = (equilibrium_measure(g, p, all_but_b).nu(a) +
                   equilibrium_measure(g, p, all_but_a).nu(b)) /
                  total_volume(g, p);
    out.exact = green.values.col(a) / c_ab;
    return out;
}

} // namespace gok
