#include "graphok/calculus.hpp"

#include <algorithm>
#include <cmath>

namespace gok {

namespace {

// w^e with the convention 0^0 = 0 on non-edges
inline double wpow(double w, double e) { return w > 0.0 ? std::pow(w, e) : 0.0; }

} // namespace

Eigen::VectorXd degree_weights(const Graph& g, const CalculusParams& p) {
    if (p.r == 0.0) return Eigen::VectorXd::Ones(g.size());
    return g.degrees().array().pow(p.r);
}

double volume(const Graph& g, const CalculusParams& p, const NodeSet& s) {
    double v = 0.0;
    for (int i : s) v += wpow(g.degree(i), p.r);
    return p.r == 0.0 ? static_cast<double>(s.size()) : v;
}

double total_volume(const Graph& g, const CalculusParams& p) {
    return degree_weights(g, p).sum();
}

double mass(const Graph& g, const CalculusParams& p, const NodeFunction& u) {
    return degree_weights(g, p).dot(u);
}

NodeFunction average(const Graph& g, const CalculusParams& p, const NodeFunction& u) {
    double c = mass(g, p, u) / total_volume(g, p);
    return NodeFunction::Constant(g.size(), c);
}

double v_inner(const Graph& g, const CalculusParams& p, const NodeFunction& u,
               const NodeFunction& v) {
    return (u.array() * v.array() * degree_weights(g, p).array()).sum();
}

double e_inner(const Graph& g, const CalculusParams& p, const EdgeFunction& phi,
               const EdgeFunction& psi) {
    const auto& w = g.weights();
    double acc = 0.0;
    for (int i = 0; i < g.size(); ++i)
        for (int j : g.neighbours(i)) acc += phi(i, j) * psi(i, j) * wpow(w(i, j), 2.0 * p.q - 1.0);
    return 0.5 * acc;
}

double v_norm(const Graph& g, const CalculusParams& p, const NodeFunction& u) {
    return std::sqrt(v_inner(g, p, u, u));
}

double e_norm(const Graph& g, const CalculusParams& p, const EdgeFunction& phi) {
    return std::sqrt(e_inner(g, p, phi, phi));
}

double v_inf_norm(const NodeFunction& u) { return u.cwiseAbs().maxCoeff(); }

EdgeFunction gradient(const Graph& g, const CalculusParams& p, const NodeFunction& u) {
    const int n = g.size();
    EdgeFunction phi = EdgeFunction::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j : g.neighbours(i)) phi(i, j) = wpow(g.weight(i, j), 1.0 - p.q) * (u(j) - u(i));
    return phi;
}

NodeFunction divergence(const Graph& g, const CalculusParams& p, const EdgeFunction& phi) {
    const int n = g.size();
    NodeFunction out(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j : g.neighbours(i)) acc += wpow(g.weight(i, j), p.q) * phi(j, i);
        out(i) = acc * wpow(g.degree(i), -p.r);
    }
    return out;
}

NodeFunction laplacian_apply(const Graph& g, const CalculusParams& p, const NodeFunction& u) {
    const int n = g.size();
    NodeFunction out(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j : g.neighbours(i)) acc += g.weight(i, j) * (u(i) - u(j));
        out(i) = acc * wpow(g.degree(i), -p.r);
    }
    return out;
}

Eigen::MatrixXd laplacian_matrix(const Graph& g, const CalculusParams& p) {
    Eigen::MatrixXd lap = Eigen::MatrixXd(g.degrees().asDiagonal()) - g.weights();
    if (p.r != 0.0) {
        Eigen::VectorXd scale = g.degrees().array().pow(-p.r);
        lap = scale.asDiagonal() * lap;
    }
    return lap;
}

double total_variation(const Graph& g, const CalculusParams& p, const NodeFunction& u) {
    double acc = 0.0;
    for (int i = 0; i < g.size(); ++i)
        for (int j : g.neighbours(i)) acc += wpow(g.weight(i, j), p.q) * std::abs(u(i) - u(j));
    return 0.5 * acc;
}

double dirichlet_energy(const Graph& g, const NodeFunction& u) {
    double acc = 0.0;
    for (int i = 0; i < g.size(); ++i)
        for (int j : g.neighbours(i)) {
            double diff = u(i) - u(j);
            acc += g.weight(i, j) * diff * diff;
        }
    return 0.25 * acc;
}

NodeFunction curvature(const Graph& g, const CalculusParams& p, const NodeSet& s) {
    const int n = g.size();
    std::vector<char> in(n, 0);
    for (int i : s) in[i] = 1;
    NodeFunction kappa(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j : g.neighbours(i))
            if (in[j] != in[i]) acc += wpow(g.weight(i, j), p.q);
        kappa(i) = (in[i] ? acc : -acc) * wpow(g.degree(i), -p.r);
    }
    return kappa;
}

double curvature_max(const Graph& g, const CalculusParams& p, const NodeSet& s) {
    return curvature(g, p, s).maxCoeff();
}

std::vector<double> admissible_masses(const Graph& g, const CalculusParams& p, int cap) {
    if (g.size() > cap)
        fail(Err::TooLarge, "subset-sum enumeration capped at n = " + std::to_string(cap));
    Eigen::VectorXd dr = degree_weights(g, p);
    std::vector<double> sums{0.0};
    constexpr double kTol = 1e-12;
    constexpr std::size_t kLimit = std::size_t(1) << 22;
    for (int i = 0; i < g.size(); ++i) {
        std::vector<double> merged;
        merged.reserve(2 * sums.size());
        std::size_t a = 0, b = 0;
        // merge sums and sums + dr(i), deduplicating within tolerance
        while (a < sums.size() || b < sums.size()) {
            double next;
            if (b >= sums.size() || (a < sums.size() && sums[a] <= sums[b] + dr(i)))
                next = sums[a++];
            else
                next = sums[b++] + dr(i);
            if (merged.empty() || next > merged.back() + kTol) merged.push_back(next);
        }
        sums.swap(merged);
        if (sums.size() > kLimit)
            fail(Err::TooLarge, "admissible-mass set exceeded the enumeration limit");
    }
    return sums;
}

} // namespace gok
