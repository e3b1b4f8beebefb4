#include "graphok/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <fstream>
#include <limits>

namespace gok {

namespace {

constexpr double kZeroEigTol = 1e-12;
constexpr double kDegenerateTol = 1e-9; // relative gap that merges eigenvalues

// Sign rule: make <c, v> positive for a fixed generic reference vector c.
// Unlike "largest-magnitude entry positive", this survives symmetric graphs
// whose eigenvectors attain their extreme magnitude at several nodes, where
// backend roundoff would otherwise decide the argmax (and hence the sign).
// The argmax rule remains as a fallback for the rare exact cancellation.
void apply_sign_convention(Eigen::MatrixXd& basis) {
    const int n = static_cast<int>(basis.rows());
    Eigen::VectorXd reference(n);
    for (int i = 0; i < n; ++i) reference(i) = std::sin(0.5 + 0.7937005259840998 * i);
    for (int m = 0; m < basis.cols(); ++m) {
        double score = reference.dot(basis.col(m));
        if (std::abs(score) <= 1e-9 * basis.col(m).norm()) {
            int arg = 0;
            double best = -1.0;
            for (int i = 0; i < n; ++i) {
                double a = std::abs(basis(i, m));
                if (a > best) {
                    best = a;
                    arg = i;
                }
            }
            score = basis(arg, m);
        }
        if (score < 0.0) basis.col(m) = -basis.col(m);
    }
}

// Replaces the solver's basis of each degenerate eigenspace by the
// Gram-Schmidt orthonormalization of the projections of the coordinate
// axes e_0, e_1, ... onto that eigenspace. The result depends only on the
// spectral projector, so it is identical across eigensolver backends; the
// solver's arbitrary rotation inside the eigenspace drops out.
void canonicalize_degenerate_spaces(const Eigen::VectorXd& eigenvalues,
                                    Eigen::MatrixXd& basis) {
    const int n = static_cast<int>(eigenvalues.size());
    int m = 0;
    while (m < n) {
        int last = m;
        while (last + 1 < n && std::abs(eigenvalues(last + 1) - eigenvalues(m)) <=
                                   kDegenerateTol * std::max(1.0, std::abs(eigenvalues(m))))
            ++last;
        const int width = last - m + 1;
        if (width > 1) {
            Eigen::MatrixXd block = basis.middleCols(m, width);
            Eigen::MatrixXd fresh(n, width);
            int accepted = 0;
            for (int j = 0; j < n && accepted < width; ++j) {
                Eigen::VectorXd v = block * block.row(j).transpose(); // P e_j
                for (int b = 0; b < accepted; ++b) v -= fresh.col(b).dot(v) * fresh.col(b);
                double norm = v.norm();
                if (norm > 1e-6) fresh.col(accepted++) = v / norm;
            }
            if (accepted == width) basis.middleCols(m, width) = fresh;
        }
        m = last + 1;
    }
}

} // namespace

Spectrum Spectrum::compute(const Graph& g, const CalculusParams& p) {
    p.validate();
    const int n = g.size();

    Eigen::MatrixXd sym = Eigen::MatrixXd(g.degrees().asDiagonal()) - g.weights();
    Eigen::VectorXd to_node = Eigen::VectorXd::Ones(n); // maps solver basis back to V
    if (p.r != 0.0) {
        Eigen::VectorXd dm = g.degrees().array().pow(-p.r / 2.0);
        sym = dm.asDiagonal() * sym * dm.asDiagonal();
        sym = 0.5 * (sym + sym.transpose().eval()); // scrub roundoff asymmetry
        to_node = dm;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success)
        fail(Err::EigensolverFailure, "dense symmetric eigensolve did not converge");

    Spectrum spec;
    spec.params_ = p;
    spec.dr_ = degree_weights(g, p);
    spec.vol_ = spec.dr_.sum();
    spec.eigenvalues_ = solver.eigenvalues();
    spec.eigenvalues_(0) = 0.0;
    for (int m = 1; m < n; ++m)
        if (spec.eigenvalues_(m) < kZeroEigTol)
            fail(Err::NumericallyDisconnected,
                 "eigenvalue " + std::to_string(m) + " is below 1e-12");

    // canonicalize in the Euclidean-orthonormal frame (w = D^(r/2) phi),
    // where projections and Gram-Schmidt are exact
    Eigen::MatrixXd w_basis = solver.eigenvectors();
    canonicalize_degenerate_spaces(spec.eigenvalues_, w_basis);
    spec.basis_ = to_node.asDiagonal() * w_basis;

    apply_sign_convention(spec.basis_);
    spec.basis_.col(0).setConstant(1.0 / std::sqrt(spec.vol_));
    return spec;
}

NodeFunction poisson_zero_mass(const Spectrum& spec, const NodeFunction& u) {
    Eigen::VectorXd c = spec.coefficients(u);
    c(0) = 0.0;
    for (int m = 1; m < spec.size(); ++m) c(m) /= spec.eigenvalue(m);
    return spec.synthesize(c);
}

OperatorL::OperatorL(std::shared_ptr<const Spectrum> spec, double gamma)
    : spec_(std::move(spec)), gamma_(gamma) {
    if (gamma_ < 0.0) fail(Err::ConfigError, "gamma must be nonnegative");
    const int n = spec_->size();
    lambdas_ = Eigen::VectorXd::Zero(n);
    for (int m = 1; m < n; ++m) {
        double lam = spec_->eigenvalue(m);
        lambdas_(m) = lam + gamma_ / lam;
    }
}

double OperatorL::lambda_minus() const {
    return lambdas_.tail(spec_->size() - 1).minCoeff();
}

double OperatorL::lambda_plus() const { return lambdas_.maxCoeff(); }

NodeFunction OperatorL::apply(const NodeFunction& u) const {
    Eigen::VectorXd c = spec_->coefficients(u);
    return spec_->synthesize((lambdas_.array() * c.array()).matrix());
}

NodeFunction OperatorL::semigroup(double tau, const NodeFunction& u0) const {
    if (tau < 0.0) fail(Err::ConfigError, "semigroup time must be nonnegative");
    Eigen::VectorXd c = spec_->coefficients(u0);
    return spec_->synthesize(((-tau * lambdas_.array()).exp() * c.array()).matrix());
}

Eigen::MatrixXd OperatorL::matrix() const {
    const auto& phi = spec_->eigenfunctions();
    return phi * lambdas_.asDiagonal() * phi.transpose() *
           Eigen::MatrixXd(spec_->node_weights().asDiagonal());
}

OperatorL build_L(std::shared_ptr<const Spectrum> spec, double gamma) {
    return OperatorL(std::move(spec), gamma);
}

std::uint64_t graph_hash(const Graph& g, const CalculusParams& p) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* data, std::size_t len) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t k = 0; k < len; ++k) {
            h ^= bytes[k];
            h *= 1099511628211ull;
        }
    };
    std::int64_t n = g.size();
    mix(&n, sizeof n);
    mix(&p.r, sizeof p.r);
    mix(g.weights().data(), sizeof(double) * g.size() * g.size());
    return h;
}

void save_spectrum(const Spectrum& spec, const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(Err::ParseError, "cannot open " + path + " for writing");
    out.precision(17);
    out << "graphok-spectrum 1\n";
    out << spec.size() << ' ' << spec.params().r << ' ' << graph_hash(g, spec.params()) << '\n';
    for (int m = 0; m < spec.size(); ++m) out << spec.eigenvalue(m) << '\n';
    const auto& basis = spec.eigenfunctions();
    for (int m = 0; m < spec.size(); ++m) {
        for (int i = 0; i < spec.size(); ++i) out << basis(i, m) << (i + 1 < spec.size() ? ' ' : '\n');
    }
}

Spectrum load_spectrum(const Graph& g, const CalculusParams& p, const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Err::ParseError, "cannot open " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "graphok-spectrum" || version != 1)
        fail(Err::ParseError, path + ": not a version-1 spectrum file");
    int n = 0;
    double r = 0.0;
    std::uint64_t stored_hash = 0;
    in >> n >> r >> stored_hash;
    if (n != g.size() || r != p.r || stored_hash != graph_hash(g, p))
        fail(Err::ParseError, path + ": spectrum was computed for a different graph or r");

    Spectrum spec;
    spec.params_ = p;
    spec.dr_ = degree_weights(g, p);
    spec.vol_ = spec.dr_.sum();
    spec.eigenvalues_.resize(n);
    for (int m = 0; m < n; ++m) in >> spec.eigenvalues_(m);
    spec.basis_.resize(n, n);
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i) in >> spec.basis_(i, m);
    if (!in) fail(Err::ParseError, path + ": truncated spectrum file");
    return spec;
}

} // namespace gok
