#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphok/functionals.hpp"
#include "graphok/spectral.hpp"

namespace gok {

struct MBOConfig {
    double gamma = 0.0;
    double tau = 1.0;
    double mass_target = 0.0;          // mass-conserving variant only
    int max_iterations = 500;
    double stop_tolerance = 1e-24;     // Euclidean norm of state difference
    std::uint64_t rng_seed = 1;

    void validate() const {
        if (gamma < 0.0) fail(Err::ConfigError, "gamma must be nonnegative");
        if (tau <= 0.0) fail(Err::ConfigError, "tau must be positive");
        if (max_iterations < 1) fail(Err::ConfigError, "need at least one iteration");
        if (stop_tolerance < 0.0) fail(Err::ConfigError, "stop tolerance must be nonnegative");
    }
};

enum class StopReason { FixedPoint, IterationLimit };

/// Per-iteration record of a threshold-dynamics run. iterates[k] is v^k
/// (iterates[0] the initial state); the scalar series are aligned with it.
struct MBOTrace {
    std::vector<NodeFunction> iterates;
    std::vector<double> jtau;
    std::vector<double> f0;
    std::vector<double> mass;
    std::vector<double> diff_norm;     // ||v^k - v^(k-1)||_2, 0 at k = 0
    int terminated_at = 0;
    StopReason reason = StopReason::FixedPoint;
    int best_f0_index = 0;             // argmin of f0 along the trace
};

/// One plain threshold-dynamics step: diffuse chi_S for time tau under L,
/// then keep the nodes where the value is >= 1/2.
NodeSet okmbo_step(const OperatorL& op, double tau, const NodeSet& s);

/// Mass-conserving threshold: rank nodes by u descending (ties by index;
/// the sort is stable), assign 1 in rank order while the next full node
/// still fits within mass M, give the first node that does not fit the
/// fractional value d^-r (M - mass assigned so far), and 0 beyond. The
/// output is almost binary with mass exactly M and minimizes w -> <z, w>_V
/// over {0 <= w <= 1, M(w) = M} for z = chi_V - 2u.
NodeFunction mass_threshold(const Graph& g, const CalculusParams& p, const NodeFunction& u,
                            double m_target);

/// Plain scheme: threshold at 1/2 each iteration, stop at a fixed set.
MBOTrace okmbo_run(const OperatorL& op, const Graph& g, const CalculusParams& p,
                   const MBOConfig& config, const NodeSet& s0);

/// Mass-conserving scheme: diffuse, then mass_threshold, keeping
/// M(v^k) = mass_target for every k. J_tau never increases along the
/// trace and the run reaches a fixed point in finitely many steps.
MBOTrace mcokmbo_run(const OperatorL& op, const Graph& g, const CalculusParams& p,
                     const MBOConfig& config, const NodeFunction& v0);

/// Sufficient time-step bounds for trivial dynamics.
struct PinningBounds {
    double tau_rho = 0.0;                  // below this the first step pins
    std::optional<double> tau_t;           // above this one step reaches {} or V
    std::string tau_t_reason;              // set when tau_t is absent
    double tau_kappa = 0.0;                // second pinning bound
    bool tau_kappa_requires_class = true;  // only proven on C_gamma graphs
};

PinningBounds pinning_bounds(const OperatorL& op, const Graph& g, const CalculusParams& p,
                             const NodeSet& s);

/// Closed-form pinning threshold at the centre of an unweighted star.
struct StarPinning {
    double exp_threshold = 0.0;  // bound on e^(-Lambda_(n-1) tau)
    bool centre_in_s = false;
    bool pins = false;           // verdict for the queried tau
    bool pins_for_all_tau = false;
};

StarPinning star_center_pinning(int n, double r, double gamma, const NodeSet& s, double tau);

enum class InitKind { Random, Structured, Eigen };

/// Initial states for the mass-conserving scheme: (Random) threshold of a
/// seeded uniform vector, (Structured) threshold of the descending ramp
/// (n, n-1, ..., 1) in canonical node order, (Eigen) threshold of the sum
/// of the stored basis vectors spanning the eigenspace of the smallest
/// nonzero eigenvalue of L, with the sign ambiguity of that sum resolved
/// by thresholding both orientations and keeping the lower-energy state.
/// The canonical eigenbasis (see Spectrum) makes the last option
/// reproducible across eigensolver backends up to threshold ties.
NodeFunction initial_condition(const Graph& g, const CalculusParams& p, const OperatorL& op,
                               double m_target, InitKind kind, std::uint64_t seed = 1);

} // namespace gok
