#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graphok/builders.hpp"
#include "graphok/mbo.hpp"

namespace gok {

inline constexpr const char* kVersion = "0.1.0";

enum class Algorithm { McOkmbo, Okmbo };

/// Everything one experiment needs; mirrors the config-file keys 1:1.
struct ExperimentConfig {
    std::string graph = "torus";          // star|complete|bipartite|torus|stitched|moons|edgelist
    int n = 900;
    int n2 = 0;                           // second part size for bipartite
    std::string edgelist;                 // for graph = edgelist
    bool symmetrize = true;
    TwoMoonsParams moons;

    double q = 1.0;
    double r = 0.0;
    double gamma = 1.0;
    double mass_target = 0.0;
    double tau = 1.0;
    std::vector<double> taus;             // sweep values; empty means scalar run
    std::string init = "structured";      // random|structured|eig
    std::uint64_t seed = 1;
    int max_iterations = 500;
    double stop_tolerance = 1e-24;
    Algorithm algorithm = Algorithm::McOkmbo;
    std::string outdir = "out";
    std::string spectrum_cache;           // optional path

    CalculusParams calculus() const { return {q, r}; }
    MBOConfig mbo() const {
        return {gamma, tau, mass_target, max_iterations, stop_tolerance, seed};
    }
};

/// Flat "key = value" text, '#' comments, unknown keys rejected.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);
/// Apply one "key=value" override on top of an existing config.
void apply_override(ExperimentConfig& cfg, const std::string& assignment);

/// Builds the configured graph.
Graph build_graph(const ExperimentConfig& cfg);

InitKind parse_init_kind(const std::string& name);

struct RunResult {
    MBOTrace trace;
    double final_f0 = 0.0;
    bool pinned = false;              // first step returned the input
    std::uint64_t spectrum_hash = 0;
};

/// Runs one experiment and writes trace.csv, final_state.txt and
/// manifest.txt under cfg.outdir. The spectrum may be shared by the
/// caller; pass nullptr to have it computed (and cached when a cache path
/// is configured).
RunResult run_experiment(const ExperimentConfig& cfg, const Graph& g,
                         std::shared_ptr<const Spectrum> spec = nullptr);

struct SweepRow {
    double tau = 0.0;
    double final_f0 = 0.0;
    int iterations = 0;
    bool pinned = false;
};

/// One run per tau (in parallel, sharing the spectrum); writes sweep.csv,
/// one trace per tau, and a gnuplot script next to them.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, const Graph& g);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Property suite over a built graph: spectral residuals, adjointness,
/// Green's identities (small n), class membership, comparison principles
/// on class graphs.
std::vector<CheckResult> verify_graph(const ExperimentConfig& cfg, const Graph& g);

/// Reads back a final-state file ("index value" per line).
NodeFunction load_state(const std::string& path, int n);

} // namespace gok
