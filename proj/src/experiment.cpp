#include "graphok/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "graphok/classes.hpp"

namespace gok {

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(Err::ConfigError, "expected a boolean, got '" + v + "'");
}

template <typename T>
T parse_number(const std::string& v) {
    std::istringstream in(v);
    T out;
    if (!(in >> out)) fail(Err::ConfigError, "expected a number, got '" + v + "'");
    std::string rest;
    if (in >> rest) fail(Err::ConfigError, "trailing characters after number: '" + v + "'");
    return out;
}

void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "graph") cfg.graph = value;
    else if (key == "n") cfg.n = parse_number<int>(value);
    else if (key == "n2") cfg.n2 = parse_number<int>(value);
    else if (key == "edgelist") cfg.edgelist = value;
    else if (key == "symmetrize") cfg.symmetrize = parse_bool(value);
    else if (key == "moons_samples") cfg.moons.samples_per_moon = parse_number<int>(value);
    else if (key == "moons_dim") cfg.moons.ambient_dimension = parse_number<int>(value);
    else if (key == "moons_sigma") cfg.moons.noise_sigma = parse_number<double>(value);
    else if (key == "moons_k") cfg.moons.k_nearest = parse_number<int>(value);
    else if (key == "q") cfg.q = parse_number<double>(value);
    else if (key == "r") cfg.r = parse_number<double>(value);
    else if (key == "gamma") cfg.gamma = parse_number<double>(value);
    else if (key == "mass") cfg.mass_target = parse_number<double>(value);
    else if (key == "tau") cfg.tau = parse_number<double>(value);
    else if (key == "taus") {
        cfg.taus.clear();
        std::istringstream in(value);
        double t;
        while (in >> t) cfg.taus.push_back(t);
        if (cfg.taus.empty()) fail(Err::ConfigError, "taus needs at least one value");
    } else if (key == "init") cfg.init = value;
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(value);
    else if (key == "max_iterations") cfg.max_iterations = parse_number<int>(value);
    else if (key == "stop_tolerance") cfg.stop_tolerance = parse_number<double>(value);
    else if (key == "algorithm") {
        if (value == "mcokmbo") cfg.algorithm = Algorithm::McOkmbo;
        else if (value == "okmbo") cfg.algorithm = Algorithm::Okmbo;
        else fail(Err::ConfigError, "unknown algorithm '" + value + "'");
    } else if (key == "outdir") cfg.outdir = value;
    else if (key == "spectrum_cache") cfg.spectrum_cache = value;
    else fail(Err::ConfigError, "unknown config key '" + key + "'");
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(Err::ConfigError, "line " + std::to_string(line_no) + ": expected key = value");
        set_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Err::ConfigError, "cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos)
        fail(Err::ConfigError, "override must look like key=value: '" + assignment + "'");
    set_key(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

Graph build_graph(const ExperimentConfig& cfg) {
    if (cfg.graph == "star") return star(cfg.n);
    if (cfg.graph == "complete") return complete(cfg.n);
    if (cfg.graph == "bipartite") return complete_bipartite(cfg.n, cfg.n2);
    if (cfg.graph == "torus") return torus_grid(cfg.n);
    if (cfg.graph == "stitched") return stitched(cfg.n);
    if (cfg.graph == "moons") {
        TwoMoonsParams mp = cfg.moons;
        mp.rng_seed = cfg.seed;
        return two_moons(mp);
    }
    if (cfg.graph == "edgelist") {
        if (cfg.edgelist.empty()) fail(Err::ConfigError, "graph = edgelist needs a path");
        return load_weighted_edgelist(cfg.edgelist, cfg.symmetrize);
    }
    fail(Err::ConfigError, "unknown graph kind '" + cfg.graph + "'");
}

InitKind parse_init_kind(const std::string& name) {
    if (name == "random") return InitKind::Random;
    if (name == "structured") return InitKind::Structured;
    if (name == "eig") return InitKind::Eigen;
    fail(Err::ConfigError, "unknown init kind '" + name + "'");
}

namespace {

std::shared_ptr<const Spectrum> obtain_spectrum(const ExperimentConfig& cfg, const Graph& g) {
    CalculusParams p = cfg.calculus();
    if (!cfg.spectrum_cache.empty() && std::filesystem::exists(cfg.spectrum_cache))
        return std::make_shared<Spectrum>(load_spectrum(g, p, cfg.spectrum_cache));
    auto spec = std::make_shared<Spectrum>(Spectrum::compute(g, p));
    if (!cfg.spectrum_cache.empty()) save_spectrum(*spec, g, cfg.spectrum_cache);
    return spec;
}

void write_trace_csv(const std::string& path, const MBOTrace& trace) {
    std::ofstream out(path);
    out.precision(17);
    out << "k,J_tau,F0,mass,diff_norm\n";
    for (std::size_t k = 0; k < trace.iterates.size(); ++k)
        out << k << ',' << trace.jtau[k] << ',' << trace.f0[k] << ',' << trace.mass[k] << ','
            << trace.diff_norm[k] << '\n';
}

void write_state(const std::string& path, const NodeFunction& v) {
    std::ofstream out(path);
    out.precision(17);
    for (int i = 0; i < v.size(); ++i) out << i << ' ' << v(i) << '\n';
}

// also a valid config file: run --config manifest.txt repeats the experiment
void write_manifest(const std::string& path, const ExperimentConfig& cfg,
                    std::uint64_t spectrum_hash, const MBOTrace& trace) {
    std::ofstream out(path);
    out.precision(17);
    out << "# graphok " << kVersion << " run manifest\n";
    out << "graph = " << cfg.graph << '\n';
    out << "n = " << cfg.n << '\n';
    if (cfg.graph == "bipartite") out << "n2 = " << cfg.n2 << '\n';
    if (!cfg.edgelist.empty()) out << "edgelist = " << cfg.edgelist << '\n';
    if (cfg.graph == "edgelist") out << "symmetrize = " << (cfg.symmetrize ? "true" : "false") << '\n';
    if (cfg.graph == "moons") {
        out << "moons_samples = " << cfg.moons.samples_per_moon << '\n';
        out << "moons_dim = " << cfg.moons.ambient_dimension << '\n';
        out << "moons_sigma = " << cfg.moons.noise_sigma << '\n';
        out << "moons_k = " << cfg.moons.k_nearest << '\n';
    }
    out << "q = " << cfg.q << '\n';
    out << "r = " << cfg.r << '\n';
    out << "gamma = " << cfg.gamma << '\n';
    out << "mass = " << cfg.mass_target << '\n';
    out << "tau = " << cfg.tau << '\n';
    out << "init = " << cfg.init << '\n';
    out << "seed = " << cfg.seed << '\n';
    out << "max_iterations = " << cfg.max_iterations << '\n';
    out << "stop_tolerance = " << cfg.stop_tolerance << '\n';
    out << "algorithm = " << (cfg.algorithm == Algorithm::McOkmbo ? "mcokmbo" : "okmbo") << '\n';
    out << "outdir = " << cfg.outdir << '\n';
    if (!cfg.spectrum_cache.empty()) out << "spectrum_cache = " << cfg.spectrum_cache << '\n';
    // results, as comments so the manifest stays runnable as-is
    out << "# spectrum_hash = " << spectrum_hash << '\n';
    out << "# iterations = " << trace.terminated_at << '\n';
    out << "# stop_reason = "
        << (trace.reason == StopReason::FixedPoint ? "fixed_point" : "iteration_limit") << '\n';
    out << "# final_F0 = " << trace.f0.back() << '\n';
    out << "# final_F0_half = " << 0.5 * trace.f0.back()
        << " (TV counted once per unordered node pair)\n";
    out << "# best_F0 = " << trace.f0[trace.best_f0_index] << " at k = " << trace.best_f0_index
        << '\n';
}

MBOTrace run_one(const ExperimentConfig& cfg, const Graph& g,
                 const std::shared_ptr<const Spectrum>& spec, double tau) {
    CalculusParams p = cfg.calculus();
    OperatorL op = build_L(spec, cfg.gamma);
    MBOConfig mc = cfg.mbo();
    mc.tau = tau;
    if (cfg.algorithm == Algorithm::Okmbo) {
        NodeFunction v0 = initial_condition(g, p, op, cfg.mass_target,
                                            parse_init_kind(cfg.init), cfg.seed);
        return okmbo_run(op, g, p, mc, support_set(v0));
    }
    NodeFunction v0 =
        initial_condition(g, p, op, cfg.mass_target, parse_init_kind(cfg.init), cfg.seed);
    return mcokmbo_run(op, g, p, mc, v0);
}

} // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const Graph& g,
                         std::shared_ptr<const Spectrum> spec) {
    if (!spec) spec = obtain_spectrum(cfg, g);
    std::filesystem::create_directories(cfg.outdir);

    RunResult result;
    result.spectrum_hash = graph_hash(g, cfg.calculus());
    result.trace = run_one(cfg, g, spec, cfg.tau);
    result.final_f0 = result.trace.f0.back();
    result.pinned = result.trace.terminated_at == 1 &&
                    result.trace.reason == StopReason::FixedPoint;

    auto dir = std::filesystem::path(cfg.outdir);
    write_trace_csv((dir / "trace.csv").string(), result.trace);
    write_state((dir / "final_state.txt").string(), result.trace.iterates.back());
    write_manifest((dir / "manifest.txt").string(), cfg, result.spectrum_hash, result.trace);
    return result;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, const Graph& g) {
    if (cfg.taus.empty()) fail(Err::ConfigError, "sweep needs a taus list");
    auto spec = obtain_spectrum(cfg, g);
    std::filesystem::create_directories(cfg.outdir);

    std::vector<MBOTrace> traces(cfg.taus.size());
    unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                       static_cast<unsigned>(cfg.taus.size())));
    std::vector<std::thread> pool;
    std::atomic<std::size_t> cursor{0};
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            for (std::size_t k = cursor.fetch_add(1); k < cfg.taus.size();
                 k = cursor.fetch_add(1))
                traces[k] = run_one(cfg, g, spec, cfg.taus[k]);
        });
    for (auto& t : pool) t.join();

    // single collector writes all files
    auto dir = std::filesystem::path(cfg.outdir);
    std::vector<SweepRow> rows;
    std::ofstream csv(dir / "sweep.csv");
    csv.precision(17);
    csv << "tau,final_F0,iterations,pinned\n";
    for (std::size_t k = 0; k < cfg.taus.size(); ++k) {
        const MBOTrace& tr = traces[k];
        SweepRow row{cfg.taus[k], tr.f0.back(), tr.terminated_at,
                     tr.terminated_at == 1 && tr.reason == StopReason::FixedPoint};
        rows.push_back(row);
        csv << row.tau << ',' << row.final_f0 << ',' << row.iterations << ','
            << (row.pinned ? 1 : 0) << '\n';
        std::ostringstream name;
        name << "trace_tau_" << cfg.taus[k] << ".csv";
        write_trace_csv((dir / name.str()).string(), tr);
    }

    std::ofstream plot(dir / "sweep.gp");
    plot << "set datafile separator ','\n"
         << "set xlabel 'tau'\n"
         << "set ylabel 'final F0'\n"
         << "plot 'sweep.csv' using 1:2 skip 1 with linespoints title 'final F0'\n";
    return rows;
}

NodeFunction load_state(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) fail(Err::ParseError, "cannot open " + path);
    NodeFunction v = NodeFunction::Zero(n);
    int i;
    double x;
    while (in >> i >> x) {
        if (i < 0 || i >= n) fail(Err::ParseError, path + ": index out of range");
        v(i) = x;
    }
    return v;
}

std::vector<CheckResult> verify_graph(const ExperimentConfig& cfg, const Graph& g) {
    CalculusParams p = cfg.calculus();
    auto spec = std::make_shared<const Spectrum>(Spectrum::compute(g, p));
    const int n = g.size();
    std::vector<CheckResult> checks;
    auto push = [&checks](const std::string& name, bool pass, const std::string& detail) {
        checks.push_back({name, pass, detail});
    };
    std::ostringstream msg;
    msg.precision(6);

    // spectral residuals
    double resid = 0.0, ortho = 0.0;
    Eigen::MatrixXd lap = laplacian_matrix(g, p);
    for (int m = 0; m < n; ++m) {
        NodeFunction phi = spec->eigenfunction(m);
        resid = std::max(resid,
                         (lap * phi - spec->eigenvalue(m) * phi).cwiseAbs().maxCoeff());
        for (int l = m; l < n; ++l) {
            double ip = v_inner(g, p, phi, spec->eigenfunction(l));
            ortho = std::max(ortho, std::abs(ip - (l == m ? 1.0 : 0.0)));
        }
    }
    msg.str("");
    msg << "max residual " << resid << ", max orthonormality defect " << ortho;
    push("spectral_decomposition", resid < 1e-9 && ortho < 1e-10, msg.str());

    // adjointness on a few random pairs
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    double adjoint_defect = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        NodeFunction u(n);
        for (int i = 0; i < n; ++i) u(i) = normal(rng);
        EdgeFunction psi = EdgeFunction::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j : g.neighbours(i))
                if (j > i) {
                    psi(i, j) = normal(rng);
                    psi(j, i) = -psi(i, j);
                }
        double lhs = e_inner(g, p, gradient(g, p, u), psi);
        double rhs = v_inner(g, p, u, divergence(g, p, psi));
        adjoint_defect = std::max(adjoint_defect, std::abs(lhs - rhs));
    }
    msg.str("");
    msg << "max defect " << adjoint_defect;
    push("gradient_divergence_adjointness", adjoint_defect < 1e-9, msg.str());

    // Green's identities stay affordable only on small graphs
    if (n <= 60) {
        GreensTable green = greens_poisson(g, p, 0);
        double sym = (green.values - green.values.transpose()).cwiseAbs().maxCoeff();
        NodeFunction f(n);
        for (int i = 0; i < n; ++i) f(i) = normal(rng);
        f -= average(g, p, f);
        NodeFunction u = greens_solve(g, p, green, f);
        double res = (laplacian_apply(g, p, u) - f).cwiseAbs().maxCoeff();
        msg.str("");
        msg << "symmetry defect " << sym << ", solve residual " << res;
        push("greens_poisson", sym < 1e-9 && res < 1e-8, msg.str());
    }

    // class membership
    ClassReport rep = classify(g, p, *spec, cfg.gamma);
    msg.str("");
    msg << "in_C = " << (rep.in_c ? "true" : "false") << ", in_C0 = "
        << (rep.in_c0 ? "true" : "false") << ", in_C_gamma(" << cfg.gamma << ") = "
        << (rep.in_c_gamma ? "true" : "false") << ", worst pair value "
        << rep.worst_pair_expr.value << " at (" << rep.worst_pair_expr.i << ","
        << rep.worst_pair_expr.j << ")";
    if (rep.gamma_star) msg << ", gamma_star = " << *rep.gamma_star;
    push("class_membership", true, msg.str());

    // comparison principle II and box preservation only hold on class graphs
    if (rep.in_c_gamma) {
        OperatorL op = build_L(spec, cfg.gamma);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        bool ordered = true, boxed = true;
        for (int trial = 0; trial < 20; ++trial) {
            NodeFunction u0(n), bump(n);
            for (int i = 0; i < n; ++i) {
                u0(i) = unif(rng);
                bump(i) = unif(rng);
            }
            double t = 0.05 + trial * 0.05;
            NodeFunction a = op.semigroup(t, u0);
            NodeFunction b = op.semigroup(t, u0 + bump);
            if (((b - a).array() < -1e-10).any()) ordered = false;
            if (a.minCoeff() < -1e-10 || a.maxCoeff() > 1.0 + 1e-10) boxed = false;
        }
        push("comparison_principle_semigroup", ordered, "order preserved on 20 random pairs");
        push("box_preservation", boxed, "semigroup output stayed within initial bounds");
    }

    return checks;
}

} // namespace gok
