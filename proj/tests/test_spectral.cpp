#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "graphok/builders.hpp"
#include "graphok/spectral.hpp"
#include "oracles.hpp"

using namespace gok;

TEST_CASE("star spectrum closed form") {
    for (int n : {3, 5, 8}) {
        for (double r : {0.0, 0.5, 1.0}) {
            Graph g = star(n);
            Spectrum spec = Spectrum::compute(g, {1.0, r});
            CHECK(spec.eigenvalue(0) == 0.0);
            for (int m = 1; m < n - 1; ++m)
                CHECK(spec.eigenvalue(m) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(spec.eigenvalue(n - 1) ==
                  doctest::Approx(std::pow(n - 1.0, 1.0 - r) + 1.0).epsilon(1e-12));

            // top eigenfunction value at the centre node
            double expect =
                std::pow(std::pow(n - 1.0, 2.0 - r) + n - 1.0, -0.5) * std::pow(n - 1.0, 1.0 - r);
            CHECK(std::abs(spec.eigenfunction(n - 1)(0)) == doctest::Approx(expect).epsilon(1e-10));
        }
    }
}

TEST_CASE("two-node path eigensolve against hand computation") {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
    w(0, 1) = w(1, 0) = 1.0;
    Spectrum spec = Spectrum::compute(Graph(w), {1.0, 0.0});
    CHECK(spec.eigenvalue(0) == 0.0);
    CHECK(spec.eigenvalue(1) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("spectrum invariants on random graphs") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 6; ++trial) {
        Graph g = oracle::random_connected_graph(10, rng);
        CalculusParams p{1.0, trial % 3 == 0 ? 0.0 : (trial % 3 == 1 ? 0.5 : 1.0)};
        Spectrum spec = Spectrum::compute(g, p);
        Eigen::MatrixXd lap = laplacian_matrix(g, p);
        double vol = total_volume(g, p);

        CHECK((spec.eigenfunction(0).array() - 1.0 / std::sqrt(vol)).abs().maxCoeff() == 0.0);
        for (int m = 0; m < 10; ++m) {
            NodeFunction phi = spec.eigenfunction(m);
            CHECK((lap * phi - spec.eigenvalue(m) * phi).cwiseAbs().maxCoeff() < 1e-10);
            for (int l = m; l < 10; ++l)
                CHECK(v_inner(g, p, phi, spec.eigenfunction(l)) ==
                      doctest::Approx(l == m ? 1.0 : 0.0).epsilon(1e-10));
        }
        for (int m = 1; m < 10; ++m) CHECK(spec.eigenvalue(m) > 0.0);

        // Parseval identity: sum of squared coefficients is M(u^2)
        NodeFunction u = oracle::random_vector(10, rng);
        double coeff_sq = spec.coefficients(u).squaredNorm();
        CHECK(coeff_sq ==
              doctest::Approx(mass(g, p, u.cwiseProduct(u))).epsilon(1e-10));
    }
}

TEST_CASE("operator L eigenvalue extremes") {
    std::mt19937_64 rng(9);
    Graph g = star(5);
    auto spec = std::make_shared<const Spectrum>(Spectrum::compute(g, {1.0, 0.0}));
    double lam1 = spec->eigenvalue(1), lam_top = spec->eigenvalue(4);

    SUBCASE("gamma = 0 reduces to the laplacian") {
        OperatorL op = build_L(spec, 0.0);
        CHECK(op.lambda_minus() == doctest::Approx(lam1));
        CHECK(op.lambda_plus() == doctest::Approx(lam_top));
    }

    SUBCASE("large gamma flips the spectral radius to the low mode") {
        double gamma = lam1 * lam_top * 1.5;
        OperatorL op = build_L(spec, gamma);
        CHECK(op.lambda_plus() == doctest::Approx(lam1 + gamma / lam1).epsilon(1e-12));
    }

    SUBCASE("brute force over all modes, several gammas") {
        for (double gamma : {0.1, 0.5, 2.0, 6.0, 50.0}) {
            OperatorL op = build_L(spec, gamma);
            double mn = 1e300, mx = 0.0;
            for (int m = 1; m < 5; ++m) {
                double lam = spec->eigenvalue(m);
                mn = std::min(mn, lam + gamma / lam);
                mx = std::max(mx, lam + gamma / lam);
            }
            CHECK(op.lambda_minus() == doctest::Approx(mn).epsilon(1e-12));
            CHECK(op.lambda_plus() == doctest::Approx(mx).epsilon(1e-12));
        }
    }

    SUBCASE("case formulas for the extremes") {
        // Lambda_+ flips between the top and bottom modes at
        // gamma = lambda_1 lambda_(n-1); Lambda_- follows the mode whose
        // lambda is closest to sqrt(gamma) in the multiplicative sense.
        Graph rg = oracle::random_connected_graph(9, rng);
        auto rspec = std::make_shared<const Spectrum>(Spectrum::compute(rg, {1.0, 0.5}));
        const auto& lam = rspec->eigenvalues();
        double l1 = lam(1), ltop = lam(8);
        for (double gamma = 0.05; gamma < 3.0 * l1 * ltop; gamma *= 1.37) {
            OperatorL op = build_L(rspec, gamma);
            double plus_formula = l1 * ltop < gamma ? l1 + gamma / l1 : ltop + gamma / ltop;
            CHECK(op.lambda_plus() == doctest::Approx(plus_formula).epsilon(1e-12));

            double root = std::sqrt(gamma);
            double minus_formula;
            if (l1 > root) {
                minus_formula = l1 + gamma / l1;
            } else if (ltop < root) {
                minus_formula = ltop + gamma / ltop;
            } else {
                double lo = l1, hi = ltop;
                for (int m = 1; m < 9; ++m) {
                    if (lam(m) <= root) lo = std::max(lo, lam(m));
                    if (lam(m) >= root) hi = std::min(hi, lam(m));
                }
                double pick = root < std::sqrt(lo * hi) ? lo : hi;
                minus_formula = pick + gamma / pick;
            }
            CHECK(op.lambda_minus() == doctest::Approx(minus_formula).epsilon(1e-12));
        }
    }

    SUBCASE("gamma -> extremes are continuous (sampled)") {
        double prev_minus = spec->eigenvalue(1), prev_plus = spec->eigenvalue(4);
        for (double gamma = 0.01; gamma < 30.0; gamma += 0.01) {
            OperatorL op = build_L(spec, gamma);
            CHECK(std::abs(op.lambda_minus() - prev_minus) < 0.2);
            CHECK(std::abs(op.lambda_plus() - prev_plus) < 0.2);
            prev_minus = op.lambda_minus();
            prev_plus = op.lambda_plus();
        }
    }
}

TEST_CASE("heat semigroup") {
    std::mt19937_64 rng(13);
    Graph g = star(4);
    CalculusParams p{1.0, 0.0};
    auto spec = std::make_shared<const Spectrum>(Spectrum::compute(g, p));

    SUBCASE("tau = 0 is the identity; constants are fixed") {
        OperatorL op = build_L(spec, 0.7);
        NodeFunction u = oracle::random_vector(4, rng);
        CHECK((op.semigroup(0.0, u) - u).cwiseAbs().maxCoeff() < 1e-14);
        NodeFunction ones = NodeFunction::Ones(4);
        for (double tau : {0.3, 2.0, 40.0})
            CHECK((op.semigroup(tau, ones) - ones).cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("agrees with a Pade matrix exponential of dense L") {
        for (double gamma : {0.0, 1.3}) {
            OperatorL op = build_L(spec, gamma);
            Eigen::MatrixXd lmat = op.matrix();
            NodeFunction u0 = NodeFunction::Zero(4);
            u0(1) = 1.0;
            for (double tau : {0.1, 0.5, 2.0}) {
                NodeFunction ours = op.semigroup(tau, u0);
                NodeFunction pade = oracle::expm_apply(lmat, tau, u0);
                CHECK((ours - pade).cwiseAbs().maxCoeff() < 1e-9);
            }
        }
    }

    SUBCASE("mass conservation, norm decay, decay estimate") {
        Graph rg = oracle::random_connected_graph(9, rng);
        CalculusParams rp{1.0, 0.5};
        auto rspec = std::make_shared<const Spectrum>(Spectrum::compute(rg, rp));
        OperatorL op = build_L(rspec, 0.8);
        NodeFunction u0 = oracle::random_vector(9, rng);
        double m0 = mass(rg, rp, u0);
        double dmin_r = std::pow(rg.min_degree(), rp.r);
        NodeFunction u0c = u0 - average(rg, rp, u0);
        for (double t : {0.05, 0.2, 1.0, 3.0}) {
            NodeFunction ut = op.semigroup(t, u0);
            CHECK(mass(rg, rp, ut) == doctest::Approx(m0).epsilon(1e-11));
            CHECK(v_norm(rg, rp, ut) <= v_norm(rg, rp, u0) + 1e-12);
            double bound = std::exp(-t * op.lambda_minus()) * v_norm(rg, rp, u0c) /
                           std::sqrt(dmin_r);
            NodeFunction utc = ut - average(rg, rp, ut);
            CHECK(v_inf_norm(utc) <= bound + 1e-12);
        }

        // d/dt ||u||^2 = -2(||grad u||^2 + gamma ||grad phi||^2), by central differences
        double t = 0.4, h = 1e-5;
        NodeFunction ut = op.semigroup(t, u0);
        double plus = std::pow(v_norm(rg, rp, op.semigroup(t + h, u0)), 2);
        double minus = std::pow(v_norm(rg, rp, op.semigroup(t - h, u0)), 2);
        NodeFunction phi = poisson_zero_mass(*rspec, ut);
        double expect = -2.0 * (2.0 * dirichlet_energy(rg, ut) +
                                0.8 * 2.0 * dirichlet_energy(rg, phi));
        CHECK((plus - minus) / (2 * h) == doctest::Approx(expect).epsilon(1e-5));

        // <e^{-tL}u, u> strictly decreasing for non-constant u
        double prev = v_inner(rg, rp, u0, u0);
        for (double tt : {0.1, 0.3, 0.9, 2.7}) {
            double cur = v_inner(rg, rp, op.semigroup(tt, u0), u0);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("zero-mass poisson solve") {
    std::mt19937_64 rng(21);

    SUBCASE("constants map to zero") {
        Graph g = star(5);
        Spectrum spec = Spectrum::compute(g, {1.0, 0.0});
        CHECK(poisson_zero_mass(spec, NodeFunction::Constant(5, 2.0)).cwiseAbs().maxCoeff() <
              1e-12);
    }

    SUBCASE("star indicator has the closed-form potential (r = 0)") {
        for (int n : {3, 6, 9}) {
            Graph g = star(n);
            Spectrum spec = Spectrum::compute(g, {1.0, 0.0});
            NodeFunction chi0 = NodeFunction::Zero(n);
            chi0(0) = 1.0; // the centre
            NodeFunction phi = poisson_zero_mass(spec, chi0);
            double nn = static_cast<double>(n) * n;
            CHECK(phi(0) == doctest::Approx((n - 1.0) / nn).epsilon(1e-12));
            for (int i = 1; i < n; ++i)
                CHECK(phi(i) == doctest::Approx(-1.0 / nn).epsilon(1e-12));

            NodeFunction chi1 = NodeFunction::Zero(n);
            chi1(1) = 1.0; // a leaf
            phi = poisson_zero_mass(spec, chi1);
            CHECK(phi(0) == doctest::Approx(-1.0 / nn).epsilon(1e-12));
            CHECK(phi(1) == doctest::Approx((nn - n - 1.0) / nn).epsilon(1e-12));
            for (int i = 2; i < n; ++i)
                CHECK(phi(i) == doctest::Approx(-(n + 1.0) / nn).epsilon(1e-12));
        }
    }

    SUBCASE("matches the dense constrained solve on random graphs") {
        for (int trial = 0; trial < 8; ++trial) {
            Graph g = oracle::random_connected_graph(10, rng);
            CalculusParams p{1.0, trial % 2 ? 0.5 : 1.0};
            Spectrum spec = Spectrum::compute(g, p);
            NodeFunction u = oracle::random_vector(10, rng);
            NodeFunction phi = poisson_zero_mass(spec, u);
            CHECK(mass(g, p, phi) == doctest::Approx(0.0).epsilon(1e-10));
            CHECK((laplacian_apply(g, p, phi) - (u - average(g, p, u))).cwiseAbs().maxCoeff() <
                  1e-10);
            NodeFunction ref = oracle::constrained_poisson_solve(g, p, u);
            CHECK((phi - ref).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("L application routes agree") {
    std::mt19937_64 rng(27);
    Graph g = oracle::random_connected_graph(11, rng);
    CalculusParams p{1.0, 0.5};
    auto spec = std::make_shared<const Spectrum>(Spectrum::compute(g, p));
    OperatorL op = build_L(spec, 1.7);

    NodeFunction ones = NodeFunction::Ones(11);
    CHECK(op.apply(ones).cwiseAbs().maxCoeff() < 1e-10);

    OperatorL lap_only = build_L(spec, 0.0);
    NodeFunction u = oracle::random_vector(11, rng);
    CHECK((lap_only.apply(u) - laplacian_apply(g, p, u)).cwiseAbs().maxCoeff() < 1e-10);

    for (int rep = 0; rep < 50; ++rep) {
        NodeFunction v = oracle::random_vector(11, rng);
        NodeFunction direct = laplacian_apply(g, p, v) + 1.7 * poisson_zero_mass(*spec, v);
        CHECK((op.apply(v) - direct).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("spectrum cache round trip") {
    Graph g = star(6);
    CalculusParams p{1.0, 0.5};
    Spectrum spec = Spectrum::compute(g, p);
    auto path = std::filesystem::temp_directory_path() / "graphok_spec_cache.txt";
    save_spectrum(spec, g, path.string());
    Spectrum loaded = load_spectrum(g, p, path.string());
    CHECK((loaded.eigenvalues() - spec.eigenvalues()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((loaded.eigenfunctions() - spec.eigenfunctions()).cwiseAbs().maxCoeff() == 0.0);

    // wrong r is rejected
    CHECK_THROWS_AS(load_spectrum(g, {1.0, 0.0}, path.string()), Error);
    // different graph is rejected
    CHECK_THROWS_AS(load_spectrum(star(7), p, path.string()), Error);
    std::filesystem::remove(path);
}

TEST_CASE("numerically disconnected guard") {
    // two near-disconnected cliques joined by a vanishing bridge
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(6, 6);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) w(i, j) = w(j, i) = 1.0;
    for (int i = 3; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) w(i, j) = w(j, i) = 1.0;
    w(2, 3) = w(3, 2) = 1e-15;
    Graph g{w};
    CHECK_THROWS_AS(Spectrum::compute(g, {1.0, 0.0}), Error);
}
