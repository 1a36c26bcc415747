#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "h2cert/carleson.hpp"
#include "h2cert/halfplane.hpp"
#include "h2cert/interpolation.hpp"
#include "support/quadrature.hpp"
#include "support/longdouble_oracle.hpp"
#include "support/random_instances.hpp"

using namespace h2cert::interpolation;
using h2cert::halfplane::HalfPlanePoint;
using h2cert::halfplane::KernelIndex;
using testsupport::Rng;

namespace {

InterpolationProblem random_problem(Rng& rng, int max_nodes, int max_mult, bool with_targets,
                                    double minsep = 0.3) {
    const int N = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_nodes));
    auto nodes = testsupport::separated_nodes(rng, N, minsep);
    std::vector<int> mults;
    std::vector<Eigen::MatrixXcd> weights;
    std::vector<Eigen::VectorXcd> targets;
    for (int n = 0; n < N; ++n) {
        const int K = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_mult));
        mults.push_back(K);
        weights.push_back(testsupport::random_well_conditioned(rng, K));
        if (with_targets) {
            Eigen::VectorXcd c(K);
            for (int k = 0; k < K; ++k) {
                c(k) = Complex(testsupport::uniform(rng, -1.0, 1.0),
                               testsupport::uniform(rng, -1.0, 1.0));
            }
            targets.push_back(std::move(c));
        }
    }
    return InterpolationProblem::create(std::move(nodes), std::move(mults), std::move(weights),
                                        std::move(targets));
}

// Extra dictionary kernels stay pairwise separated: a coherent kernel family
// drives the dictionary Gram singular beyond even the oracle's extended
// precision.
std::vector<Complex> random_probes(Rng& rng, int count) {
    return testsupport::separated_nodes(rng, count, 0.25);
}

}  // namespace

TEST_CASE("beta separation products") {
    CHECK(beta({{1.0, 0.0}}, {1}, 0) == 1.0);
    CHECK(beta({{1.0, 0.0}, {2.0, 0.0}}, {1, 1}, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(beta({{1.0, 0.0}, {2.0, 0.0}}, {1, 2}, 0) == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK_THROWS_AS(beta({{1.0, 0.0}, {1.0, 0.0}}, {1, 1}, 0), std::invalid_argument);
}

TEST_CASE("problem validation") {
    CHECK_THROWS_AS(
        InterpolationProblem::create({{0.0, 1.0}}, {1}, {Eigen::MatrixXcd::Identity(1, 1)}),
        std::domain_error);
    CHECK_THROWS_AS(
        InterpolationProblem::create({{1.0, 0.0}}, {9}, {Eigen::MatrixXcd::Identity(9, 9)}),
        std::invalid_argument);
    CHECK_THROWS_AS(InterpolationProblem::create({{1.0, 0.0}}, {2}, {Eigen::MatrixXcd::Zero(2, 2)}),
                    std::invalid_argument);
    const auto p = InterpolationProblem::create(
        {{1.0, 0.0}, {2.0, 1.0}}, {1, 6},
        {Eigen::MatrixXcd::Identity(1, 1), Eigen::MatrixXcd::Identity(6, 6)});
    CHECK(p.total_conditions() == 7);
    CHECK(p.high_multiplicity());
    CHECK(p.blaschke_sum() > 0.0);
}

TEST_CASE("bn_matrix single node") {
    const auto p = InterpolationProblem::create(
        {{1.0, 0.0}}, {2}, {InterpolationProblem::standard_weight({1.0, 0.0}, 2)});
    const BnMatrix bn = bn_matrix(p, 0);
    CHECK(bn.beta == 1.0);
    CHECK(bn.matrix(0, 0) == Complex(1.0, 0.0));
    CHECK(bn.matrix(0, 1) == Complex(0.0, 0.0));
    CHECK(bn.matrix(1, 0) == Complex(0.0, 0.0));
    CHECK(std::abs(bn.matrix(1, 1) - Complex(0.5, 0.0)) < 1e-15);
    CHECK((bn.scaled - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("bn_matrix structure on random instances") {
    Rng rng(71);
    // frozen regression thresholds for the scaled-entry magnitudes, per K,
    // measured over this random model (pairwise pseudo-distance >= 0.3)
    const double frozen[6] = {0.0, 1.5, 45.0, 1.9e3, 1.9e4, 3.8e5};
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = random_problem(rng, 5, 3, false);
        for (int n = 0; n < p.count(); ++n) {
            const BnMatrix bn = bn_matrix(p, n);
            const int K = p.multiplicities[static_cast<std::size_t>(n)];
            for (int k = 0; k < K; ++k) {
                for (int j = 0; j < k; ++j) {
                    REQUIRE(bn.matrix(k, j) == Complex(0.0, 0.0));  // exact zero
                    REQUIRE(bn.scaled(k, j) == Complex(0.0, 0.0));
                }
                REQUIRE(std::abs(std::abs(bn.scaled(k, k)) - 1.0) <= 1e-12);
            }
            REQUIRE(bn.scaled.cwiseAbs().maxCoeff() <= frozen[K]);
            // |B_n(0,0)| is the jet route to the separation product
            REQUIRE(std::abs(bn.matrix(0, 0)) == doctest::Approx(bn.beta).epsilon(1e-12));
        }
    }
}

TEST_CASE("bn_matrix entries against finite differences of the explicit product") {
    Rng rng(72);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = random_problem(rng, 4, 3, false);
        const int n = static_cast<int>(rng() % static_cast<unsigned>(p.count()));
        const BnMatrix bn = bn_matrix(p, n);
        const int K = p.multiplicities[static_cast<std::size_t>(n)];
        const Complex lam = p.nodes[static_cast<std::size_t>(n)];
        for (int k = 0; k < K; ++k) {
            auto f = [&](Complex z) {
                Complex val = h2cert::halfplane::ipow(h2cert::halfplane::blaschke(lam, z), k);
                for (int l = 0; l < p.count(); ++l) {
                    if (l == n) continue;
                    val *= h2cert::halfplane::ipow(
                        h2cert::halfplane::blaschke(p.nodes[static_cast<std::size_t>(l)], z),
                        p.multiplicities[static_cast<std::size_t>(l)]);
                }
                return val;
            };
            const double h = 0.05;
            for (int j = 1; j < K; ++j) {
                auto deriv = [&](double step) {
                    if (j == 1) return (f(lam + step) - f(lam - step)) / (2.0 * step);
                    return (f(lam + step) - 2.0 * f(lam) + f(lam - step)) / (step * step);
                };
                const Complex d1 = deriv(h);
                const Complex d2 = deriv(h / 2.0);
                const Complex d3 = deriv(h / 4.0);
                const Complex r1 = (4.0 * d2 - d1) / 3.0;
                const Complex r2 = (4.0 * d3 - d2) / 3.0;
                const Complex extrap = (16.0 * r2 - r1) / 15.0;
                const double scale = std::max(1e-3, std::abs(bn.matrix(k, j)));
                REQUIRE(std::abs(extrap - bn.matrix(k, j)) / scale < 1e-5);
            }
        }
    }
}

TEST_CASE("vasyunin_measure weights") {
    SUBCASE("two simple nodes with standard weights") {
        const auto p = InterpolationProblem::create(
            {{1.0, 0.0}, {2.0, 0.0}}, {1, 1},
            {InterpolationProblem::standard_weight({1.0, 0.0}, 1),
             InterpolationProblem::standard_weight({2.0, 0.0}, 1)});
        const auto m = vasyunin_measure(p);
        REQUIRE(m.size() == 2);
        CHECK(m.atoms()[0].weight == doctest::Approx(9.0).epsilon(1e-12));
        CHECK(m.atoms()[1].weight == doctest::Approx(18.0).epsilon(1e-12));
    }
    SUBCASE("single node with standard weight reduces to Re lambda") {
        const Complex lam(1.7, -0.4);
        const auto p =
            InterpolationProblem::create({lam}, {3}, {InterpolationProblem::standard_weight(lam, 3)});
        const auto m = vasyunin_measure(p);
        CHECK(m.atoms()[0].weight == doctest::Approx(lam.real()).epsilon(1e-12));
    }
    SUBCASE("scaling G by t scales weights by 1/t^2") {
        Rng rng(73);
        auto p = random_problem(rng, 3, 3, false);
        const auto m = vasyunin_measure(p);
        for (auto& G : p.weights) G *= 3.0;
        const auto m2 = vasyunin_measure(p);
        for (std::size_t i = 0; i < m.size(); ++i) {
            CHECK(m2.atoms()[i].weight == doctest::Approx(m.atoms()[i].weight / 9.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("min_norm_solve analytic cases") {
    SUBCASE("single node") {
        Eigen::VectorXcd c(1);
        c(0) = Complex(1.0, 0.0);
        const auto p =
            InterpolationProblem::create({{1.0, 0.0}}, {1}, {Eigen::MatrixXcd::Identity(1, 1)}, {c});
        const auto sol = min_norm_solve(p);
        CHECK(sol.norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
        CHECK(sol.max_residual < 1e-12);
        CHECK(std::abs(sol.f.value(Complex(1.0, 0.0)) - Complex(1.0, 0.0)) < 1e-12);
    }
    SUBCASE("zero targets give the zero function") {
        Rng rng(74);
        auto p = random_problem(rng, 3, 2, true);
        for (auto& t : p.targets) t.setZero();
        const auto sol = min_norm_solve(p);
        CHECK(sol.norm == 0.0);
        CHECK(std::abs(sol.f.value(Complex(0.9, 0.3))) < 1e-14);
    }
}

TEST_CASE("min_norm_solve against the dictionary oracle (spec two-node case)") {
    // f(1) = 1, f(2) = 0 with unit weights: minimum over span{k_1, k_2}
    Eigen::VectorXcd c1(1), c2(1);
    c1(0) = Complex(1.0, 0.0);
    c2(0) = Complex(0.0, 0.0);
    const auto p = InterpolationProblem::create(
        {{1.0, 0.0}, {2.0, 0.0}}, {1, 1},
        {Eigen::MatrixXcd::Identity(1, 1), Eigen::MatrixXcd::Identity(1, 1)}, {c1, c2});
    const auto sol = min_norm_solve(p);
    Rng rng(750);
    const double oracle = testsupport::dictionary_min_norm_ld(p, random_probes(rng, 6));
    CHECK(std::abs(sol.norm - oracle) <= 1e-10 * std::max(1.0, sol.norm));
    CHECK(sol.max_residual <= 1e-12);
}

TEST_CASE("min_norm_solve against the dictionary and extended-precision oracles") {
    Rng rng(75);
    for (int trial = 0; trial < 25; ++trial) {
        const auto p = random_problem(rng, 3, 2, true);
        const auto sol = min_norm_solve(p);
        const double ld = testsupport::min_norm_ld(p);
        // the double-precision solve carries a cond * eps error floor
        const double tol = std::max(1e-10, 1e-15 * sol.gram_condition);
        REQUIRE(std::abs(sol.norm - ld) <= tol * std::max(1.0, ld));
        const double oracle = testsupport::dictionary_min_norm_ld(p, random_probes(rng, 6));
        REQUIRE(std::abs(oracle - ld) <= 1e-10 * std::max(1.0, ld));
        REQUIRE(sol.max_residual <= 1e-10);
    }
}

TEST_CASE("min_norm_solve norm against the quadrature oracle") {
    Rng rng(76);
    for (int trial = 0; trial < 5; ++trial) {
        const auto p = random_problem(rng, 3, 2, true);
        const auto sol = min_norm_solve(p);
        const double qnorm = testsupport::axis_norm(sol.f.value);
        REQUIRE(std::abs(qnorm - sol.norm) <= 1e-7 * std::max(1.0, sol.norm));
    }
}

TEST_CASE("min_norm solutions are orthogonal to B-multiples of sampled kernels") {
    Rng rng(99);
    for (int trial = 0; trial < 3; ++trial) {
        const auto p = random_problem(rng, 3, 2, true);
        const auto sol = min_norm_solve(p);
        for (int probe = 0; probe < 3; ++probe) {
            const Complex w = testsupport::right_point(rng, 0.4, 2.0, 2.0);
            auto bk = [&](Complex z) {
                Complex val = 1.0 / (z + std::conj(w));
                for (int l = 0; l < p.count(); ++l) {
                    val *= h2cert::halfplane::ipow(
                        h2cert::halfplane::blaschke(p.nodes[static_cast<std::size_t>(l)], z),
                        p.multiplicities[static_cast<std::size_t>(l)]);
                }
                return val;
            };
            const Complex ip = testsupport::axis_inner(sol.f.value, bk);
            REQUIRE(std::abs(ip) <= 1e-8 * std::max(1.0, sol.norm));
        }
    }
}

TEST_CASE("min_norm_solve conditioning error carries the node pair") {
    Eigen::VectorXcd c(1);
    c(0) = Complex(1.0, 0.0);
    const auto p = InterpolationProblem::create(
        {{1.0, 0.0}, {1.0, 1e-9}}, {1, 1},
        {Eigen::MatrixXcd::Identity(1, 1), Eigen::MatrixXcd::Identity(1, 1)}, {c, c});
    CHECK_THROWS_AS(min_norm_solve(p), ConditioningError);
    try {
        min_norm_solve(p);
    } catch (const ConditioningError& e) {
        CHECK(e.node_a == 0);
        CHECK(e.node_b == 1);
        CHECK(e.condition > 1e12);
    }
}

TEST_CASE("fc_construct feasibility and comparison with the minimal norm") {
    SUBCASE("zero targets give the zero function") {
        Rng rng(77);
        auto p = random_problem(rng, 3, 2, true);
        for (auto& t : p.targets) t.setZero();
        const auto fc = fc_construct(p);
        CHECK(std::abs(fc.f.value(Complex(1.1, -0.2))) < 1e-13);
    }
    SUBCASE("single-node defining property") {
        Eigen::VectorXcd c(1);
        c(0) = Complex(1.0, 0.0);
        const auto p =
            InterpolationProblem::create({{1.0, 0.0}}, {1}, {Eigen::MatrixXcd::Identity(1, 1)}, {c});
        const auto fc = fc_construct(p);
        CHECK(std::abs(fc.f.value(Complex(1.0, 0.0)) - Complex(1.0, 0.0)) < 1e-12);
    }
    SUBCASE("random instances: feasible, with norm at least the minimum") {
        Rng rng(78);
        for (int trial = 0; trial < 5; ++trial) {
            const auto p = random_problem(rng, 3, 2, true);
            const auto fc = fc_construct(p);
            REQUIRE(fc.max_residual <= 1e-9);
            const auto sol = min_norm_solve(p);
            const double fc_norm = testsupport::axis_norm(fc.f.value);
            REQUIRE(fc_norm >= sol.norm - 1e-7);
        }
    }
}

TEST_CASE("duality: ||J|| equals the worst-case minimal norm") {
    SUBCASE("single node analytic value") {
        const auto p =
            InterpolationProblem::create({{1.0, 0.0}}, {1}, {Eigen::MatrixXcd::Identity(1, 1)});
        const auto j = j_operator(p);
        CHECK(j.norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
        CHECK(worst_case_min_norm(p) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    }
    SUBCASE("G -> 2G halves the norm") {
        Rng rng(79);
        auto p = random_problem(rng, 3, 3, false);
        const double base = j_operator(p).norm;
        for (auto& G : p.weights) G *= 2.0;
        CHECK(j_operator(p).norm == doctest::Approx(base / 2.0).epsilon(1e-12));
    }
    SUBCASE("random instances at relative 1e-8") {
        Rng rng(80);
        for (int trial = 0; trial < 60; ++trial) {
            const auto p = random_problem(rng, 5, 3, false);
            const double jn = j_operator(p).norm;
            const double wc = testsupport::worst_case_min_norm_ld(p);
            REQUIRE(std::abs(jn - wc) / std::max(jn, wc) <= 1e-8);
            // the double-precision reporting route tracks the oracle up to
            // its cond * eps floor
            const double wcd = worst_case_min_norm(p);
            REQUIRE(std::abs(wcd - wc) / std::max(wcd, wc) <= 1e-5);
        }
    }
}

TEST_CASE("augment_finite") {
    Rng rng(81);
    Eigen::VectorXcd c(1);
    c(0) = Complex(1.0, 0.0);
    const auto base =
        InterpolationProblem::create({{1.0, 0.0}}, {1}, {Eigen::MatrixXcd::Identity(1, 1)}, {c});
    const auto sol = min_norm_solve(base);

    SUBCASE("matching targets return exactly the base function") {
        const Complex mu(2.0, 0.5);
        const Complex a(1.3, -0.2);
        const Complex d = a * sol.f.jet(mu, 0).derivative(0);
        const auto aug = augment_finite(base, sol.f, {{mu, {a}, {d}}});
        CHECK(aug.corrector_coefficients.size() == 1);
        CHECK(aug.corrector_coefficients[0] == Complex(0.0, 0.0));
        for (int i = 0; i < 5; ++i) {
            const Complex z = testsupport::right_point(rng, 0.3, 3.0, 3.0);
            REQUIRE(aug.g.value(z) == sol.f.value(z));  // bitwise: no corrector added
        }
    }
    SUBCASE("value condition at a new point") {
        const auto aug = augment_finite(base, sol.f, {{{2.0, 0.0}, {{1.0, 0.0}}, {{0.0, 0.0}}}});
        CHECK(aug.max_residual <= 1e-10);
        CHECK(std::abs(aug.g.value(Complex(2.0, 0.0))) <= 1e-12);
        CHECK(std::abs(aug.g.value(Complex(1.0, 0.0)) - Complex(1.0, 0.0)) <= 1e-12);
    }
    SUBCASE("value plus derivative at one point") {
        const Complex mu(1.5, 0.7);
        const std::vector<Complex> a{{1.0, 0.5}, {-0.8, 0.1}};
        const std::vector<Complex> d{{0.3, -0.4}, {0.2, 0.9}};
        const auto aug = augment_finite(base, sol.f, {{mu, a, d}});
        CHECK(aug.max_residual <= 1e-9);
        const auto jet = aug.g.jet(mu, 1);
        CHECK(std::abs(a[0] * jet.derivative(0) - d[0]) <= 1e-10);
        CHECK(std::abs(a[1] * jet.derivative(1) - d[1]) <= 1e-10);
    }
    SUBCASE("two extra points, second with derivatives") {
        const auto aug =
            augment_finite(base, sol.f,
                           {{{2.0, 0.0}, {{1.0, 0.0}}, {{0.5, 0.5}}},
                            {{0.7, -1.1}, {{2.0, 0.0}, {1.0, 1.0}}, {{0.1, 0.0}, {-0.3, 0.2}}}});
        CHECK(aug.max_residual <= 1e-9);
    }
    SUBCASE("collisions are rejected") {
        CHECK_THROWS_AS(augment_finite(base, sol.f, {{{1.0, 0.0}, {{1.0, 0.0}}, {{0.0, 0.0}}}}),
                        std::domain_error);
        CHECK_THROWS_AS(augment_finite(base, sol.f, {{{2.0, 0.0}, {{0.0, 0.0}}, {{0.0, 0.0}}}}),
                        std::invalid_argument);
    }
}

TEST_CASE("Cauchy estimate for the J-operator functionals") {
    Rng rng(82);
    // analytic Cauchy-route constants C(K) = 9^K / 4 for the radius Re(l)/4
    const double frozen[4] = {0.0, 2.25, 20.25, 182.25};
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_problem(rng, 3, 3, true);
        const auto sol = min_norm_solve(p);  // h in the representer span
        for (int n = 0; n < p.count(); ++n) {
            const Complex lam = p.nodes[static_cast<std::size_t>(n)];
            const int K = p.multiplicities[static_cast<std::size_t>(n)];
            const double r = lam.real() / 4.0;
            double sup = 0.0;
            for (int s = 0; s < 256; ++s) {
                const double t = 2.0 * M_PI * s / 256.0;
                sup = std::max(
                    sup, std::abs(sol.f.value(lam + r * Complex(std::cos(t), std::sin(t)))));
            }
            for (int k = 0; k < K; ++k) {
                const int m = K - k;  // power of (z + conj(l)); derivative order m-1
                const auto zjet = h2cert::halfplane::TaylorJet::variable(lam, m - 1);
                const auto cjet =
                    h2cert::halfplane::TaylorJet::constant(std::conj(lam), lam, m - 1);
                const auto wjet = (zjet + cjet).pow(m) * sol.f.jet(lam, m - 1);
                const double lhs = std::abs(wjet.derivative(m - 1));
                const double bound =
                    frozen[K] * h2cert::halfplane::factorial(m - 1) * lam.real() * sup;
                REQUIRE(lhs <= bound * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("measure stability under quarter-Re displacement") {
    Rng rng(83);
    for (int trial = 0; trial < 40; ++trial) {
        const auto p = random_problem(rng, 4, 3, false);
        const auto m = vasyunin_measure(p);
        const double base = h2cert::carleson::carleson_constant(m);
        std::vector<h2cert::carleson::AtomicMeasure::Atom> moved;
        for (const auto& a : m.atoms()) {
            const double r = a.location.real() / 4.0 * testsupport::uniform(rng, 0.0, 1.0);
            const double t = testsupport::uniform(rng, 0.0, 2.0 * M_PI);
            const Complex mu = a.location + r * Complex(std::cos(t), std::sin(t));
            const double scale = mu.real() / a.location.real();
            moved.push_back({mu, a.weight * scale * scale});
        }
        const double displaced =
            h2cert::carleson::carleson_constant(h2cert::carleson::AtomicMeasure::from_atoms(moved));
        REQUIRE(displaced <= 2.0 * base * (1.0 + 1e-12));
    }
}
