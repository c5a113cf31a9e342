#include "support.hpp"

#include <gossiplab/analysis.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace gossiplab;
using namespace testing_support;

TEST_CASE("expected matrix: averaged sum equals the block formulas") {
    const auto g = directed_rgg(10, 31);
    for (auto kind : {SchemeKind::UBGA1, SchemeKind::UBGA3, SchemeKind::BBGA, SchemeKind::ClassicBGA}) {
        const auto s = build_scheme(kind, g, 0.35);
        const auto m = expected_matrix(s);
        CHECK(max_abs(m.w_bar - (m.w0 + s.epsilon() * m.e)) <= 1e-12);
        Vector p = Vector::Zero(20);
        p.head(10).setOnes();
        CHECK((m.w_bar * p - p).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("BBGA expected matrix identities") {
    const auto g = rgg(12, 2);
    const double eps = 0.4;
    const auto s = build_scheme(SchemeKind::BBGA, g, eps);
    const auto m = expected_matrix(s);
    Vector pm(24);
    pm << Vector::Ones(12), -Vector::Ones(12);
    CHECK((m.w_bar * pm - (1.0 - eps / 12.0) * pm).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(max_abs(m.s_bar - (Matrix::Identity(12, 12) - m.l_bar)) <= 1e-14);
    CHECK(max_abs(m.d_bar - Matrix::Identity(12, 12) / 12.0) <= 1e-14);
}

TEST_CASE("companion stochasticity and the expected companion block") {
    const auto g = directed_rgg(9, 6);
    for (auto kind : {SchemeKind::UBGA2, SchemeKind::BBGA}) {
        const auto m = expected_matrix(build_scheme(kind, g, 0.2));
        const auto s = eigenvalues(m.s_bar);
        int near_one = 0;
        for (const auto& v : s) near_one += std::abs(v - 1.0) <= 1e-8;
        CHECK(near_one == 1);
    }
    // A strictly sub-stochastic companion drops the unit eigenvalue.
    Matrix sub = build_scheme(SchemeKind::BBGA, g, 0.2).b() * 0.9;
    const Matrix s_bar = (1.0 - 1.0 / 9.0) * Matrix::Identity(9, 9) + sub / 9.0;
    CHECK(spectral_radius(s_bar) < 1.0 - 1e-10);
}

TEST_CASE("UBGA expectation converges to the average") {
    const auto g = directed_rgg(10, 12);
    for (auto kind : {SchemeKind::UBGA1, SchemeKind::UBGA2, SchemeKind::UBGA3}) {
        const auto rep = classify_expectation(build_scheme(kind, g, 0.2));
        REQUIRE(rep.is_simple_one);
        CHECK((rep.w1.array() - 0.1).abs().maxCoeff() <= 1e-8);
        CHECK(std::abs(rep.w1.sum() - 1.0) <= 1e-10);
        Vector x0 = Vector::LinSpaced(10, -1.0, 3.0);
        CHECK(predicted_consensus(rep, x0) == Catch::Approx(x0.mean()).margin(1e-8));
        CHECK(predicted_consensus(rep, Vector::Constant(10, 2.5)) == Catch::Approx(2.5).epsilon(1e-10));
    }
}

TEST_CASE("BBGA prediction on the 3-node digraph") {
    const auto g = three_node_digraph();
    const auto s = build_scheme(SchemeKind::BBGA, g, 0.3);
    const auto rep = classify_expectation(s);
    REQUIRE(rep.is_simple_one);
    const Vector v = companion_stationary_vector(s);
    CHECK((rep.w1 - v).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((rep.w2 - v).cwiseAbs().maxCoeff() <= 1e-8);
    Vector x0(3);
    x0 << 1.0, 5.0, -2.0;
    CHECK(predicted_consensus(rep, x0) == Catch::Approx(0.4 * 1.0 + 0.2 * 5.0 - 0.4 * 2.0).margin(1e-8));
}

TEST_CASE("predicted consensus requires a simple unit eigenvalue") {
    SpectralReport rep;
    CHECK_THROWS_AS(predicted_consensus(rep, Vector::Ones(3)), NotSimple);
}

TEST_CASE("classic broadcast gossip is classified as well") {
    const auto g = rgg(8, 5);
    const auto rep = classify_expectation(build_scheme(SchemeKind::ClassicBGA, g, 0.0));
    // y stays zero, so its block contributes eigenvalues (1 - 1/n) and the
    // x block carries the consensus eigenvalue.
    CHECK(rep.is_simple_one);
    CHECK(std::abs(rep.w1.sum() - 1.0) <= 1e-10);
}

TEST_CASE("closed-form eigenvalues") {
    const auto [lo, hi] = bbga_closed_pair(0.0, 0.3, 10);
    CHECK(std::abs(lo - (1.0 - 0.3 / 10.0)) < 1e-15);
    CHECK(std::abs(hi - 1.0) < 1e-15);

    const auto small = bbga_closed_pair(0.8, 1e-12, 10);
    CHECK(std::abs(small.lower - (1.0 - 0.08)) < 1e-6);
    CHECK(std::abs(small.upper - (1.0 - 0.08)) < 1e-6);

    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto g = rgg(8, seed);
        const auto xi = eigenvalues(bbga_laplacian(g));
        for (double eps : {0.1, 0.5, 1.0}) {
            const auto numeric = eigenvalues(expected_matrix(build_scheme(SchemeKind::BBGA, g, eps)).w_bar);
            CHECK(matched_distance(numeric, bbga_closed_eigs(xi, eps, 8)) <= 1e-7);
        }
    }
}

TEST_CASE("BBGA laplacian spectrum lies in the right half disc of radius 2") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto xi = eigenvalues(bbga_laplacian(directed_rgg(12, seed)));
        for (const auto& v : xi) {
            CHECK(v.real() >= -1e-12);
            CHECK(std::abs(v) <= 2.0 + 1e-12);
        }
    }
}

TEST_CASE("stability bound") {
    CHECK(eta_bound(1.3796, 16) == Catch::Approx(29.30).margin(0.01));
    CHECK(eta_bound(0.0, 16) == 32.0);
    CHECK(eta_bound(2.0, 16) == Catch::Approx(eta_practical(16)).epsilon(1e-15));
    CHECK(eta_practical(16) == Catch::Approx(2.0 * 15.0 * 15.0 / 16.0));
    CHECK_THROWS_AS(eta_bound(2.5, 16), XiOutOfRange);
    CHECK_THROWS_AS(eta_bound(-0.1, 16), XiOutOfRange);
}

TEST_CASE("optimal epsilon") {
    const auto a = optimal_epsilon(0.5335, 16);
    CHECK(a.epsilon == Catch::Approx(0.2668).margin(1e-4));
    CHECK(a.lambda2 == Catch::Approx(1.0 - 0.5335 / 32.0));
    CHECK(optimal_epsilon(0.3930, 16).epsilon == Catch::Approx(0.1965).margin(1e-4));

    const auto two = optimal_epsilon(2.0, 2);
    CHECK(two.epsilon == Catch::Approx(0.5858).margin(1e-4));
    CHECK(two.epsilon == Catch::Approx(2.0 - std::sqrt(2.0)));
    // At that epsilon the two nontrivial branches have equal modulus sqrt(2)/2.
    CHECK(two.lambda2 == Catch::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
    const auto rep = classify_expectation(build_scheme(SchemeKind::BBGA, complete_graph(2), two.epsilon));
    CHECK(rep.second_largest_modulus == Catch::Approx(two.lambda2).epsilon(1e-9));

    CHECK_THROWS_AS(optimal_epsilon(0.0, 5), BadXi);
    CHECK_THROWS_AS(optimal_epsilon(0.5, 1), InvalidArgument);
}

TEST_CASE("classification at the optimum and at small epsilon") {
    const auto g = rgg(16, 42);
    const auto er = epsilon_report(g);
    REQUIRE(er.spectrum_real);
    const auto at_star = classify_expectation(build_scheme(SchemeKind::BBGA, g, er.epsilon_star));
    CHECK(at_star.is_simple_one);
    CHECK(at_star.second_largest_modulus == Catch::Approx(1.0 - er.xi2 / 32.0).margin(1e-6));

    const auto tiny = classify_expectation(build_scheme(SchemeKind::BBGA, g, 0.01));
    CHECK(std::abs(tiny.second_largest_value - (1.0 - 0.01 / 16.0)) <= 1e-8);
}

TEST_CASE("epsilon report invariants") {
    const auto er = epsilon_report(rgg(16, 9));
    REQUIRE(er.spectrum_real);
    REQUIRE(er.eta_formula);
    CHECK(er.eta_practical <= *er.eta_formula);
    CHECK(*er.eta_formula <= 32.0);
    CHECK_FALSE(er.approximate);
    CHECK(er.xi[0].real() == Catch::Approx(0.0).margin(1e-10));

    const auto dr = epsilon_report(directed_rgg(16, 9, 0.5));
    if (!dr.spectrum_real) {
        CHECK(dr.approximate);
        CHECK_FALSE(dr.eta_formula);
        CHECK(dr.epsilon_star == Catch::Approx(dr.xi2 / 2.0));
    }
}

TEST_CASE("bound sandwich on a real-spectrum graph") {
    const auto g = rgg(8, 14);
    const auto er = epsilon_report(g);
    REQUIRE(er.eta_formula);
    const double eta = *er.eta_formula;
    const auto inside = classify_expectation(build_scheme(SchemeKind::BBGA, g, 0.99 * eta));
    CHECK(inside.is_simple_one);
    const auto outside = classify_expectation(build_scheme(SchemeKind::BBGA, g, 1.01 * eta));
    CHECK_FALSE(outside.is_simple_one);
    double min_real = 1.0;
    for (const auto& v : outside.spectrum) min_real = std::min(min_real, v.real());
    CHECK(min_real <= -1.0 + 1e-6);
}

TEST_CASE("monotonicity of the closed forms") {
    const std::vector<double> xi{0.0, 0.5, 1.3};
    const auto grid = epsilon_grid(0.02, 1.0, 0.02);
    CHECK(grid.size() == 50);
    CHECK(grid.back() == Catch::Approx(1.0));
    const auto rep = monotonicity_check(xi, grid, 16);
    CHECK(rep.ok());
    CHECK(rep.unit_branch_constant);
    CHECK(rep.lower_below_upper);
    CHECK_THROWS_AS(monotonicity_check(std::vector<double>{-1.0}, grid, 16), InvalidArgument);
}

TEST_CASE("analytic sweep minimum sits near the optimal epsilon") {
    const auto g = rgg(16, 3);
    const auto er = epsilon_report(g);
    const auto grid = epsilon_grid(0.02, 1.0, 0.02);
    const auto pts = analytic_sweep(build_scheme(SchemeKind::BBGA, g, 0.1), grid);
    const auto best = std::min_element(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a.second_largest_modulus < b.second_largest_modulus;
    });
    CHECK(std::abs(best->epsilon - er.epsilon_star) <= 0.02 + 1e-12);
}

TEST_CASE("second-moment matrix") {
    const auto g = rgg(5, 4);
    for (auto kind : {SchemeKind::UBGA1, SchemeKind::BBGA}) {
        const auto s = build_scheme(kind, g, 0.2);
        const Vector v = kind == SchemeKind::BBGA ? companion_stationary_vector(s) : Vector::Constant(5, 0.2);
        const auto sm = second_moment_matrix(s, v);
        CHECK(sm.expected_kron.rows() == 100);
        CHECK((sm.expected_kron * sm.right - sm.right).norm() <= 1e-8);
        CHECK((sm.left.transpose() * sm.expected_kron - sm.left.transpose()).norm() <= 1e-8);
        CHECK(spectral_radius(sm.deflated) < 1.0);
    }
}

TEST_CASE("second-moment orthogonality of the initial error for UBGA") {
    const auto g = rgg(4, 8);
    const auto s = build_scheme(SchemeKind::UBGA1, g, 0.2);
    const auto sm = second_moment_matrix(s, Vector::Constant(4, 0.25));
    Vector x0(4);
    x0 << 0.3, -1.0, 2.0, 0.7;
    Vector z0 = Vector::Zero(8);
    z0.head(4) = x0;
    Vector jz = Vector::Zero(8);
    jz.head(4).setConstant(x0.mean());
    const Vector m0 = z0 - jz;
    const Vector stacked = kron(m0, m0);
    CHECK(std::abs(sm.left.dot(stacked)) <= 1e-14);
}

TEST_CASE("second-moment errors") {
    const auto s = build_scheme(SchemeKind::BBGA, three_node_digraph(), 0.2);
    CHECK_THROWS_AS(second_moment_matrix(s, Vector::Constant(3, 1.0 / 3.0)), BadStationaryVector);
    CHECK_THROWS_AS(second_moment_matrix(s, Vector::Ones(2)), BadStationaryVector);
    const auto big = build_scheme(SchemeKind::UBGA1, complete_graph(23), 0.2);
    CHECK_THROWS_AS(second_moment_matrix(big, Vector::Constant(23, 1.0 / 23.0)), SizeOverflow);
}
