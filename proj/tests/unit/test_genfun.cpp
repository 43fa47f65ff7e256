#include <doctest.h>

#include <cmath>

#include "qw/errors.hpp"
#include "qw/evolution.hpp"
#include "qw/genfun.hpp"
#include "qw/limits.hpp"
#include "support.hpp"

using namespace qw;

TEST_CASE("transfer roots solve their quadratics on the |lambda| < 1 branch") {
    testing::TupleGen gen(71);
    for (int i = 0; i < 100; ++i) {
        const CoinParameters p = gen.params();
        const complex z = std::polar(0.95 * gen.unit(), gen.angle());
        const GFValue g = gf_at(z, p);
        CHECK(std::abs(transfer_quadratic(g.f_plus, z, Side::positive, p)) < 1e-13);
        CHECK(std::abs(transfer_quadratic(g.f_minus, z, Side::negative, p)) < 1e-13);
        CHECK(std::abs(g.lambda_plus) < 1.0);
        CHECK(std::abs(g.lambda_minus) < 1.0);
        CHECK(std::abs(g.lambda_plus - z / (std::polar(1.0, -p.sigma_plus()) * g.f_plus - kSqrt2)) < 1e-12);
        CHECK(std::abs(g.lambda_minus - z / (kSqrt2 - std::polar(1.0, p.sigma_minus()) * g.f_minus)) < 1e-12);
        CHECK(std::abs(g.Lambda0 - (1.0 + g.f_plus * g.f_minus)) == 0.0);
    }
}

TEST_CASE("closed forms match the power series of the path weights") {
    testing::TupleGen gen(81);
    const long horizon = 120;
    for (int i = 0; i < 10; ++i) {
        const CoinParameters p = gen.params();
        const WeightMatrixSeries xi = weight_matrices(p, horizon);
        for (double r : {0.2, 0.5, 0.7}) {
            const complex z = std::polar(r, gen.angle());
            const double tail = 2.0 * std::pow(r, horizon + 1) / (1.0 - r);
            for (long x = -6; x <= 6; ++x) {
                CoinMatrix sum = CoinMatrix::Zero();
                complex zt = 1.0;
                for (long t = 0; t <= horizon; ++t, zt *= z) sum += zt * xi.at(t, x);
                CHECK((xi_x(z, x, p) - sum).cwiseAbs().maxCoeff() <= tail + 1e-12);
            }
            CHECK((xi0(z, p) - xi_x(z, 0, p)).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("generating functions need the open disk") {
    CHECK_THROWS_AS(gf_at(complex(1.0, 0.0), example_parameters()), DomainError);
    CHECK_THROWS_AS(gf_at(complex(0.0, 1.2), example_parameters()), DomainError);
    CHECK_NOTHROW(gf_at(complex(0.0, 0.0), example_parameters()));
}

TEST_CASE("unit-circle values are the radial limits") {
    testing::TupleGen gen(91);
    for (int i = 0; i < 20; ++i) {
        const CoinParameters p = gen.params();
        for (double theta : {0.0, 0.4, -0.6, M_PI - 0.3, M_PI + 0.5}) {
            const GFValue g = gf_at(std::polar(1.0 - 1e-8, theta), p);
            CHECK(std::abs(unit_circle_f0(theta, Side::positive, p) - g.f_plus) < 1e-5);
            CHECK(std::abs(unit_circle_f0(theta, Side::negative, p) - g.f_minus) < 1e-5);
            CHECK(std::abs(unit_circle_lambda(theta, Side::positive) - g.lambda_plus) < 1e-5);
            CHECK(std::abs(unit_circle_lambda(theta, Side::negative) - g.lambda_minus) < 1e-5);
            CHECK(std::abs(unit_circle_lambda(theta, Side::positive)) == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
    const CoinParameters p = example_parameters();
    CHECK(std::abs(unit_circle_f0(0.0, Side::positive, p) - std::polar(std::sqrt(2.0) - 1.0, 1.5 * M_PI)) < 1e-15);
    CHECK_THROWS_AS(unit_circle_f0(M_PI / 2, Side::positive, p), DomainError);
}

TEST_CASE("singular points are zeros of 1 - e^{+-ik} lambda") {
    for (double k : {0.3, 1.2, 2.0, 2.9, 3.5, 4.4, 5.1, 6.0}) {
        const auto [plus, minus] = singular_points(k, example_parameters());
        for (const SingularPoint& sp : {plus, minus}) {
            const double e = sign_of(sp.branch);
            const complex lam = unit_circle_lambda(sp.theta, sp.branch);
            CHECK(std::abs(1.0 - std::polar(1.0, e * k) * lam) < 1e-12);
            CHECK(sp.cos_theta * sp.cos_theta + sp.sin_theta * sp.sin_theta == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(sp.s == (std::sin(k) * std::cos(k) > 0 ? 1.0 : -1.0));
            // x = -d theta / dk by central differences
            const double h = 1e-6;
            const auto next = singular_points(k + h, example_parameters());
            const auto prev = singular_points(k - h, example_parameters());
            const double tn = (sp.branch == Side::positive ? next.first : next.second).theta;
            const double tp = (sp.branch == Side::positive ? prev.first : prev.second).theta;
            CHECK(-(tn - tp) / (2 * h) == doctest::Approx(sp.x_slope).epsilon(1e-6));
        }
    }
    CHECK_THROWS_AS(singular_points(0.0, example_parameters()), DegenerateError);
    CHECK_THROWS_AS(singular_points(M_PI / 2, example_parameters()), DegenerateError);
}

TEST_CASE("residue factors equal the unit-circle quantities at the pole") {
    testing::TupleGen gen(101);
    for (int i = 0; i < 30; ++i) {
        const ParameterTuple tp = gen.tuple();
        for (double x : {0.15, 0.4, 0.62, -0.2, -0.5}) {
            for (double s : {1.0, -1.0}) {
                // momentum k in the quadrant with sgn(sin k cos k) = s and
                // |cos k| = |x| / sqrt(1 - x^2)
                const double base = std::acos(std::abs(x) / std::sqrt(1 - x * x));
                const double k = s > 0 ? base : M_PI - base;
                const Side branch = x > 0 ? Side::positive : Side::negative;
                const auto pts = singular_points(k, tp.params);
                const SingularPoint sp = branch == Side::positive ? pts.first : pts.second;
                REQUIRE(sp.x_slope == doctest::Approx(x).epsilon(1e-12));

                const complex fp = unit_circle_f0(sp.theta, Side::positive, tp.params);
                const complex fm = unit_circle_f0(sp.theta, Side::negative, tp.params);
                const complex lam = unit_circle_lambda(sp.theta, branch);
                const complex a = tp.init.alpha();
                const complex b = tp.init.beta();
                // residue of 1/(1 - e^{+-ik} lambda(z)) at z = e^{i theta}
                const double e = sign_of(branch);
                const double h = 1e-6;
                const complex dg = -(std::polar(1.0, e * k) * (unit_circle_lambda(sp.theta + h, branch) -
                                                               unit_circle_lambda(sp.theta - h, branch))) /
                                   (2 * h) / (complex(0, 1) * std::polar(1.0, sp.theta));
                const double r1 = 1.0 / std::norm(dg);
                const double r2 = 1.0 / std::norm(1.0 + fp * fm);
                const double r3 = x > 0 ? std::norm(a * fm + b) : std::norm(a - b * fp);
                const double r4 = std::norm(lam * (x > 0 ? fp : fm)) + 1.0;

                const ResidueComponents rc = residue_components(x, s, tp.params, tp.init);
                CHECK(rc.r1 == doctest::Approx(r1).epsilon(1e-8));
                CHECK(rc.r2 == doctest::Approx(r2).epsilon(1e-12));
                CHECK(rc.r3 == doctest::Approx(r3).epsilon(1e-11));
                CHECK(rc.r4 == doctest::Approx(r4).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("residue assembly reproduces the limit density") {
    const InitialState up = make_initial_state(1.0, 0.0);
    double worst = 0.0;
    for (int j = -69; j <= 69; ++j) {
        if (j == 0) continue;
        const double x = j / 100.0;
        worst = std::max(worst, std::abs(assemble_density(x, example_parameters(), up) -
                                         limit_density(x, example_parameters(), up)));
    }
    CHECK(worst <= 1e-10);

    const auto tuples = testing::fixture_tuples();
    for (std::size_t i = 0; i < 20; ++i) {
        CHECK(residue_theorem_check(tuples[i].params, tuples[i].init, residue_grid()) <= 1e-10);
    }
}

TEST_CASE("assembly domain") {
    const InitialState up = make_initial_state(1.0, 0.0);
    CHECK_THROWS_AS(assemble_density(0.0, example_parameters(), up), DomainError);
    CHECK_THROWS_AS(assemble_density(kSupportEdge - 1e-7, example_parameters(), up), DomainError);
    CHECK_THROWS_AS(residue_components(0.8, 1.0, example_parameters(), up), DomainError);
}
