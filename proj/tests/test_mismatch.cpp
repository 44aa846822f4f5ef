#include <doctest.h>

#include <cmath>
#include <random>

#include "nfem/constants.hpp"
#include "nfem/errors.hpp"
#include "nfem/mismatch.hpp"

using namespace nfem;

TEST_SUITE("mismatch") {

TEST_CASE("extended model genie has no bias") {
    const AntennaLayout layout = build_layout(LinearArray{7, 0.1, 2.0});
    for (const auto& s : {TargetSurface::sphere(0.8), TargetSurface::plate(3.0, 3.0),
                          TargetSurface::cylinder(0.8, 3.0)}) {
        const double rhat = genie_ls_range(s, layout, TargetModel::Extended, 1.5, 2.5);
        CHECK(std::abs(rhat - 2.0) <= 1e-6);
    }
}

TEST_CASE("single monostatic antenna sees no point-model bias") {
    const AntennaLayout layout = build_layout(LinearArray{1, 0.1, 3.0});
    const double rhat =
        genie_ls_range(TargetSurface::plate(2.0, 2.0), layout, TargetModel::Point, 2.0, 4.0);
    CHECK(std::abs(rhat - 3.0) <= 1e-6);
}

TEST_CASE("genie bias below the ML bias at half-wavelength spacing") {
    // 3.5 GHz half-wavelength spacing; plate large enough to hold all speculars
    BiasSweepSpec spec;
    spec.target = SurfaceKind::Plate;
    spec.radius = 1.0;
    spec.range = 1.0;
    spec.n_antennas = 13;
    const double delta = 0.5 * kSpeedOfLight / 3.5e9;
    spec.estimator = SweepEstimator::Genie;
    const double genie = bias_cell(spec, 1.0, 1.0, delta, 0.0);
    CHECK(genie > 0.0);
    spec.estimator = SweepEstimator::Ml;
    const double ml = bias_cell(spec, 1.0, 1.0, delta, 0.0);
    CHECK(genie < ml);
}

TEST_CASE("analytic bias examples") {
    SUBCASE("all stationary points at the reference: zero bias") {
        const AntennaLayout layout = build_layout(LinearArray{1, 0.1, 5.0});
        const auto r = analytic_point_bias(layout, TargetSurface::plate(2.0, 2.0), {0, 0, 0});
        CHECK(std::abs(r.bias) < 1e-12);
    }
    SUBCASE("three-antenna Taylor value") {
        const AntennaLayout layout = build_layout(LinearArray{3, 0.1, 10.0});
        const auto r = analytic_point_bias(layout, TargetSurface::plate(4.0, 4.0), {0, 0, 0});
        CHECK(r.far_field_valid);
        CHECK(r.bias == doctest::Approx(0.1 * 0.1 / (6.0 * 10.0)).epsilon(0.01));
    }
    SUBCASE("agrees with the numeric genie in the far field") {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 5; ++i) {
            const int n = 3 + static_cast<int>(u(rng) * 10);
            const double delta = 0.03 + 0.08 * u(rng);
            const double aperture = (n - 1) * delta;
            const double range = 10.0 * aperture + 1.0 + 5.0 * u(rng);
            const int kind = i % 3;
            const TargetSurface s = kind == 0   ? TargetSurface::plate(20.0, 20.0)
                                    : kind == 1 ? TargetSurface::sphere(0.5 + u(rng))
                                                : TargetSurface::cylinder(0.5 + u(rng), 20.0);
            const AntennaLayout layout = build_layout(LinearArray{n, delta, range});
            const auto a = analytic_point_bias(layout, s, {0, 0, 0});
            REQUIRE(a.far_field_valid);
            const double rhat =
                genie_ls_range(s, layout, TargetModel::Point, range - 0.3, range + 0.1);
            const double g = range - rhat;
            CHECK(std::abs(a.bias - g) <= 0.05 * std::max(std::abs(g), 1e-12));
        }
    }
}

TEST_CASE("equipotential curve") {
    SUBCASE("quadratic scaling in the spacing") {
        const double r1 = equipotential_plate(0.15, 13, 0.1);
        const double r2 = equipotential_plate(0.15, 13, 0.2);
        CHECK(r2 == doctest::Approx(4.0 * r1).epsilon(1e-12));
    }
    SUBCASE("large alpha collapses the curve") {
        CHECK(equipotential_plate(1e9, 13, 0.1) < 1e-9);
        CHECK_THROWS_AS(equipotential_plate(0.0, 13, 0.1), ConfigError);
        CHECK_THROWS_AS(equipotential_plate(-1.0, 13, 0.1), ConfigError);
    }
    SUBCASE("feedback through the genie in the far-field regime") {
        const int n = 13;
        const double delta = 0.05;       // aperture 0.6 m
        const double alpha = 0.001;      // R = 8.75 m  >= 10 x aperture
        const double r = equipotential_plate(alpha, n, delta);
        REQUIRE(r >= 10.0 * (n - 1) * delta);
        const AntennaLayout layout = build_layout(LinearArray{n, delta, r});
        const double rhat = genie_ls_range(TargetSurface::plate(20.0, 20.0), layout,
                                           TargetModel::Point, r - 0.2, r + 0.1);
        CHECK(std::abs((r - rhat) - alpha) <= 0.1 * alpha);
    }
}

TEST_CASE("bias ladders are monotone") {
    BiasSweepSpec spec;
    spec.target = SurfaceKind::Sphere;
    spec.estimator = SweepEstimator::Genie;
    SUBCASE("decreasing in range") {
        double prev = 1e300;
        for (double r : {1.0, 2.0, 4.0}) {
            const double b = bias_cell(spec, r, 1.0, 0.086, 0.0);
            CHECK(b < prev);
            prev = b;
        }
    }
    SUBCASE("increasing in spacing") {
        double prev = 0.0;
        for (double d : {0.05, 0.086, 0.15}) {
            const double b = bias_cell(spec, 1.0, 1.0, d, 0.0);
            CHECK(b > prev);
            prev = b;
        }
    }
    SUBCASE("increasing in radius") {
        double prev = 0.0;
        for (double rho : {0.5, 1.0, 2.0}) {
            const double b = bias_cell(spec, 1.0, rho, 0.086, 0.0);
            CHECK(b > prev);
            prev = b;
        }
    }
}

TEST_CASE("distributed sweep structure") {
    BiasSweepSpec spec;
    spec.estimator = SweepEstimator::Genie;
    spec.relative = true;
    spec.n_antennas = 13;
    spec.sub_count = 3;
    spec.spacing = 0.086;
    spec.range = 2.0;
    double prev_s = 0.0, prev_p = 0.0;
    for (double s : {1.5, 2.5, 3.5}) {
        spec.target = SurfaceKind::Sphere;
        const double bs = bias_cell(spec, 2.0, 1.0, 0.086, s);
        spec.target = SurfaceKind::Plate;
        const double bp = bias_cell(spec, 2.0, 1.0, 0.086, s);
        CHECK(bp >= bs);       // plate at or above the sphere
        CHECK(bs >= prev_s);   // nondecreasing in sub-array spacing
        CHECK(bp >= prev_p);
        prev_s = bs;
        prev_p = bp;
    }
}

TEST_CASE("genie search interval guards") {
    const AntennaLayout layout = build_layout(LinearArray{5, 0.1, 2.0});
    CHECK_THROWS_AS(genie_ls_range(TargetSurface::sphere(1.0), layout, TargetModel::Point,
                                   3.0, 4.0),
                    BoundaryError);
    CHECK_THROWS_AS(genie_ls_range(TargetSurface::sphere(1.0), layout, TargetModel::Point,
                                   2.0, 2.0),
                    ConfigError);
}

TEST_CASE("bias sweep grid plumbing") {
    BiasSweepSpec spec;
    spec.estimator = SweepEstimator::Genie;
    spec.axis1 = SweepAxis::Range;
    spec.axis2 = SweepAxis::Radius;
    spec.grid1 = {1.0, 2.0};
    spec.grid2 = {0.5, 1.0};
    const BiasSweep sw = bias_sweep(spec);
    CHECK(sw.axis1_name == "range_m");
    CHECK(sw.axis2_name == "radius_m");
    REQUIRE(sw.bias.size() == 2);
    REQUIRE(sw.bias[0].size() == 2);
    CHECK(sw.bias[0][0] == doctest::Approx(bias_cell(spec, 1.0, 0.5, spec.spacing, 0.0)));
    BiasSweepSpec bad = spec;
    bad.grid1 = {2.0, 1.0};
    CHECK_THROWS_AS(bias_sweep(bad), ConfigError);
}

} // TEST_SUITE
