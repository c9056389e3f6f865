#include "generators.hpp"

#include "mixedfrac/kernels.hpp"
#include "mixedfrac/stats.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace mixedfrac;
using mixedfrac::testing::for_all;
using mixedfrac::testing::Gen;

// Reference values below were evaluated independently at 30 digits.

TEST(Normalization, ClosedFormValues) {
    EXPECT_NEAR(normalization_constant(1, 0.5), 1.0 / std::numbers::pi, 1e-15);
    EXPECT_NEAR(normalization_constant(2, 0.5), 0.5 / std::numbers::pi, 1e-15);
    EXPECT_NEAR(normalization_constant(1, 0.3), 0.230096381681632104648, 1e-15);
    EXPECT_NEAR(normalization_constant(2, 0.7), 0.178600382438444733813, 1e-15);
}

TEST(Normalization, PositiveAndVanishingAtZero) {
    for (double s = 0.01; s < 1.0; s += 0.01) {
        EXPECT_GT(normalization_constant(1, s), 0.0);
        EXPECT_GT(normalization_constant(2, s), 0.0);
    }
    EXPECT_LT(normalization_constant(1, 1e-8), 1e-7);
    EXPECT_THROW(FracParams::make(1, 1.2), std::invalid_argument);
    EXPECT_THROW(FracParams::make(3, 0.5), std::invalid_argument);
}

TEST(BoundaryFactor, IntervalClosedForms) {
    const Domain unit = Domain::interval(0.0, 1.0);
    EXPECT_NEAR(boundary_factor(point1d(2.0), unit, FracParams::make(1, 0.25)), 0.585786437626904951198, 1e-13);
    EXPECT_NEAR(boundary_factor(point1d(3.0), unit, FracParams::make(1, 0.5)), 1.0 / 6.0, 1e-14);
    EXPECT_NEAR(boundary_factor(point1d(-1.0), unit, FracParams::make(1, 0.25)), 0.585786437626904951198, 1e-13);
    EXPECT_THROW((void)boundary_factor(point1d(0.5), unit, FracParams::make(1, 0.5)), std::invalid_argument);
}

TEST(BoundaryFactor, DiskQuadrature) {
    EXPECT_NEAR(disk_boundary_factor(2.0, 1.0, 1.0), 0.541731848613280328817, 1e-11);
    EXPECT_NEAR(disk_boundary_factor(2.0, 1.0, 0.6), 0.658887506777800910060, 1e-11);
    const Domain d = Domain::disk(Point(0.5, -0.5), 1.0);
    EXPECT_NEAR(boundary_factor(Point(0.5, 1.5), d, FracParams::make(2, 0.5)), 0.541731848613280328817, 1e-11);
}

TEST(TailIntegral, ClosedForm) {
    const Domain unit = Domain::interval(0.0, 1.0);
    EXPECT_NEAR(general_tail_integral(point1d(2.0), 1.0, unit), 0.5, 1e-14);
}

TEST(TailIntegral, ReducesToBoundaryFactor) {
    for_all(20, 11, [](Gen& g) {
        const Domain d = g.integer(0, 1) ? g.interval() : g.disk();
        const double s = g.order();
        const Point x = g.exterior_point(d, 2.0 * d.diameter());
        const double a = general_tail_integral(x, 2.0 * s, d);
        EXPECT_NEAR(a, boundary_factor(x, d, FracParams::make(d.dimension(), s)), 1e-12 * a);
    });
}

TEST(TailIntegral, ExponentMinusOneAtTauOne) {
    const Domain unit = Domain::interval(0.0, 1.0);
    std::vector<double> ld;
    std::vector<double> lf;
    for (double delta = 1e-5; delta < 1e-2; delta *= 1.5) {
        ld.push_back(std::log(delta));
        lf.push_back(std::log(general_tail_integral(point1d(1.0 + delta), 1.0, unit)));
    }
    EXPECT_NEAR(fit_line(ld, lf).slope, -1.0, 0.01);
}

TEST(BoundaryFactorProperty, SlopeMatchesTwoSidedBound) {
    for (const double s : {0.25, 0.5, 0.75}) {
        for (const Domain& d : {Domain::interval(0.0, 1.0), Domain::disk(Point(0, 0), 0.5)}) {
            const Grid grid = build_grid(d, d.diameter() / 400.0, default_r_trunc(d));
            const FracParams p = FracParams::make(d.dimension(), s);
            std::vector<double> ld;
            std::vector<double> lf;
            for (const double delta : grid.shells) {
                if (delta > grid.h) {
                    break;
                }
                const Point x = d.shape() == Shape::Interval ? point1d(1.0 + delta) : Point(0.5 + delta, 0.0);
                ld.push_back(std::log(delta));
                lf.push_back(std::log(boundary_factor(x, d, p)));
            }
            ASSERT_GE(ld.size(), 5u);
            EXPECT_NEAR(fit_line(ld, lf).slope, -2.0 * s, 0.05) << "s=" << s << " " << d.describe();
        }
    }
}

TEST(BoundaryFactorProperty, DecreasesAlongRay) {
    for_all(20, 12, [](Gen& g) {
        const Domain d = g.integer(0, 1) ? g.interval() : g.disk();
        const FracParams p = FracParams::make(d.dimension(), g.order());
        const Point x0 = g.exterior_point(d, 0.1 * d.diameter());
        const Point dir = d.outward_normal(x0);
        double prev = boundary_factor(x0, d, p);
        for (double step = 1e-3; step < 10.0; step *= 2.0) {
            const double f = boundary_factor(x0 + step * d.diameter() * dir, d, p);
            EXPECT_LT(f, prev);
            prev = f;
        }
    });
}

TEST(RegionalKernel, MatchesReferenceValue) {
    const Domain unit = Domain::interval(0.0, 1.0);
    const auto k = regional_kernel(point1d(0.3), point1d(0.7), unit, FracParams::make(1, 0.3));
    EXPECT_NEAR(k.value, 8.64567899329945553092, 1e-6 * 8.65);
    EXPECT_NEAR(k.singular, std::pow(0.4, -1.6), 1e-13);
    EXPECT_GE(k.tail, 0.0);
    EXPECT_LT(k.tail, k.k_omega);
}

TEST(RegionalKernelProperty, DominatesSingularPartAndSymmetric) {
    for_all(15, 13, [](Gen& g) {
        const Domain d = g.integer(0, 2) ? g.interval() : g.disk();
        const FracParams p = FracParams::make(d.dimension(), g.order());
        const Point x = g.interior_point(d);
        const Point y = g.interior_point(d);
        const auto kxy = regional_kernel(x, y, d, p);
        const auto kyx = regional_kernel(y, x, d, p);
        EXPECT_GE(kxy.k_omega, 0.0);
        EXPECT_GE(kxy.value, kernel((x - y).norm(), p));
        EXPECT_NEAR(kxy.value, kyx.value, 1e-10 * kxy.value);
    });
}

TEST(PowerIntegral, StableNearMinusOne) {
    EXPECT_NEAR(power_integral(-1.0, 1.0, std::exp(1.0)), 1.0, 1e-15);
    EXPECT_NEAR(power_integral(-1.0 + 1e-12, 1.0, std::exp(1.0)), 1.0, 1e-11);
    EXPECT_NEAR(power_integral(2.0, 0.0 + 1e-300, 3.0), 9.0, 1e-12);
}
