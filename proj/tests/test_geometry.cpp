#include "generators.hpp"

#include "mixedfrac/geometry.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace mixedfrac;
using mixedfrac::testing::for_all;
using mixedfrac::testing::Gen;

TEST(Domain, DistanceToBoundary) {
    const Domain unit = Domain::interval(0.0, 1.0);
    EXPECT_DOUBLE_EQ(unit.distance_to_boundary(point1d(0.5)), 0.5);
    EXPECT_DOUBLE_EQ(unit.distance_to_boundary(point1d(2.0)), 1.0);
    EXPECT_DOUBLE_EQ(Domain::disk(Point(0, 0), 1.0).distance_to_boundary(Point(2, 0)), 1.0);
}

TEST(Domain, NearestBoundaryPoint) {
    const Domain unit = Domain::interval(0.0, 1.0);
    EXPECT_DOUBLE_EQ(unit.nearest_boundary_point(point1d(1.3)).x(), 1.0);
    EXPECT_DOUBLE_EQ(unit.nearest_boundary_point(point1d(-0.2)).x(), 0.0);
    const Point p = Domain::disk(Point(0, 0), 1.0).nearest_boundary_point(Point(0, -2));
    EXPECT_NEAR(p.x(), 0.0, 1e-15);
    EXPECT_NEAR(p.y(), -1.0, 1e-15);
    EXPECT_THROW((void)unit.nearest_boundary_point(point1d(0.5)), std::invalid_argument);
}

TEST(Domain, RejectsDegenerateInput) {
    EXPECT_THROW(Domain::interval(1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(Domain::disk(Point(0, 0), -1.0), std::invalid_argument);
}

TEST(Domain, Describe) {
    EXPECT_EQ(Domain::interval(0, 1).describe(), "interval(0,1)");
    EXPECT_EQ(Domain::disk(Point(0, 0), 1).describe(), "disk(0,0,1)");
}

TEST(Grid, UniformPartition) {
    const Grid g = build_grid(Domain::interval(0.0, 1.0), 0.1, 8.0);
    ASSERT_EQ(g.interior.size(), 9u);
    for (std::size_t k = 0; k < 9; ++k) {
        EXPECT_NEAR(g.interior[k].x(), 0.1 * static_cast<double>(k + 1), 1e-14);
    }
    EXPECT_EQ(g.boundary.size(), 2u);
}

TEST(Grid, DiskNodesInside) {
    const Domain d = Domain::disk(Point(0, 0), 1.0);
    const Grid g = build_grid(d, 0.25, default_r_trunc(d));
    ASSERT_FALSE(g.interior.empty());
    for (const Point& x : g.interior) {
        EXPECT_LT(x.norm(), 1.0);
    }
}

TEST(Grid, RejectsCoarseSpacingAndShortTruncation) {
    const Domain d = Domain::interval(0.0, 1.0);
    EXPECT_THROW(build_grid(d, 0.6, 8.0), std::invalid_argument);
    EXPECT_THROW(build_grid(d, 0.1, 1.0), std::invalid_argument);
}

TEST(GridProperty, ShellsStrictlyIncreasing) {
    for_all(20, 1, [](Gen& g) {
        const Domain d = g.integer(0, 1) ? g.interval() : g.disk();
        const Grid grid = build_grid(d, g.spacing(d, 8, 24), default_r_trunc(d));
        ASSERT_GE(grid.shells.size(), 2u);
        EXPECT_TRUE(std::adjacent_find(grid.shells.begin(), grid.shells.end(),
                                       [](double a, double b) { return !(a < b); }) == grid.shells.end());
        for (const auto& e : grid.exterior) {
            EXPECT_NEAR(d.distance_to_boundary(e.position), e.delta, 1e-9 * (1.0 + e.delta));
            EXPECT_DOUBLE_EQ(grid.shells[e.shell], e.delta);
        }
    });
}

TEST(GridProperty, OnlyBoundaryNodesTouchTheBoundary) {
    for_all(20, 2, [](Gen& g) {
        const Domain d = g.integer(0, 1) ? g.interval() : g.disk();
        const Grid grid = build_grid(d, g.spacing(d, 6, 30), default_r_trunc(d));
        for (const Point& x : grid.interior) {
            EXPECT_GT(d.distance_to_boundary(x), 0.0);
            EXPECT_TRUE(d.contains(x));
        }
        for (const Point& x : grid.boundary) {
            EXPECT_NEAR(d.distance_to_boundary(x), 0.0, 1e-12);
        }
        for (const auto& e : grid.exterior) {
            EXPECT_GT(e.delta, 0.0);
        }
    });
}

TEST(DomainProperty, ProjectionTriangleBound) {
    for_all(50, 3, [](Gen& g) {
        const Domain d = g.integer(0, 1) ? g.interval() : g.disk();
        const Point x = g.exterior_point(d, 3.0 * d.diameter());
        const Point xhat = d.nearest_boundary_point(x);
        for (int k = 0; k < 20; ++k) {
            const Point y = g.interior_point(d);
            EXPECT_LE((y - xhat).norm(), 2.0 * (y - x).norm() * (1.0 + 1e-12));
        }
    });
}

TEST(DomainProperty, SignedDistanceConsistent) {
    for_all(50, 4, [](Gen& g) {
        const Domain d = g.integer(0, 1) ? g.interval() : g.disk();
        const Point x = g.exterior_point(d, d.diameter());
        EXPECT_GT(d.signed_distance(x), 0.0);
        EXPECT_FALSE(d.contains(x));
        const Point y = g.interior_point(d);
        EXPECT_LE(d.signed_distance(y), 0.0);
    });
}
