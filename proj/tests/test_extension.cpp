#include "generators.hpp"

#include "mixedfrac/extension.hpp"
#include "mixedfrac/verification.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace mixedfrac;
using mixedfrac::testing::for_all;
using mixedfrac::testing::Gen;
using mixedfrac::testing::make_rep;

namespace {

Domain any_domain(Gen& g) { return g.integer(0, 2) ? g.interval() : g.disk(); }

double spacing_for(Gen& g, const Domain& d) {
    return d.shape() == Shape::Interval ? g.spacing(d, 16, 64) : g.spacing(d, 8, 14);
}

}  // namespace

TEST(Extension, ConstantIsReproduced) {
    for (const Domain& d : {Domain::interval(0, 1), Domain::disk(Point(0, 0), 0.5)}) {
        const auto rep = make_rep(d, d.diameter() / 12.0, 0.4);
        const GridFunction u = extend(GridFunction::constant(rep->grid(), 5.0), *rep);
        for (Eigen::Index k = 0; k < u.exterior().size(); ++k) {
            EXPECT_NEAR(u.exterior()[k], 5.0, 1e-13);
        }
    }
}

TEST(Extension, LinearDataClosedForm) {
    const Domain unit = Domain::interval(0.0, 1.0);
    const auto rep = make_rep(unit, 1.0 / 20.0, 0.25);
    const GridFunction u = GridFunction::sample(rep->grid(), [](const Point& x) { return x.x(); });
    // 2 - sqrt(2), evaluated independently
    EXPECT_NEAR(extension_value(u, *rep, point1d(2.0)), 0.585786437626904951198, 1e-12);
}

TEST(Extension, NeumannDerivativeVanishes) {
    for_all(6, 21, [](Gen& g) {
        const Domain d = any_domain(g);
        const auto rep = make_rep(d, spacing_for(g, d), g.order());
        const GridFunction u = extend(GridFunction::sample(rep->grid(), g.smooth(d)), *rep);
        const double scale = rep->nodal_values(u).cwiseAbs().maxCoeff();
        for (std::size_t k = 0; k < rep->grid().exterior.size(); k += 7) {
            const double delta = rep->grid().exterior[k].delta;
            const double f = boundary_factor(rep->grid().exterior[k].position, d, rep->params());
            EXPECT_LE(std::abs(neumann_derivative(u, k, *rep)), 1e-9 * rep->params().C * f * scale)
                << "delta " << delta;
        }
    });
}

TEST(Extension, NeumannDerivativeOfConstantIsZero) {
    const Domain d = Domain::interval(0, 1);
    const auto rep = make_rep(d, 0.05, 0.5);
    const GridFunction u = extend(GridFunction::constant(rep->grid(), -3.0), *rep);
    for (std::size_t k = 0; k < rep->grid().exterior.size(); ++k) {
        EXPECT_NEAR(neumann_derivative(u, k, *rep), 0.0, 1e-12);
    }
}

TEST(Extension, RaisedExteriorGivesPositiveDerivative) {
    const Domain d = Domain::interval(0, 1);
    const auto rep = make_rep(d, 0.05, 0.5);
    GridFunction u = GridFunction::sample(rep->grid(), scalar_preset("cos(2)", d));
    const double top = rep->nodal_values(u).maxCoeff();
    u.attach_exterior(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(rep->grid().exterior.size()), top + 1.0),
                      rep->tag());
    for (std::size_t k = 0; k < rep->grid().exterior.size(); ++k) {
        EXPECT_GT(neumann_derivative(u, k, *rep), 0.0);
    }
}

TEST(Extension, StaleCacheIsRejected) {
    const Domain d = Domain::interval(0, 1);
    const auto a = make_rep(d, 0.05, 0.5);
    const auto b = make_rep(d, 0.05, 0.3);
    const GridFunction u = extend(GridFunction::constant(a->grid(), 1.0), *a);
    EXPECT_ANY_THROW((void)neumann_derivative(u, 0, *b));
    EXPECT_ANY_THROW((void)neumann_derivative(GridFunction::constant(a->grid(), 1.0), 0, *a));
}

TEST(GradientRate, LinearDataQuarter) {
    const Domain unit = Domain::interval(0.0, 1.0);
    const auto rep = make_rep(unit, 1.0 / 100.0, 0.25);
    const GridFunction u = GridFunction::sample(rep->grid(), [](const Point& x) { return x.x(); });
    const GradientRate r = exterior_gradient_rate(u, *rep);
    ASSERT_FALSE(r.flat);
    EXPECT_GE(r.slope, -0.6);
    // |grad u_1| <= C delta^{-1/2} with one constant along the shells
    double c = 0.0;
    for (std::size_t k = 0; k < r.delta.size(); ++k) {
        c = std::max(c, r.gradient[k] * std::sqrt(r.delta[k]));
    }
    for (std::size_t k = 0; k < r.delta.size(); ++k) {
        EXPECT_LE(r.gradient[k], c * std::pow(r.delta[k], -0.5) * (1 + 1e-12));
    }
}

TEST(GradientRate, BoundedForLargeOrder) {
    const Domain unit = Domain::interval(0.0, 1.0);
    const auto rep = make_rep(unit, 1.0 / 100.0, 0.75);
    const GridFunction u = GridFunction::sample(rep->grid(), scalar_preset("gauss(0.2,0.3)", unit));
    const GradientRate r = exterior_gradient_rate(u, *rep);
    ASSERT_FALSE(r.flat);
    EXPECT_GE(r.slope, -0.1);
}

TEST(GradientRate, ConstantIsFlat) {
    const Domain unit = Domain::interval(0.0, 1.0);
    const auto rep = make_rep(unit, 1.0 / 50.0, 0.5);
    EXPECT_TRUE(exterior_gradient_rate(GridFunction::constant(rep->grid(), 2.0), *rep).flat);
}

TEST(ExtensionProperty, Linear) {
    for_all(5, 22, [](Gen& g) {
        const Domain d = any_domain(g);
        const auto rep = make_rep(d, spacing_for(g, d), g.order());
        const GridFunction u = GridFunction::sample(rep->grid(), g.smooth(d));
        const GridFunction v = GridFunction::sample(rep->grid(), g.smooth(d));
        const double alpha = g.uniform(-2, 2);
        const double beta = g.uniform(-2, 2);
        const Eigen::VectorXd lhs = extend(combine(alpha, u, beta, v), *rep).exterior();
        const Eigen::VectorXd rhs = alpha * extend(u, *rep).exterior() + beta * extend(v, *rep).exterior();
        EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
    });
}

TEST(ExtensionProperty, OrderPreservingAndBounded) {
    for_all(5, 23, [](Gen& g) {
        const Domain d = any_domain(g);
        const auto rep = make_rep(d, spacing_for(g, d), g.order());
        const GridFunction u = GridFunction::sample(rep->grid(), g.smooth(d));
        const ScalarField bump = random_positive(g.rng(), d, 0.0);
        const GridFunction v = combine(1.0, u, 1.0, GridFunction::sample(rep->grid(), bump));
        const Eigen::VectorXd ue = extend(u, *rep).exterior();
        const Eigen::VectorXd ve = extend(v, *rep).exterior();
        const Eigen::VectorXd nodal = rep->nodal_values(u);
        for (Eigen::Index k = 0; k < ue.size(); ++k) {
            EXPECT_LE(ue[k], ve[k] + 1e-13);
            EXPECT_GE(ue[k], nodal.minCoeff() - 1e-13);
            EXPECT_LE(ue[k], nodal.maxCoeff() + 1e-13);
        }
    });
}

TEST(ExtensionProperty, StrictlyAboveMinimumOfNonConstantData) {
    for_all(5, 24, [](Gen& g) {
        const Domain d = any_domain(g);
        const auto rep = make_rep(d, spacing_for(g, d), g.order());
        const GridFunction u = GridFunction::sample(rep->grid(), g.smooth(d));
        const double lowest = rep->nodal_values(u).minCoeff();
        const Eigen::VectorXd ue = extend(u, *rep).exterior();
        for (Eigen::Index k = 0; k < ue.size(); ++k) {
            EXPECT_GT(ue[k], lowest);
        }
    });
}

TEST(ExtensionProperty, NeumannResidualConvergesUnderRefinement) {
    for_all(6, 25, [](Gen& g) {
        const Domain d = Domain::interval(0.0, 1.0);
        const double s = g.order_from({0.3, 0.5, 0.7});
        const ScalarField f = g.smooth(d);
        const auto checks = neumann_check_points(d);
        const double coarse = neumann_residual(f, *make_rep(d, 1.0 / 40.0, s), checks);
        const double fine = neumann_residual(f, *make_rep(d, 1.0 / 80.0, s), checks);
        EXPECT_GE(coarse, 2.0 * fine) << "s=" << s;
    });
}
