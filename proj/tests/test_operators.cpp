#include "generators.hpp"

#include "mixedfrac/extension.hpp"
#include "mixedfrac/operators.hpp"
#include "mixedfrac/solver.hpp"
#include "mixedfrac/verification.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace mixedfrac;
using mixedfrac::testing::for_all;
using mixedfrac::testing::Gen;
using mixedfrac::testing::make_rep;

namespace {

const Domain unit = Domain::interval(0.0, 1.0);

std::size_t node_at(const Representation& rep, double x) {
    const auto& in = rep.grid().interior;
    std::size_t best = 0;
    for (std::size_t k = 1; k < in.size(); ++k) {
        if (std::abs(in[k].x() - x) < std::abs(in[best].x() - x)) {
            best = k;
        }
    }
    return best;
}

}  // namespace

TEST(LocalLaplacian, ExactForQuadratics) {
    const auto rep = make_rep(unit, 0.1, 0.5);
    const GridFunction u = GridFunction::sample(rep->grid(), [](const Point& x) { return x.x() * x.x(); });
    for (std::size_t i = 0; i < rep->grid().interior.size(); ++i) {
        EXPECT_NEAR(local_laplacian(u, i, *rep), -2.0, 1e-11);
    }
    const GridFunction c = GridFunction::constant(rep->grid(), 4.0);
    EXPECT_EQ(local_laplacian(c, 3, *rep), 0.0);
}

TEST(LocalLaplacian, SecondOrder) {
    auto error = [](double h) {
        const auto rep = make_rep(unit, h, 0.5);
        const GridFunction u =
            GridFunction::sample(rep->grid(), [](const Point& x) { return std::sin(std::numbers::pi * x.x()); });
        const std::size_t i = node_at(*rep, 0.5);
        return std::abs(local_laplacian(u, i, *rep) - std::numbers::pi * std::numbers::pi);
    };
    const double ratio = error(0.05) / error(0.025);
    EXPECT_NEAR(ratio, 4.0, 0.1);
}

TEST(Gradient, LinearAndCubic) {
    const auto rep = make_rep(unit, 0.1, 0.5);
    const GridFunction u = GridFunction::sample(rep->grid(), [](const Point& x) { return x.x(); });
    EXPECT_NEAR(gradient(u, 4, *rep).x(), 1.0, 1e-13);
    EXPECT_EQ(gradient(GridFunction::constant(rep->grid(), 1.0), 4, *rep).x(), 0.0);

    auto error = [](double h) {
        const auto r = make_rep(unit, h, 0.5);
        const GridFunction c = GridFunction::sample(r->grid(), [](const Point& x) { return std::pow(x.x(), 3); });
        return std::abs(gradient(c, node_at(*r, 0.5), *r).x() - 0.75);
    };
    EXPECT_NEAR(error(0.05) / error(0.025), 4.0, 0.1);
}

TEST(FracLaplacian, ConstantsAnnihilated) {
    for (const Domain& d : {unit, Domain::disk(Point(0, 0), 0.5)}) {
        const auto rep = make_rep(d, d.diameter() / 16.0, 0.6);
        const Eigen::VectorXd v = frac_laplacian_all(extend(GridFunction::constant(rep->grid(), 3.0), *rep), *rep);
        EXPECT_LE(v.cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(FracLaplacian, MatchesBruteForceOracle) {
    const auto rep = make_rep(unit, 1.0 / 32.0, 0.5);
    const auto& r1 = dynamic_cast<const PiecewiseLinear1D&>(*rep);
    const GridFunction u = GridFunction::sample(rep->grid(), scalar_preset("cos(1.5)", unit));
    const OracleRow row = compare_operator_oracle(r1, rep->nodal_values(u));
    EXPECT_EQ(row.samples, 31u);
    EXPECT_LE(row.max_abs, 1e-8);
    const Eigen::VectorXd lib = frac_laplacian_all(extend(u, *rep), *rep);
    EXPECT_NEAR(lib[10], oracle_frac_laplacian(r1, rep->nodal_values(u), 11), 1e-8);
}

TEST(FracLaplacian, BreakdownAgreesWithRow) {
    for (const Domain& d : {unit, Domain::disk(Point(0, 0), 0.5)}) {
        const auto rep = make_rep(d, d.diameter() / 12.0, 0.4);
        const GridFunction u = extend(GridFunction::sample(rep->grid(), scalar_preset("cos(2)", d)), *rep);
        const auto parts = frac_laplacian_breakdown_all(u, *rep);
        for (std::size_t i = 0; i < parts.size(); i += 5) {
            const double row = frac_laplacian_extended(u, i, *rep);
            const auto& b = parts[i];
            EXPECT_NEAR(b.total, row, 1e-6 * (1.0 + std::abs(row)));
            EXPECT_NEAR(b.interior_near + b.exterior_near + b.far, b.total, 1e-10 * (1.0 + std::abs(row)));
            EXPECT_NEAR(b.a[0] + b.a[1] + b.a[2] + b.a[3] + b.a_far, b.total, 1e-10 * (1.0 + std::abs(row)));
        }
    }
}

TEST(OperatorProperty, Linear) {
    for_all(5, 31, [](Gen& g) {
        const Domain d = g.integer(0, 2) ? g.interval() : g.disk();
        const auto rep = make_rep(d, d.shape() == Shape::Interval ? g.spacing(d, 16, 48) : g.spacing(d, 8, 12), g.order());
        const GridFunction u = GridFunction::sample(rep->grid(), g.smooth(d));
        const GridFunction v = GridFunction::sample(rep->grid(), g.smooth(d));
        const double alpha = g.uniform(-2, 2);
        const double beta = g.uniform(-2, 2);
        const Eigen::VectorXd lhs = frac_laplacian_all(extend(combine(alpha, u, beta, v), *rep), *rep);
        const Eigen::VectorXd rhs =
            alpha * frac_laplacian_all(extend(u, *rep), *rep) + beta * frac_laplacian_all(extend(v, *rep), *rep);
        EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + rhs.cwiseAbs().maxCoeff()));
    });
}

TEST(OperatorProperty, FullRowsAnnihilateConstants) {
    for_all(5, 32, [](Gen& g) {
        const Domain d = g.integer(0, 2) ? g.interval() : g.disk();
        const auto rep = make_rep(d, d.shape() == Shape::Interval ? g.spacing(d, 16, 48) : g.spacing(d, 8, 12), g.order());
        const Coefficients c = random_coefficients(g.rng(), d, SourceKind::Signed);
        const double gamma = g.uniform(0.0, 1.0);
        const ProblemData pd = make_problem(*rep, c, gamma);
        const LinearSystem sys = assemble(rep, pd);
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(sys.A.cols());
        EXPECT_LE((sys.A * ones - pd.a).cwiseAbs().maxCoeff(), 1e-9 * (1.0 + sys.A.cwiseAbs().maxCoeff() * 1e-3));
    });
}

TEST(OperatorProperty, NegativeAtInteriorMinimum) {
    for_all(5, 33, [](Gen& g) {
        const Domain d = g.integer(0, 2) ? g.interval() : g.disk();
        const auto rep = make_rep(d, d.shape() == Shape::Interval ? g.spacing(d, 16, 48) : g.spacing(d, 8, 12), g.order());
        // a well inside the domain plus a random ripple too small to move the minimum to the boundary
        const Point c = d.shape() == Shape::Interval ? point1d(g.uniform(0.3, 0.7) * d.diameter() + d.lower())
                                                     : d.center() + 0.3 * d.radius() * Point(g.uniform(-1, 1), g.uniform(-1, 1));
        const ScalarField ripple = g.smooth(d);
        const double width = 0.2 * d.diameter();
        const GridFunction u = GridFunction::sample(rep->grid(), [&](const Point& x) {
            return -std::exp(-(x - c).squaredNorm() / (width * width)) + 0.01 * ripple(x);
        });
        const Eigen::VectorXd nodal = rep->nodal_values(u);
        Eigen::Index arg = 0;
        nodal.minCoeff(&arg);
        const Eigen::Index first = d.dimension() == 1 ? 1 : 0;
        const std::size_t i = static_cast<std::size_t>(arg - first);
        ASSERT_GE(arg, first);
        ASSERT_LT(i, rep->grid().interior.size());
        EXPECT_LT(frac_laplacian_extended(extend(u, *rep), i, *rep), 0.0);
    });
}

TEST(OperatorProperty, SelfConvergentUnderRefinement) {
    for (const double s : {0.3, 0.5, 0.7}) {
        std::vector<double> values;
        for (const double h : {1.0 / 64, 1.0 / 128, 1.0 / 256, 1.0 / 512}) {
            const auto rep = make_rep(unit, h, s);
            const GridFunction u = extend(GridFunction::sample(rep->grid(), scalar_preset("cos(1.5)", unit)), *rep);
            values.push_back(frac_laplacian_extended(u, node_at(*rep, 0.5), *rep));
        }
        const double d1 = std::abs(values[1] - values[0]);
        const double d2 = std::abs(values[2] - values[1]);
        const double d3 = std::abs(values[3] - values[2]);
        // piecewise-linear data: order 2 - 2s
        EXPECT_GT(std::log2(d1 / d2), 0.3) << "s=" << s;
        EXPECT_GT(std::log2(d2 / d3), 0.3) << "s=" << s;
        EXPECT_NEAR(std::log2(d2 / d3), 2.0 - 2.0 * s, 0.35) << "s=" << s;
    }
}
